//! Seeded random word generators for fuzz corpora.
//!
//! Used by the property suites and by the CLI verify driver; everything is
//! driven by a caller-supplied RNG so runs are reproducible.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::free_product::{Part, Split};
use crate::word::{Alphabet, FreeWord};

/// A reduced word of at most `max_letters` letters (possibly neutral).
pub fn random_word<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, max_letters: usize) -> FreeWord {
    let n = rng.gen_range(0..=max_letters);
    let letters: Vec<(usize, i64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0..alphabet.rank()),
                if rng.gen::<bool>() { 1 } else { -1 },
            )
        })
        .collect();
    FreeWord::from_letters(alphabet, letters).expect("indices in range")
}

/// A non-neutral reduced word of at most `max_letters` letters.
pub fn random_nonneutral_word<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_letters: usize,
) -> FreeWord {
    loop {
        let w = random_word(rng, alphabet, max_letters.max(1));
        if !w.is_neutral() {
            return w;
        }
    }
}

/// A word in the commutator subgroup: a random word followed by the
/// per-generator correction that zeroes its abelianization, so the result
/// has at most `2 * max_letters` letters.
pub fn random_kernel_word<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_letters: usize,
) -> FreeWord {
    let w = random_word(rng, alphabet, max_letters);
    let correction = w.abelianize();
    let mut acc = w;
    for (gen, exp) in correction.entries().iter().enumerate() {
        let fix =
            FreeWord::from_runs(acc.alphabet(), [(gen, -exp.clone())]).expect("indices in range");
        acc = acc.concat_unchecked(&fix);
    }
    debug_assert!(acc.abelianize().is_zero());
    acc
}

/// A non-neutral word supported on one part of a split.
pub fn random_part_word<R: Rng>(
    rng: &mut R,
    split: &Split,
    part: Part,
    max_letters: usize,
) -> FreeWord {
    let generators: Vec<usize> = split.generators_in(part).collect();
    loop {
        let n = rng.gen_range(1..=max_letters.max(1));
        let letters: Vec<(usize, i64)> = (0..n)
            .map(|_| {
                (
                    generators[rng.gen_range(0..generators.len())],
                    if rng.gen::<bool>() { 1 } else { -1 },
                )
            })
            .collect();
        let w = FreeWord::from_letters(split.alphabet(), letters).expect("indices in range");
        if !w.is_neutral() {
            return w;
        }
    }
}

/// A product of `k` commutators `[x_i, y_i]` with the factors drawn by the
/// supplied closure.
pub fn random_commutator_product<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    k: usize,
    mut draw: impl FnMut(&mut R) -> FreeWord,
) -> FreeWord {
    let mut acc = FreeWord::neutral(alphabet);
    for _ in 0..k {
        let x = draw(rng);
        let y = draw(rng);
        acc = acc.concat_unchecked(&x.commutator(&y).expect("same alphabet"));
    }
    acc
}

/// A random product of the given words and their inverses, `factors` long.
pub fn random_product_of<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    words: &[FreeWord],
    factors: usize,
) -> FreeWord {
    let mut acc = FreeWord::neutral(alphabet);
    if words.is_empty() {
        return acc;
    }
    for _ in 0..factors {
        let w = &words[rng.gen_range(0..words.len())];
        let w = if rng.gen::<bool>() {
            w.clone()
        } else {
            w.invert()
        };
        acc = acc.concat_unchecked(&w);
    }
    acc
}

/// A random power `w^e` with `e` in `-3..=3` (never 0 when `w` is not
/// neutral and `nonzero` is set).
pub fn random_small_power<R: Rng>(rng: &mut R, w: &FreeWord, nonzero: bool) -> FreeWord {
    loop {
        let e = rng.gen_range(-3i64..=3);
        if nonzero && e == 0 {
            continue;
        }
        return w.pow(&BigInt::from(e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_words_abelianize_to_zero() {
        let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let w = random_kernel_word(&mut rng, &alphabet, 20);
            assert!(w.abelianize().is_zero());
            assert!(w.letter_len() <= 40u32.into());
        }
    }

    #[test]
    fn part_words_stay_in_part() {
        let split = Split::parse("a1,a2|b1,b2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let w = random_part_word(&mut rng, &split, Part::B, 6);
            assert_eq!(split.word_part(&w), Some(Part::B));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            assert_eq!(
                random_word(&mut r1, &alphabet, 12),
                random_word(&mut r2, &alphabet, 12)
            );
        }
    }
}
