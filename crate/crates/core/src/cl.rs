//! Commutator-length bounds and related certificates.
//!
//! The lower bound comes from the Rhemtulla weight: a product of `k`
//! commutators has `|w_b| <= 12k - 3`, so any word with weight `w` has
//! commutator length at least `ceil((|w| + 3) / 12)`. The upper bound is the
//! Schreier letter count from [`crate::schreier`]. Exact length in general is
//! out of reach, but `cl <= 1` is decidable: a cyclically reduced word is a
//! commutator exactly when some rotation factors as `A B C A^-1 B^-1 C^-1`
//! (Wicks form), which brute enumeration of the rotation and the two cut
//! points settles in polynomial time.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::free_product::{weight, FreeProductError, Part, Split};
use crate::matrix::{eval_matrix, Mat2, MatrixAssignment};
use crate::schreier::{cl_upper_bound, ClUpperBound};
use crate::word::{Alphabet, FreeWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClError {
    #[error("word has infinite commutator length (nonzero abelianization)")]
    InfiniteCommutatorLength,
    #[error("element must be non-neutral and lie in part {expected}")]
    WrongPart { expected: Part },
    #[error(transparent)]
    FreeProduct(#[from] FreeProductError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Sound lower/upper sandwich for the commutator length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClBounds {
    /// The word is outside the commutator subgroup.
    Infinite,
    Finite {
        lower: u64,
        upper: u64,
    },
}

pub(crate) fn lower_bound_from_weight(weight: i64) -> u64 {
    // ceil((|weight| + 3) / 12), which is >= 1 for every weight
    (weight.unsigned_abs() + 14) / 12
}

/// Weight-based commutator-length lower bound. Zero only for the neutral
/// word; an error for words outside the commutator subgroup, whose length is
/// infinite rather than a number.
pub fn cl_lower_bound(w: &FreeWord, split: &Split, b: &FreeWord) -> Result<u64, ClError> {
    if w.is_neutral() {
        return Ok(0);
    }
    if !w.abelianize().is_zero() {
        return Err(ClError::InfiniteCommutatorLength);
    }
    let wt = weight(w, split, b)?;
    Ok(lower_bound_from_weight(wt).max(1))
}

fn segment_inverse(x: &[(usize, i8)], y: &[(usize, i8)]) -> bool {
    x.len() == y.len()
        && x.iter()
            .zip(y.iter().rev())
            .all(|(a, b)| a.0 == b.0 && a.1 == -b.1)
}

/// Wicks-form search over all rotations and cut-point pairs of a cyclically
/// reduced letter sequence. Rotations of a cyclically reduced word are
/// reduced, so block concatenation never cancels and plain segment equality
/// suffices.
fn wicks_search(core: &[(usize, i8)]) -> bool {
    let n = core.len();
    if n == 0 {
        return true;
    }
    if !n.is_multiple_of(2) {
        return false;
    }
    let half = n / 2;
    let mut doubled = core.to_vec();
    doubled.extend_from_slice(core);
    for r in 0..n {
        let u = &doubled[r..r + n];
        for i in 0..=half {
            if !segment_inverse(&u[0..i], &u[half..half + i]) {
                continue;
            }
            for j in i..=half {
                if segment_inverse(&u[i..j], &u[half + i..half + j])
                    && segment_inverse(&u[j..half], &u[half + j..n])
                {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether `cl(w) <= 1`: true for the neutral word and for single
/// commutators, false otherwise.
pub fn is_commutator(w: &FreeWord) -> bool {
    if w.is_neutral() {
        return true;
    }
    if !w.abelianize().is_zero() {
        return false;
    }
    let (core, _) = w.cyclic_reduce();
    let letters: Vec<(usize, i8)> = core.letters().collect();
    wicks_search(&letters)
}

/// Combined sandwich: infinite outside the commutator subgroup, otherwise
/// the weight lower bound against the Schreier upper bound, tightened to 1
/// when the Wicks search certifies a single commutator.
pub fn cl_bounds(w: &FreeWord, split: &Split, b: &FreeWord) -> Result<ClBounds, ClError> {
    if !w.abelianize().is_zero() {
        return Ok(ClBounds::Infinite);
    }
    let lower = cl_lower_bound(w, split, b)?;
    let upper = match cl_upper_bound(w) {
        ClUpperBound::Finite(u) => u,
        ClUpperBound::Infinite => unreachable!("kernel membership already checked"),
    };
    let upper = if is_commutator(w) {
        upper.min(if w.is_neutral() { 0 } else { 1 })
    } else {
        upper
    };
    Ok(ClBounds::Finite { lower, upper })
}

/// One row of the divergence table for `[ab, ba]^L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupRow {
    pub exponent: u64,
    pub weight: i64,
    pub lower_bound: u64,
}

/// Builds `[ab, ba]^L` for `L = 1..=l_max` by explicit construction and
/// counts syllables for each power. The weight column is `-2L` and the
/// lower-bound column is unbounded in `L`, which is the divergence
/// certificate for `sup cl([ab, ba]^n) = infinity`.
pub fn sup_divergence_table(
    l_max: u64,
    split: &Split,
    a: &FreeWord,
    b: &FreeWord,
) -> Result<Vec<SupRow>, ClError> {
    if split.word_part(a) != Some(Part::A) {
        return Err(ClError::WrongPart { expected: Part::A });
    }
    if split.word_part(b) != Some(Part::B) {
        return Err(ClError::WrongPart { expected: Part::B });
    }
    let base = a.concat(b)?.commutator(&b.concat(a)?)?;
    let mut rows = Vec::with_capacity(l_max as usize);
    let mut current = FreeWord::neutral(a.alphabet());
    for exponent in 1..=l_max {
        current = current.concat(&base)?;
        let wt = weight(&current, split, b)?;
        rows.push(SupRow {
            exponent,
            weight: wt,
            lower_bound: lower_bound_from_weight(wt),
        });
    }
    Ok(rows)
}

/// Outcome of one randomized matrix trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkTrial {
    pub index: u32,
    pub even_identity: bool,
    pub odd_identity: bool,
}

impl RemarkTrial {
    pub fn pass(&self) -> bool {
        self.even_identity && self.odd_identity
    }
}

/// Report for the power-of-a-commutator identities under the relation
/// `b^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkReport {
    pub n: u64,
    pub trials: Vec<RemarkTrial>,
    /// In the free group itself the two sides differ, confirming the
    /// identities genuinely use the relation. Vacuously true for `n = 0`.
    pub free_group_control_distinct: bool,
}

impl RemarkReport {
    pub fn all_pass(&self) -> bool {
        self.free_group_control_distinct && self.trials.iter().all(RemarkTrial::pass)
    }
}

fn random_unimodular<R: Rng>(rng: &mut R) -> Mat2 {
    let mut m = Mat2::identity();
    for _ in 0..rng.gen_range(3..=6) {
        let k = loop {
            let k = rng.gen_range(-3i64..=3);
            if k != 0 {
                break k;
            }
        };
        let shear = if rng.gen::<bool>() {
            Mat2::from_i64([[1, k], [0, 1]])
        } else {
            Mat2::from_i64([[1, 0], [k, 1]])
        };
        m = m.mul(&shear);
    }
    if rng.gen::<bool>() {
        m = m.mul(&Mat2::from_i64([[1, 0], [0, -1]]));
    }
    m
}

/// A non-central integer involution: a conjugate of `diag(1, -1)` by a
/// random unimodular matrix.
fn random_involution<R: Rng>(rng: &mut R) -> Mat2 {
    let s = random_unimodular(rng);
    let d = Mat2::from_i64([[1, 0], [0, -1]]);
    let m = s.mul(&d).mul(&s.inverse().expect("unimodular"));
    debug_assert_eq!(m.mul(&m), Mat2::identity());
    m
}

/// Verifies, over `trials` seeded integer matrix assignments in which the
/// image of `b` squares to the identity (so `b^2 a = a b^2` holds), the exact
/// identities
///
/// ```text
/// [a,b]^(2n)   = [[a,b]^-n, b]
/// [a,b]^(2n+1) = [a [a,b]^-n, b]
/// ```
///
/// and that the corresponding word identities fail under free reduction
/// alone.
pub fn remark_identity_check(n: u64, trials: u32, seed: u64) -> RemarkReport {
    let alphabet = Alphabet::new(["a", "b"]).expect("static names");
    let a = FreeWord::generator(&alphabet, 0).expect("index 0");
    let b = FreeWord::generator(&alphabet, 1).expect("index 1");
    let c = a.commutator(&b).expect("same alphabet");
    let c_neg_n = c.pow(&-BigInt::from(n));

    let even_lhs = c.pow(&BigInt::from(2 * n));
    let even_rhs = c_neg_n.commutator(&b).expect("same alphabet");
    let odd_lhs = c.pow(&BigInt::from(2 * n + 1));
    let odd_rhs = a
        .concat(&c_neg_n)
        .expect("same alphabet")
        .commutator(&b)
        .expect("same alphabet");

    let control = n == 0 || !even_lhs.concat_unchecked(&even_rhs.invert()).is_neutral();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(trials as usize);
    for index in 0..trials {
        let mut assignment = MatrixAssignment::new(&alphabet);
        assignment
            .assign(0, random_unimodular(&mut rng))
            .expect("unimodular by construction");
        assignment
            .assign(1, random_involution(&mut rng))
            .expect("unimodular by construction");
        let image = |w: &FreeWord| eval_matrix(w, &assignment).expect("fully assigned");
        results.push(RemarkTrial {
            index,
            even_identity: image(&even_lhs) == image(&even_rhs),
            odd_identity: image(&odd_lhs) == image(&odd_rhs),
        });
    }
    RemarkReport {
        n,
        trials: results,
        free_group_control_distinct: control,
    }
}
