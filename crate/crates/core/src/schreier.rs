//! Rewriting of commutator-subgroup words over the abelianization kernel.
//!
//! The coset space of the kernel is the integer lattice of exponent vectors;
//! the transversal representative of a coset is the canonical monomial
//! `x_1^{e_1} ... x_r^{e_r}` in generator-index order. Walking a kernel word
//! letter by letter and emitting the nontrivial transversal letters rewrites
//! it as a product of elements `t x (rep of tx)^-1`, each of which is a
//! conjugate of a commutator and hence a commutator. The letter count is
//! therefore a constructive commutator-length upper bound.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::word::{Alphabet, ExponentVector, FreeWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchreierError {
    #[error("word lies outside the abelianization kernel")]
    NotInKernel,
}

/// One nontrivial Schreier generator `t x_g (rep of t x_g)^-1`, identified
/// by the coset of `t` and the generator index. Trivial letters (those whose
/// associated element is neutral) are never constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierLetter {
    alphabet: Arc<Alphabet>,
    coset: ExponentVector,
    generator: usize,
}

/// Transversal representative of a coset: the canonical monomial word.
fn rep_word(alphabet: &Arc<Alphabet>, coset: &[BigInt]) -> FreeWord {
    FreeWord::from_runs(
        alphabet,
        coset
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(g, e)| (g, e.clone())),
    )
    .expect("indices in range")
}

impl SchreierLetter {
    /// Constructs the letter for `(coset, generator)` unless it is trivial,
    /// i.e. unless every coordinate above `generator` vanishes (a move along
    /// the transversal tree).
    fn nontrivial(
        alphabet: &Arc<Alphabet>,
        coset: &[BigInt],
        generator: usize,
    ) -> Option<SchreierLetter> {
        if coset[generator + 1..].iter().all(Zero::is_zero) {
            return None;
        }
        Some(SchreierLetter {
            alphabet: Arc::clone(alphabet),
            coset: ExponentVector::from_entries(coset.to_vec()),
            generator,
        })
    }

    pub fn coset(&self) -> &ExponentVector {
        &self.coset
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    /// The group element `rep(coset) x_g rep(coset + delta_g)^-1`, reduced.
    pub fn word_form(&self) -> FreeWord {
        let t = rep_word(&self.alphabet, self.coset.entries());
        let mut next = self.coset.entries().to_vec();
        next[self.generator] += 1;
        let s = rep_word(&self.alphabet, &next);
        let x = FreeWord::generator(&self.alphabet, self.generator).expect("index in range");
        t.concat_unchecked(&x).concat_unchecked(&s.invert())
    }
}

/// Rewrites a kernel word as a sequence of signed nontrivial Schreier
/// letters. Expanding the letters in order and reducing reproduces the word.
pub fn rewrite(w: &FreeWord) -> Result<Vec<(SchreierLetter, i8)>, SchreierError> {
    if !w.abelianize().is_zero() {
        return Err(SchreierError::NotInKernel);
    }
    let alphabet = w.alphabet();
    let mut coset = vec![BigInt::zero(); alphabet.rank()];
    let mut letters = Vec::new();
    for (gen, sign) in w.letters() {
        if sign > 0 {
            if let Some(letter) = SchreierLetter::nontrivial(alphabet, &coset, gen) {
                letters.push((letter, 1));
            }
            coset[gen] += 1;
        } else {
            coset[gen] -= 1;
            if let Some(letter) = SchreierLetter::nontrivial(alphabet, &coset, gen) {
                letters.push((letter, -1));
            }
        }
    }
    debug_assert!(coset.iter().all(Zero::is_zero));
    Ok(letters)
}

/// Concatenates letter word forms with their signs and reduces.
pub fn expand_letters(alphabet: &Arc<Alphabet>, letters: &[(SchreierLetter, i8)]) -> FreeWord {
    let mut acc = FreeWord::neutral(alphabet);
    for (letter, sign) in letters {
        let form = letter.word_form();
        acc = acc.concat_unchecked(&if *sign >= 0 { form } else { form.invert() });
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClUpperBound {
    Finite(u64),
    Infinite,
}

impl ClUpperBound {
    pub fn finite(self) -> Option<u64> {
        match self {
            ClUpperBound::Finite(n) => Some(n),
            ClUpperBound::Infinite => None,
        }
    }
}

/// Constructive commutator-length upper bound: infinite outside the
/// abelianization kernel, otherwise the number of Schreier letters of the
/// rewriting (each letter is a single commutator).
pub fn cl_upper_bound(w: &FreeWord) -> ClUpperBound {
    match rewrite(w) {
        Ok(letters) => ClUpperBound::Finite(letters.len() as u64),
        Err(SchreierError::NotInKernel) => ClUpperBound::Infinite,
    }
}
