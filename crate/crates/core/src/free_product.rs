//! Two-factor free product structure: splits, syllable forms, and the
//! Rhemtulla weight function.
//!
//! A [`Split`] labels every generator of an alphabet `A` or `B`, presenting
//! the free group as the free product of the two sub-alphabets' free groups.
//! Every non-neutral word then has a unique alternating factorization into
//! non-neutral syllables, and for a fixed non-neutral `b` lying in one part
//! the weight `w_b(x)` counts syllables equal to `b` minus syllables equal
//! to `b^-1`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::word::{Alphabet, FreeWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeProductError {
    #[error("split part {0} has no generators")]
    EmptyPart(Part),
    #[error("split labels {labels} generators but the alphabet has rank {rank}")]
    WrongRank { labels: usize, rank: usize },
    #[error("base element must be non-neutral")]
    NeutralBase,
    #[error("base element must lie entirely in one factor")]
    MixedBase,
    #[error("word and split use different alphabets")]
    AlphabetMismatch,
    #[error("malformed split notation (expected \"a1,a2|b1,b2\")")]
    BadNotation,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Which free factor a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::A => Part::B,
            Part::B => Part::A,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::A => write!(f, "A"),
            Part::B => write!(f, "B"),
        }
    }
}

/// A partition of an alphabet into two non-empty free factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    alphabet: Arc<Alphabet>,
    parts: Vec<Part>,
}

impl Split {
    pub fn new(alphabet: &Arc<Alphabet>, parts: Vec<Part>) -> Result<Split, FreeProductError> {
        if parts.len() != alphabet.rank() {
            return Err(FreeProductError::WrongRank {
                labels: parts.len(),
                rank: alphabet.rank(),
            });
        }
        for part in [Part::A, Part::B] {
            if !parts.contains(&part) {
                return Err(FreeProductError::EmptyPart(part));
            }
        }
        Ok(Split {
            alphabet: Arc::clone(alphabet),
            parts,
        })
    }

    /// Parses the CLI notation `a1,a2|b1,b2` (A-part before the bar) and
    /// builds the corresponding alphabet along the way.
    pub fn parse(text: &str) -> Result<Split, FreeProductError> {
        let (left, right) = text.split_once('|').ok_or(FreeProductError::BadNotation)?;
        let side = |s: &str| -> Vec<String> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        };
        let a_names = side(left);
        let b_names = side(right);
        if a_names.is_empty() {
            return Err(FreeProductError::EmptyPart(Part::A));
        }
        if b_names.is_empty() {
            return Err(FreeProductError::EmptyPart(Part::B));
        }
        let mut parts = vec![Part::A; a_names.len()];
        parts.extend(std::iter::repeat_n(Part::B, b_names.len()));
        let alphabet = Alphabet::new(a_names.into_iter().chain(b_names))?;
        Split::new(&alphabet, parts)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn part_of(&self, gen: usize) -> Part {
        self.parts[gen]
    }

    pub fn generators_in(&self, part: Part) -> impl Iterator<Item = usize> + '_ {
        self.parts
            .iter()
            .enumerate()
            .filter(move |(_, p)| **p == part)
            .map(|(i, _)| i)
    }

    /// The factor containing a word's support, `None` for the neutral word
    /// or a word meeting both factors.
    pub fn word_part(&self, w: &FreeWord) -> Option<Part> {
        let mut found = None;
        for run in w.runs() {
            let p = self.part_of(run.gen);
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        found
    }
}

/// The alternating syllable factorization of a reduced word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllableForm {
    syllables: Vec<(Part, FreeWord)>,
}

impl SyllableForm {
    pub fn syllables(&self) -> &[(Part, FreeWord)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Concatenates the syllables back together; reproduces the original word.
    pub fn reassemble(&self, alphabet: &Arc<Alphabet>) -> FreeWord {
        let mut acc = FreeWord::neutral(alphabet);
        for (_, s) in &self.syllables {
            acc = acc.concat_unchecked(s);
        }
        acc
    }
}

/// The unique alternating decomposition of `w` under `split`; empty for the
/// neutral word. `w` is reduced by construction, so every syllable is
/// non-neutral and consecutive syllables lie in different parts.
pub fn syllables(w: &FreeWord, split: &Split) -> Result<SyllableForm, FreeProductError> {
    if w.alphabet() != split.alphabet() {
        return Err(FreeProductError::AlphabetMismatch);
    }
    let mut out: Vec<(Part, Vec<crate::word::Run>)> = Vec::new();
    for run in w.runs() {
        let part = split.part_of(run.gen);
        match out.last_mut() {
            Some((p, runs)) if *p == part => runs.push(run.clone()),
            _ => out.push((part, vec![run.clone()])),
        }
    }
    Ok(SyllableForm {
        syllables: out
            .into_iter()
            .map(|(p, runs)| (p, FreeWord::from_reduced_runs(w.alphabet(), runs)))
            .collect(),
    })
}

fn validate_base(
    form_alphabet: &Arc<Alphabet>,
    split: &Split,
    b: &FreeWord,
) -> Result<(), FreeProductError> {
    if b.alphabet() != form_alphabet {
        return Err(FreeProductError::AlphabetMismatch);
    }
    if b.is_neutral() {
        return Err(FreeProductError::NeutralBase);
    }
    if split.word_part(b).is_none() {
        return Err(FreeProductError::MixedBase);
    }
    Ok(())
}

/// Counts syllables exactly equal to `b` and exactly equal to `b^-1`.
///
/// Only whole-syllable equality counts: the syllable `b^2` contributes to
/// neither tally.
pub fn multiplicity(
    form: &SyllableForm,
    split: &Split,
    b: &FreeWord,
) -> Result<(u64, u64), FreeProductError> {
    validate_base(split.alphabet(), split, b)?;
    let b_inv = b.invert();
    let mut count_b = 0u64;
    let mut count_b_inv = 0u64;
    for (_, s) in &form.syllables {
        if s == b {
            count_b += 1;
        } else if *s == b_inv {
            count_b_inv += 1;
        }
    }
    Ok((count_b, count_b_inv))
}

/// The Rhemtulla weight `w_b(x)`: multiplicity of `b` minus multiplicity of
/// `b^-1` in the syllable form of `x`. Zero on the neutral word.
pub fn weight(w: &FreeWord, split: &Split, b: &FreeWord) -> Result<i64, FreeProductError> {
    let form = syllables(w, split)?;
    let (count_b, count_b_inv) = multiplicity(&form, split, b)?;
    Ok(count_b as i64 - count_b_inv as i64)
}
