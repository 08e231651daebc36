//! Reduced words over a ranked generator alphabet.
//!
//! A [`FreeWord`] stores a word in run-length form: a sequence of
//! `(generator, exponent)` runs with nonzero exponents and distinct adjacent
//! generators. The empty sequence is the neutral element. Exponents are
//! arbitrary-precision integers, so `a^(2^100)` is a single two-field run.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must contain at least one generator")]
    EmptyAlphabet,
    #[error("invalid generator name {0:?}")]
    InvalidGeneratorName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("generator index {index} out of range for alphabet of rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("words use different alphabets")]
    AlphabetMismatch,
}

/// A ranked alphabet of named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    /// Builds an alphabet from distinct identifier names. Returned in an
    /// [`Arc`] because every word keeps a shared reference to its alphabet.
    pub fn new<I, S>(names: I) -> Result<Arc<Alphabet>, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(WordError::InvalidGeneratorName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(WordError::DuplicateGenerator(name.clone()));
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// One maximal block `generator^exponent` of a reduced word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub gen: usize,
    pub exp: BigInt,
}

/// Per-generator exponent sums, the image of a word in the integer lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<BigInt>);

impl ExponentVector {
    pub fn zero(rank: usize) -> ExponentVector {
        ExponentVector(vec![BigInt::zero(); rank])
    }

    pub fn from_entries(entries: Vec<BigInt>) -> ExponentVector {
        ExponentVector(entries)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entry(&self, index: usize) -> &BigInt {
        &self.0[index]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn plus(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// A freely reduced word. Immutable after construction; every operation
/// returns a fresh word in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWord {
    alphabet: Arc<Alphabet>,
    runs: Vec<Run>,
}

/// Appends one run to a reduction stack, merging or cancelling with the top.
fn push_run(runs: &mut Vec<Run>, gen: usize, exp: BigInt) {
    if exp.is_zero() {
        return;
    }
    if let Some(top) = runs.last_mut() {
        if top.gen == gen {
            top.exp += exp;
            if top.exp.is_zero() {
                runs.pop();
            }
            return;
        }
    }
    runs.push(Run { gen, exp });
}

impl FreeWord {
    pub fn neutral(alphabet: &Arc<Alphabet>) -> FreeWord {
        FreeWord {
            alphabet: Arc::clone(alphabet),
            runs: Vec::new(),
        }
    }

    pub fn generator(alphabet: &Arc<Alphabet>, index: usize) -> Result<FreeWord, WordError> {
        FreeWord::from_runs(alphabet, [(index, BigInt::from(1))])
    }

    /// Reduces a raw run sequence to canonical form. This is total: any
    /// sequence of `(generator, exponent)` pairs is accepted, zero exponents
    /// are dropped and adjacent runs merge or cancel deterministically in a
    /// single left-to-right stack scan.
    pub fn from_runs<I>(alphabet: &Arc<Alphabet>, raw: I) -> Result<FreeWord, WordError>
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut runs = Vec::new();
        for (gen, exp) in raw {
            if gen >= alphabet.rank() {
                return Err(WordError::GeneratorOutOfRange {
                    index: gen,
                    rank: alphabet.rank(),
                });
            }
            push_run(&mut runs, gen, exp);
        }
        Ok(FreeWord {
            alphabet: Arc::clone(alphabet),
            runs,
        })
    }

    /// Builds a word from letters given as `(generator, ±1)` pairs.
    pub fn from_letters<I>(alphabet: &Arc<Alphabet>, letters: I) -> Result<FreeWord, WordError>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        FreeWord::from_runs(
            alphabet,
            letters.into_iter().map(|(g, s)| (g, BigInt::from(s))),
        )
    }

    /// Internal constructor for run sequences already known to be canonical.
    pub(crate) fn from_reduced_runs(alphabet: &Arc<Alphabet>, runs: Vec<Run>) -> FreeWord {
        debug_assert!(runs.iter().all(|r| !r.exp.is_zero()));
        debug_assert!(runs.windows(2).all(|w| w[0].gen != w[1].gen));
        FreeWord {
            alphabet: Arc::clone(alphabet),
            runs,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_neutral(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// Letter length: the sum of the exponent magnitudes.
    pub fn letter_len(&self) -> BigUint {
        let mut total = BigUint::zero();
        for r in &self.runs {
            total += r.exp.magnitude();
        }
        total
    }

    fn check_alphabet(&self, other: &FreeWord) -> Result<(), WordError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(WordError::AlphabetMismatch)
        }
    }

    pub fn concat(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_alphabet(other)?;
        Ok(self.concat_unchecked(other))
    }

    pub(crate) fn concat_unchecked(&self, other: &FreeWord) -> FreeWord {
        let mut runs = self.runs.clone();
        for r in &other.runs {
            push_run(&mut runs, r.gen, r.exp.clone());
        }
        FreeWord {
            alphabet: Arc::clone(&self.alphabet),
            runs,
        }
    }

    pub fn invert(&self) -> FreeWord {
        let runs = self
            .runs
            .iter()
            .rev()
            .map(|r| Run {
                gen: r.gen,
                exp: -&r.exp,
            })
            .collect();
        FreeWord {
            alphabet: Arc::clone(&self.alphabet),
            runs,
        }
    }

    /// `self` raised to an arbitrary integer power, by repeated squaring.
    /// `pow(w, 0)` is neutral and `pow(w, -n) = pow(w, n)^-1`.
    pub fn pow(&self, n: &BigInt) -> FreeWord {
        if n.is_negative() {
            return self.invert().pow(&-n);
        }
        if self.runs.len() == 1 {
            // single-run words never materialize their letters
            let r = &self.runs[0];
            let exp = &r.exp * n;
            if exp.is_zero() {
                return FreeWord::neutral(&self.alphabet);
            }
            return FreeWord::from_reduced_runs(&self.alphabet, vec![Run { gen: r.gen, exp }]);
        }
        let mut result = FreeWord::neutral(&self.alphabet);
        let mut base = self.clone();
        let mut k = n.magnitude().clone();
        while !k.is_zero() {
            if k.bit(0) {
                result = result.concat_unchecked(&base);
            }
            k >>= 1;
            if !k.is_zero() {
                base = base.concat_unchecked(&base);
            }
        }
        result
    }

    pub fn pow_u64(&self, n: u64) -> FreeWord {
        self.pow(&BigInt::from(n))
    }

    /// `[self, other] = self^-1 other^-1 self other`, reduced.
    pub fn commutator(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_alphabet(other)?;
        Ok(self
            .invert()
            .concat_unchecked(&other.invert())
            .concat_unchecked(self)
            .concat_unchecked(other))
    }

    /// Splits `self = conjugator · core · conjugator^-1` with a cyclically
    /// reduced core (its first and last letters are not mutually inverse).
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let mut runs = self.runs.clone();
        let mut conj: Vec<Run> = Vec::new();
        while runs.len() >= 2 {
            let first = &runs[0];
            let last = &runs[runs.len() - 1];
            if first.gen != last.gen || first.exp.sign() == last.exp.sign() {
                break;
            }
            let magnitude = first.exp.magnitude().min(last.exp.magnitude()).clone();
            let peel = BigInt::from_biguint(first.exp.sign(), magnitude);
            push_run(&mut conj, first.gen, peel.clone());
            let last_index = runs.len() - 1;
            runs[last_index].exp += &peel;
            if runs[last_index].exp.is_zero() {
                runs.pop();
            }
            runs[0].exp -= &peel;
            if runs[0].exp.is_zero() {
                runs.remove(0);
            }
        }
        (
            FreeWord::from_reduced_runs(&self.alphabet, runs),
            FreeWord::from_reduced_runs(&self.alphabet, conj),
        )
    }

    /// Per-generator exponent sums. The zero vector exactly characterizes
    /// membership in the commutator subgroup.
    pub fn abelianize(&self) -> ExponentVector {
        let mut v = vec![BigInt::zero(); self.alphabet.rank()];
        for r in &self.runs {
            v[r.gen] += &r.exp;
        }
        ExponentVector(v)
    }

    /// Iterates single letters as `(generator, sign)` pairs.
    ///
    /// Panics if a run exponent magnitude exceeds `u64`; expanding such a
    /// word letter by letter is not meaningful. Callers that accept untrusted
    /// words bound [`FreeWord::letter_len`] first.
    pub fn letters(&self) -> Letters<'_> {
        Letters {
            runs: &self.runs,
            next_run: 0,
            remaining: 0,
            sign: 1,
        }
    }
}

pub struct Letters<'a> {
    runs: &'a [Run],
    next_run: usize,
    remaining: u64,
    sign: i8,
}

impl Iterator for Letters<'_> {
    type Item = (usize, i8);

    fn next(&mut self) -> Option<(usize, i8)> {
        while self.remaining == 0 {
            let run = self.runs.get(self.next_run)?;
            self.next_run += 1;
            self.remaining = run
                .exp
                .magnitude()
                .to_u64()
                .expect("run exponent exceeds letter-iteration range");
            self.sign = if run.exp.is_negative() { -1 } else { 1 };
        }
        self.remaining -= 1;
        Some((self.runs[self.next_run - 1].gen, self.sign))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.alphabet.name(r.gen);
            if r.exp == BigInt::from(1) {
                write!(f, "{}", name)?;
            } else {
                write!(f, "{}^{}", name, r.exp)?;
            }
        }
        Ok(())
    }
}
