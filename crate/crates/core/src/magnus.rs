//! Truncated Magnus expansion over the integers.
//!
//! The expansion sends generator `x_i` to `1 + X_i` in the ring of integer
//! power series in non-commuting variables, truncated at a degree cap. For a
//! free group this embedding detects the lower central series exactly: a word
//! lies in term `n` of the series if and only if its expansion is `1` modulo
//! degree `n` (the dimension-subgroup property). The least degree with a
//! nonzero term of `expansion - 1` is the word's lcs degree.
//!
//! A run `x_i^e` contributes the factor `sum_j C(e, j) X_i^j` with exact
//! binomial coefficients, valid for any integer `e`; for `e = -1` this is the
//! truncated alternating series `1 - X + X^2 - ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::word::FreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagnusError {
    #[error("degree cap must be at least 1")]
    ZeroCap,
    #[error("the neutral word has no lcs degree")]
    NeutralWord,
    #[error("series terms are indexed from 1")]
    SeriesIndexZero,
    #[error("membership in series term {n} requires cap >= {required}, have {cap}")]
    CapTooSmall {
        n: usize,
        required: usize,
        cap: usize,
    },
}

/// A word in the non-commuting variables, ordered by degree then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn from_vars(vars: Vec<u16>) -> Monomial {
        Monomial(vars)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[u16] {
        &self.0
    }

    fn concat(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.0.len() + other.0.len());
        vars.extend_from_slice(&self.0);
        vars.extend_from_slice(&other.0);
        Monomial(vars)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial truncated at a degree cap, as a sparse table of nonzero
/// integer coefficients keyed by monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    cap: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn one(rank: usize, cap: usize) -> TruncatedSeries {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::unit(), BigInt::one());
        TruncatedSeries { rank, cap, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in degree-then-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::unit()).is_some_and(One::is_one)
    }

    /// Least degree `d >= 1` carrying a nonzero coefficient.
    pub fn lowest_positive_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).find(|&d| d >= 1)
    }

    pub fn homogeneous_part(&self, degree: usize) -> BTreeMap<Monomial, BigInt> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Truncated product. Both factors must share rank and cap.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.rank, other.rank, "series rank mismatch");
        assert_eq!(self.cap, other.cap, "series cap mismatch");
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > self.cap {
                    continue;
                }
                let m = m1.concat(m2);
                *terms.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        TruncatedSeries {
            rank: self.rank,
            cap: self.cap,
            terms,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*", c)?;
                for (j, v) in m.vars().iter().enumerate() {
                    if j > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "X{}", v)?;
                }
            }
        }
        Ok(())
    }
}

/// Generalized binomial `C(e, j)` for an arbitrary integer `e`, computed by
/// the exact incremental quotient `C(e, j) = C(e, j-1) (e - j + 1) / j`.
fn binomial(e: &BigInt, j: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..j {
        c = c * (e - BigInt::from(i)) / BigInt::from(i + 1);
    }
    c
}

/// The factor contributed by one run `x_gen^exp`:
/// `sum_{j<=cap} C(exp, j) X_gen^j`.
fn run_factor(rank: usize, cap: usize, gen: usize, exp: &BigInt) -> TruncatedSeries {
    let mut terms = BTreeMap::new();
    for j in 0..=cap {
        let c = binomial(exp, j);
        if !c.is_zero() {
            terms.insert(Monomial::from_vars(vec![gen as u16; j]), c);
        }
    }
    TruncatedSeries { rank, cap, terms }
}

/// Magnus expansion of `w`, truncated at `cap`. Multiplicative:
/// `expand(uv) = expand(u) * expand(v)` after truncation.
pub fn expand(w: &FreeWord, cap: usize) -> Result<TruncatedSeries, MagnusError> {
    if cap == 0 {
        return Err(MagnusError::ZeroCap);
    }
    let rank = w.alphabet().rank();
    let mut series = TruncatedSeries::one(rank, cap);
    for run in w.runs() {
        series = series.mul(&run_factor(rank, cap, run.gen, &run.exp));
    }
    Ok(series)
}

/// Largest lower-central-series term containing the word, or the cap if the
/// search was truncated first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcsDegreeResult {
    Degree(u64),
    ExceedsCap { cap: usize },
}

impl LcsDegreeResult {
    pub fn degree(&self) -> Option<u64> {
        match self {
            LcsDegreeResult::Degree(d) => Some(*d),
            LcsDegreeResult::ExceedsCap { .. } => None,
        }
    }
}

/// Least `d <= cap` with a nonzero degree-`d` term of `expand(w) - 1`, by
/// iterative deepening over caps `2, 4, 8, ...` so short words never pay the
/// full cost.
pub fn lcs_degree(w: &FreeWord, cap: usize) -> Result<LcsDegreeResult, MagnusError> {
    if cap == 0 {
        return Err(MagnusError::ZeroCap);
    }
    if w.is_neutral() {
        return Err(MagnusError::NeutralWord);
    }
    let mut stage = 2.min(cap);
    loop {
        let series = expand(w, stage)?;
        if let Some(d) = series.lowest_positive_degree() {
            return Ok(LcsDegreeResult::Degree(d as u64));
        }
        if stage >= cap {
            return Ok(LcsDegreeResult::ExceedsCap { cap });
        }
        stage = (stage * 2).min(cap);
    }
}

/// Whether `w` lies in term `n` of the lower central series, decided by the
/// vanishing of all expansion terms of degree below `n`. Exact for free
/// groups. Requires `n <= cap + 1`.
pub fn in_lower_central(w: &FreeWord, n: usize, cap: usize) -> Result<bool, MagnusError> {
    if cap == 0 {
        return Err(MagnusError::ZeroCap);
    }
    if n == 0 {
        return Err(MagnusError::SeriesIndexZero);
    }
    if n > cap + 1 {
        return Err(MagnusError::CapTooSmall {
            n,
            required: n - 1,
            cap,
        });
    }
    if n == 1 || w.is_neutral() {
        return Ok(true);
    }
    let series = expand(w, n - 1)?;
    Ok(series.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::word::Alphabet;
    use std::sync::Arc;

    fn ab() -> Arc<Alphabet> {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn mono(vars: &[u16]) -> Monomial {
        Monomial::from_vars(vars.to_vec())
    }

    #[test]
    fn binomials_for_negative_upper_index() {
        let e = BigInt::from(-1);
        assert_eq!(binomial(&e, 0), BigInt::from(1));
        assert_eq!(binomial(&e, 1), BigInt::from(-1));
        assert_eq!(binomial(&e, 2), BigInt::from(1));
        assert_eq!(binomial(&BigInt::from(-2), 3), BigInt::from(-4));
        assert_eq!(binomial(&BigInt::from(5), 2), BigInt::from(10));
    }

    #[test]
    fn expands_generator_and_inverse() {
        let a = ab();
        let s = expand(&parse("a", &a).unwrap(), 3).unwrap();
        assert_eq!(s.coeff(&Monomial::unit()), BigInt::from(1));
        assert_eq!(s.coeff(&mono(&[0])), BigInt::from(1));
        assert_eq!(s.terms().count(), 2);

        // a^-1 at cap 2 is 1 - A + A^2
        let s = expand(&parse("a^-1", &a).unwrap(), 2).unwrap();
        assert_eq!(s.coeff(&Monomial::unit()), BigInt::from(1));
        assert_eq!(s.coeff(&mono(&[0])), BigInt::from(-1));
        assert_eq!(s.coeff(&mono(&[0, 0])), BigInt::from(1));
        assert_eq!(s.terms().count(), 3);
    }

    #[test]
    fn expands_commutator_at_cap_two() {
        // frozen from the brute-force factor product
        // (1-A+A^2)(1-B+B^2)(1+A)(1+B): 1 + AB - BA
        let a = ab();
        let s = expand(&parse("[a,b]", &a).unwrap(), 2).unwrap();
        assert_eq!(s.coeff(&Monomial::unit()), BigInt::from(1));
        assert_eq!(s.coeff(&mono(&[0, 1])), BigInt::from(1));
        assert_eq!(s.coeff(&mono(&[1, 0])), BigInt::from(-1));
        assert_eq!(s.terms().count(), 3);
    }

    #[test]
    fn expands_nested_commutator_at_cap_three() {
        // frozen: 1 + ABB - 2BAB + BBA
        let a = ab();
        let s = expand(&parse("[[a,b],b]", &a).unwrap(), 3).unwrap();
        assert_eq!(s.coeff(&mono(&[0, 1, 1])), BigInt::from(1));
        assert_eq!(s.coeff(&mono(&[1, 0, 1])), BigInt::from(-2));
        assert_eq!(s.coeff(&mono(&[1, 1, 0])), BigInt::from(1));
        assert_eq!(s.terms().count(), 4);
    }

    #[test]
    fn expand_of_neutral_is_one() {
        let a = ab();
        let s = expand(&FreeWord::neutral(&a), 4).unwrap();
        assert!(s.is_one());
        assert_eq!(
            expand(&parse("a", &a).unwrap(), 0),
            Err(MagnusError::ZeroCap)
        );
    }

    #[test]
    fn lcs_degrees_of_basic_words() {
        let a = ab();
        let deg = |t: &str, cap: usize| lcs_degree(&parse(t, &a).unwrap(), cap).unwrap().degree();
        assert_eq!(deg("a", 3), Some(1));
        assert_eq!(deg("[a,b]", 4), Some(2));
        assert_eq!(deg("[[a,b],b]", 4), Some(3));
        assert_eq!(
            lcs_degree(&FreeWord::neutral(&a), 3),
            Err(MagnusError::NeutralWord)
        );
    }

    #[test]
    fn exceeds_cap_when_too_deep() {
        let a = ab();
        let w = parse("[[a,b],b]", &a).unwrap();
        assert_eq!(
            lcs_degree(&w, 2).unwrap(),
            LcsDegreeResult::ExceedsCap { cap: 2 }
        );
    }

    #[test]
    fn lower_central_membership() {
        let a = ab();
        let c = parse("[a,b]", &a).unwrap();
        assert!(in_lower_central(&c, 2, 4).unwrap());
        assert!(!in_lower_central(&c, 3, 4).unwrap());
        assert!(in_lower_central(&FreeWord::neutral(&a), 7, 8).unwrap());
        assert!(in_lower_central(&c, 1, 1).unwrap());
        assert_eq!(
            in_lower_central(&c, 6, 4),
            Err(MagnusError::CapTooSmall {
                n: 6,
                required: 5,
                cap: 4
            })
        );
        assert_eq!(
            in_lower_central(&c, 0, 4),
            Err(MagnusError::SeriesIndexZero)
        );
    }

    #[test]
    fn multiplicative_on_a_sample() {
        let a = ab();
        let u = parse("a b^-2 a", &a).unwrap();
        let v = parse("b [a,b] a^-1", &a).unwrap();
        let lhs = expand(&u.concat(&v).unwrap(), 4).unwrap();
        let rhs = expand(&u, 4).unwrap().mul(&expand(&v, 4).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn huge_exponents_stay_cheap() {
        let a = ab();
        let w = parse(
            "a^100000000000000000000 b a^-100000000000000000000 b^-1",
            &a,
        )
        .unwrap();
        let s = expand(&w, 2).unwrap();
        // [a^N, b] has degree-2 part N(AB - BA)
        let n: BigInt = "100000000000000000000".parse().unwrap();
        assert_eq!(s.coeff(&mono(&[0, 1])), n.clone());
        assert_eq!(s.coeff(&mono(&[1, 0])), -n);
    }
}
