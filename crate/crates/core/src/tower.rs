//! The iterated substitution system on a rank-4 free group and the
//! inequality-chain certificate.
//!
//! The substitution sends `x1 -> [x1,x2]`, `x2 -> [x1^2,x2^2]`,
//! `x3 -> [x3,x4]`, `x4 -> [x3^2,x4^2]`. Because the four images freely
//! generate, the iterates embed each stage into the base group, and the
//! canonical split `A = <x1,x2>`, `B = <x3,x4>` is preserved: stage words in
//! `{x1,x2}` stay in part A and stage words in `{x3,x4}` stay in part B.
//!
//! A certificate stage `n` records, for `alpha_n, beta_n` the stage-`n`
//! images of `x1, x3`:
//!
//! - `m_n`: the least series index with both words outside that term of the
//!   lower central series, found by Magnus degree;
//! - `K_hat_n`: the maximum Schreier upper bound over the `3^(n-1)` signed
//!   products of the earlier chain loops (sound where the construction
//!   wants exact commutator length — enlarging K only strengthens L);
//! - `L_n`: the least power making the weight lower bound of
//!   `[alpha beta, beta alpha]^L` exceed `2 K_hat_n + n`;
//! - the weight (`-2 L_n` by syllable counting) and the resulting lower
//!   bound, whose slack over `2 K_hat_n + n` must be at least 1.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::cl::{cl_lower_bound, ClError};
use crate::free_product::{weight, FreeProductError, Part, Split};
use crate::magnus::{lcs_degree, LcsDegreeResult, MagnusError};
use crate::schreier::{cl_upper_bound, ClUpperBound};
use crate::word::{Alphabet, FreeWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("stage index must be at least 1")]
    StageZero,
    #[error("generator index {0} out of range 1..=4")]
    GeneratorIndex(usize),
    #[error("stage count must be at least 1")]
    NoStages,
    #[error("magnus cap {cap} cannot separate the stage-{stage} words (raise the cap)")]
    ExceedsCap { stage: u64, cap: usize },
    #[error("stage {stage} word needs {needed} letters, over the budget of {budget}")]
    BudgetExceeded {
        stage: u64,
        needed: BigUint,
        budget: u64,
    },
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    FreeProduct(#[from] FreeProductError),
    #[error(transparent)]
    Cl(#[from] ClError),
}

/// A certificate build that stopped early; the stages completed so far are
/// preserved.
#[derive(Debug, Error, Clone)]
#[error("{error} (after {} completed stages)", partial.stages.len())]
pub struct CertificateFailure {
    #[source]
    pub error: TowerError,
    pub partial: TowerCertificate,
}

/// The rank-4 base alphabet with its canonical split and the substitution
/// images.
#[derive(Debug, Clone)]
pub struct TowerAlphabet {
    alphabet: Arc<Alphabet>,
    split: Split,
    images: [FreeWord; 4],
}

impl Default for TowerAlphabet {
    fn default() -> TowerAlphabet {
        TowerAlphabet::new()
    }
}

impl TowerAlphabet {
    pub fn new() -> TowerAlphabet {
        let alphabet = Alphabet::new(["x1", "x2", "x3", "x4"]).expect("static names");
        let split = Split::new(&alphabet, vec![Part::A, Part::A, Part::B, Part::B])
            .expect("both parts populated");
        let gen = |i: usize| FreeWord::generator(&alphabet, i).expect("index in range");
        let two = BigInt::from(2);
        let images = [
            gen(0).commutator(&gen(1)).expect("same alphabet"),
            gen(0)
                .pow(&two)
                .commutator(&gen(1).pow(&two))
                .expect("same alphabet"),
            gen(2).commutator(&gen(3)).expect("same alphabet"),
            gen(2)
                .pow(&two)
                .commutator(&gen(3).pow(&two))
                .expect("same alphabet"),
        ];
        TowerAlphabet {
            alphabet,
            split,
            images,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    /// Generator `x_i` for `i` in `1..=4`.
    pub fn generator(&self, i: usize) -> Result<FreeWord, TowerError> {
        if !(1..=4).contains(&i) {
            return Err(TowerError::GeneratorIndex(i));
        }
        Ok(FreeWord::generator(&self.alphabet, i - 1).expect("index in range"))
    }

    /// Homomorphic image of `w` under the substitution, reduced.
    pub fn substitute(&self, w: &FreeWord) -> FreeWord {
        assert_eq!(
            w.alphabet(),
            &self.alphabet,
            "word is not over the tower alphabet"
        );
        let mut acc = FreeWord::neutral(&self.alphabet);
        for run in w.runs() {
            acc = acc.concat_unchecked(&self.images[run.gen].pow(&run.exp));
        }
        acc
    }

    /// `x_i` pushed down `n - 1` substitutions into the base group.
    pub fn expand_to_base(&self, n: u64, i: usize) -> Result<FreeWord, TowerError> {
        if n == 0 {
            return Err(TowerError::StageZero);
        }
        let mut word = self.generator(i)?;
        for _ in 1..n {
            word = self.substitute(&word);
        }
        Ok(word)
    }

    /// Matrix of the abelianized substitution on generators: column `i` is
    /// the exponent vector of the image of `x_{i+1}`. Every image is a
    /// commutator, so this is the zero matrix.
    pub fn bonding_abelianization(&self) -> [[i64; 4]; 4] {
        let mut m = [[0i64; 4]; 4];
        for (col, image) in self.images.iter().enumerate() {
            let v = image.abelianize();
            for (row, entry) in v.entries().iter().enumerate() {
                m[row][col] = entry.to_i64().expect("generator image exponents are small");
            }
        }
        m
    }

    /// Rank of the direct limit `Z^4 -> Z^4 -> ...` along the transposed
    /// bonding matrix, iterated `stages` times.
    pub fn cech_colimit_rank(&self, stages: u64) -> Result<usize, TowerError> {
        let m = self.bonding_abelianization();
        let mut t = [[0i64; 4]; 4];
        for (r, row) in m.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                t[c][r] = *entry;
            }
        }
        direct_limit_rank(&t, stages)
    }

    /// Least `m` with both stage-`n` words outside term `m` of the lower
    /// central series: one more than the larger of their Magnus degrees.
    pub fn find_m(&self, n: u64, cap: usize) -> Result<u64, TowerError> {
        let alpha = self.expand_to_base(n, 1)?;
        let beta = self.expand_to_base(n, 3)?;
        let mut worst = 0u64;
        for word in [&alpha, &beta] {
            match lcs_degree(word, cap)? {
                LcsDegreeResult::Degree(d) => worst = worst.max(d),
                LcsDegreeResult::ExceedsCap { cap } => {
                    return Err(TowerError::ExceedsCap { stage: n, cap })
                }
            }
        }
        Ok(worst + 1)
    }

    /// Builds the full certificate for stages `1..=n_max`.
    pub fn build_certificate(
        &self,
        params: &CertificateParams,
    ) -> Result<TowerCertificate, CertificateFailure> {
        let mut certificate = TowerCertificate {
            stages: Vec::new(),
            verdict: true,
        };
        if params.n_max == 0 {
            return Err(CertificateFailure {
                error: TowerError::NoStages,
                partial: certificate,
            });
        }
        let fail = |error: TowerError, partial: &TowerCertificate| CertificateFailure {
            error,
            partial: partial.clone(),
        };
        // chain of loops whose signed products K-hat bounds; the first is the
        // shortest mixed-part commutator, later entries are the stage words
        let mut chain: Vec<FreeWord> = Vec::new();
        for n in 1..=params.n_max {
            let alpha = self
                .expand_to_base(n, 1)
                .map_err(|e| fail(e, &certificate))?;
            let beta = self
                .expand_to_base(n, 3)
                .map_err(|e| fail(e, &certificate))?;
            debug_assert_eq!(self.split.word_part(&alpha), Some(Part::A));
            debug_assert_eq!(self.split.word_part(&beta), Some(Part::B));
            let m = self
                .find_m(n, params.magnus_cap)
                .map_err(|e| fail(e, &certificate))?;
            let k_hat = self.max_product_upper_bound(&chain);
            let l = choose_l(k_hat, n);
            let core = alpha
                .concat_unchecked(&beta)
                .commutator(&beta.concat_unchecked(&alpha))
                .expect("same alphabet");
            let needed = core.letter_len() * l;
            if needed > BigUint::from(params.letter_budget) {
                return Err(fail(
                    TowerError::BudgetExceeded {
                        stage: n,
                        needed,
                        budget: params.letter_budget,
                    },
                    &certificate,
                ));
            }
            let stage_word = core.pow_u64(l);
            let wt = weight(&stage_word, &self.split, &beta)
                .map_err(|e| fail(e.into(), &certificate))?;
            let lower_bound = cl_lower_bound(&stage_word, &self.split, &beta)
                .map_err(|e| fail(e.into(), &certificate))?;
            let target = 2 * k_hat + n;
            let slack = lower_bound as i64 - target as i64;
            let pass = slack >= 1;
            if !pass {
                certificate.verdict = false;
            }
            certificate.stages.push(TowerStage {
                n,
                alpha,
                beta,
                m,
                k_hat,
                l,
                weight: wt,
                lower_bound,
                slack,
                pass,
            });
            chain.push(if n == 1 {
                let x1 = self.generator(1).expect("static index");
                let x3 = self.generator(3).expect("static index");
                x1.commutator(&x3).expect("same alphabet")
            } else {
                stage_word
            });
        }
        Ok(certificate)
    }

    /// Maximum Schreier upper bound over all signed products
    /// `g_1^(e_1) ... g_k^(e_k)` with every `e_i` in `{-1, 0, 1}`.
    fn max_product_upper_bound(&self, chain: &[FreeWord]) -> u64 {
        let mut best = 0u64;
        let mut signs = vec![0i8; chain.len()];
        loop {
            let mut product = FreeWord::neutral(&self.alphabet);
            for (word, &sign) in chain.iter().zip(&signs) {
                match sign {
                    1 => product = product.concat_unchecked(word),
                    -1 => product = product.concat_unchecked(&word.invert()),
                    _ => {}
                }
            }
            match cl_upper_bound(&product) {
                ClUpperBound::Finite(u) => best = best.max(u),
                ClUpperBound::Infinite => {
                    unreachable!("chain loops lie in the commutator subgroup")
                }
            }
            // next sign vector in ternary order
            let mut idx = 0;
            loop {
                if idx == signs.len() {
                    return best;
                }
                signs[idx] += 1;
                if signs[idx] <= 1 {
                    break;
                }
                signs[idx] = -1;
                idx += 1;
            }
        }
    }
}

/// Minimal `L` whose weight lower bound exceeds `2 k_hat + n`; explicitly,
/// `6 (2 k_hat + n) - 1`, clamped to 1 for the degenerate zero target.
pub fn choose_l(k_hat: u64, n: u64) -> u64 {
    let target = 2 * k_hat + n;
    if target == 0 {
        1
    } else {
        6 * target - 1
    }
}

/// Rank over the rationals of the direct limit of `Z^4` along a matrix. The
/// kernel chain of a 4x4 matrix stabilizes within four steps, so the
/// exponent is clamped there.
pub fn direct_limit_rank(matrix: &[[i64; 4]; 4], stages: u64) -> Result<usize, TowerError> {
    if stages == 0 {
        return Err(TowerError::NoStages);
    }
    let big: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut power = identity4();
    for _ in 0..stages.min(4) {
        power = mat4_mul(&power, &big);
    }
    Ok(mat4_rank(power))
}

fn identity4() -> Vec<Vec<BigInt>> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat4_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| (0..4).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Rank by fraction-free Gaussian elimination.
fn mat4_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let mut rank = 0;
    let mut row = 0;
    for col in 0..4 {
        let pivot = (row..4).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in row + 1..4 {
            if m[r][col].is_zero() {
                continue;
            }
            let factor_top = m[r][col].clone();
            let factor_pivot = m[row][col].clone();
            let pivot_row = m[row].clone();
            for (entry, pivot_entry) in m[r].iter_mut().zip(&pivot_row) {
                *entry = &*entry * &factor_pivot - pivot_entry * &factor_top;
            }
        }
        rank += 1;
        row += 1;
        if row == 4 {
            break;
        }
    }
    rank
}

/// Stage budgets for certificate construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateParams {
    pub n_max: u64,
    pub magnus_cap: usize,
    pub letter_budget: u64,
}

impl Default for CertificateParams {
    fn default() -> CertificateParams {
        CertificateParams {
            n_max: 3,
            magnus_cap: 8,
            letter_budget: 10_000_000,
        }
    }
}

/// One certificate row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerStage {
    pub n: u64,
    pub alpha: FreeWord,
    pub beta: FreeWord,
    pub m: u64,
    pub k_hat: u64,
    pub l: u64,
    pub weight: i64,
    pub lower_bound: u64,
    pub slack: i64,
    pub pass: bool,
}

/// The full inequality-chain certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCertificate {
    pub stages: Vec<TowerStage>,
    pub verdict: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> TowerAlphabet {
        TowerAlphabet::new()
    }

    #[test]
    fn substitution_images() {
        let t = tower();
        let x1 = t.generator(1).unwrap();
        assert_eq!(t.substitute(&x1).to_string(), "x1^-1 x2^-1 x1 x2");
        assert!(t.substitute(&FreeWord::neutral(t.alphabet())).is_neutral());
        let x1x3 = x1.concat(&t.generator(3).unwrap()).unwrap();
        assert_eq!(
            t.substitute(&x1x3).to_string(),
            "x1^-1 x2^-1 x1 x2 x3^-1 x4^-1 x3 x4"
        );
    }

    #[test]
    fn expand_to_base_stages() {
        let t = tower();
        assert_eq!(t.expand_to_base(1, 1).unwrap().to_string(), "x1");
        assert_eq!(
            t.expand_to_base(2, 1).unwrap().to_string(),
            "x1^-1 x2^-1 x1 x2"
        );
        // one further substitution: [[x1,x2],[x1^2,x2^2]] reduced
        let alpha3 = t.expand_to_base(3, 1).unwrap();
        let y1 = t.expand_to_base(2, 1).unwrap();
        let y2 = t
            .generator(1)
            .unwrap()
            .pow_u64(2)
            .commutator(&t.generator(2).unwrap().pow_u64(2))
            .unwrap();
        assert_eq!(alpha3, y1.commutator(&y2).unwrap());
        assert_eq!(alpha3.letter_len(), 22u32.into());
        assert!(matches!(t.expand_to_base(0, 1), Err(TowerError::StageZero)));
        assert!(matches!(
            t.expand_to_base(1, 5),
            Err(TowerError::GeneratorIndex(5))
        ));
    }

    #[test]
    fn split_preservation() {
        let t = tower();
        for n in 1..=4 {
            for (i, part) in [(1, Part::A), (2, Part::A), (3, Part::B), (4, Part::B)] {
                let w = t.expand_to_base(n, i).unwrap();
                assert_eq!(t.split().word_part(&w), Some(part), "stage {n} gen {i}");
            }
        }
    }

    #[test]
    fn bonding_map_is_zero() {
        let t = tower();
        assert_eq!(t.bonding_abelianization(), [[0i64; 4]; 4]);
        for stages in [1, 6] {
            assert_eq!(t.cech_colimit_rank(stages).unwrap(), 0);
        }
        // composition of zero maps: every expanded stage word is in the kernel
        for n in 2..=4 {
            for i in 1..=4 {
                assert!(t.expand_to_base(n, i).unwrap().abelianize().is_zero());
            }
        }
    }

    #[test]
    fn colimit_engine_sanity() {
        let identity = [[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert_eq!(direct_limit_rank(&identity, 6).unwrap(), 4);
        let nilpotent = [[0i64, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]];
        assert_eq!(direct_limit_rank(&nilpotent, 1).unwrap(), 3);
        assert_eq!(direct_limit_rank(&nilpotent, 6).unwrap(), 0);
        let projection = [[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]];
        assert_eq!(direct_limit_rank(&projection, 6).unwrap(), 2);
        assert!(direct_limit_rank(&identity, 0).is_err());
    }

    #[test]
    fn find_m_values() {
        // frozen against the independent series oracle: degrees 1, 2, 5, 12
        let t = tower();
        assert_eq!(t.find_m(1, 8).unwrap(), 2);
        assert_eq!(t.find_m(2, 8).unwrap(), 3);
        assert_eq!(t.find_m(3, 8).unwrap(), 6);
        assert_eq!(
            t.find_m(4, 8),
            Err(TowerError::ExceedsCap { stage: 4, cap: 8 })
        );
        assert_eq!(t.find_m(4, 12).unwrap(), 13);
    }

    #[test]
    fn choose_l_arithmetic() {
        use crate::cl::cl_lower_bound;
        assert_eq!(choose_l(0, 1), 5);
        assert_eq!(choose_l(1, 2), 23);
        assert_eq!(choose_l(0, 0), 1);
        // minimality: the chosen L clears the target, L - 1 does not
        let t = tower();
        let split = t.split();
        let alpha = t.expand_to_base(1, 1).unwrap();
        let beta = t.expand_to_base(1, 3).unwrap();
        let core = alpha
            .concat(&beta)
            .unwrap()
            .commutator(&beta.concat(&alpha).unwrap())
            .unwrap();
        for (k_hat, n) in [(0u64, 1u64), (1, 2), (2, 1)] {
            let l = choose_l(k_hat, n);
            let target = 2 * k_hat + n;
            let at = |l: u64| cl_lower_bound(&core.pow_u64(l), split, &beta).unwrap();
            assert!(at(l) > target);
            if l > 1 {
                assert!(at(l - 1) <= target);
            }
        }
    }

    #[test]
    fn certificate_stage_one() {
        let t = tower();
        let params = CertificateParams {
            n_max: 1,
            ..CertificateParams::default()
        };
        let cert = t.build_certificate(&params).unwrap();
        assert!(cert.verdict);
        let s = &cert.stages[0];
        assert_eq!(
            (s.n, s.m, s.k_hat, s.l, s.weight, s.lower_bound, s.slack),
            (1, 2, 0, 5, -10, 2, 1)
        );
        assert!(s.pass);
    }

    #[test]
    fn certificate_two_stages() {
        let t = tower();
        let params = CertificateParams {
            n_max: 2,
            ..CertificateParams::default()
        };
        let cert = t.build_certificate(&params).unwrap();
        assert!(cert.verdict);
        let s = &cert.stages[1];
        assert_eq!((s.n, s.m, s.k_hat, s.l), (2, 3, 1, 23));
        assert_eq!(s.weight, -46);
        assert_eq!(s.slack, 1);
    }

    #[test]
    fn certificate_budget_error_keeps_partial() {
        let t = tower();
        let params = CertificateParams {
            n_max: 2,
            magnus_cap: 8,
            letter_budget: 100,
        };
        let failure = t.build_certificate(&params).unwrap_err();
        assert!(matches!(
            failure.error,
            TowerError::BudgetExceeded { stage: 2, .. }
        ));
        assert_eq!(failure.partial.stages.len(), 1);
        assert!(failure.partial.stages[0].pass);
    }

    #[test]
    fn certificate_cap_error_keeps_partial() {
        let t = tower();
        let params = CertificateParams {
            n_max: 4,
            magnus_cap: 8,
            letter_budget: 1_000_000_000,
        };
        let failure = t.build_certificate(&params).unwrap_err();
        assert!(matches!(
            failure.error,
            TowerError::ExceedsCap { stage: 4, cap: 8 }
        ));
        assert_eq!(failure.partial.stages.len(), 3);
    }
}
