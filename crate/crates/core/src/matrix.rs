//! Exact 2x2 integer matrices and evaluation homomorphisms.
//!
//! Assigning a unimodular matrix to each generator induces a homomorphism
//! from the free group into `GL(2, Z)`; [`eval_matrix`] computes images
//! exactly, which is how word identities under extra relations are checked.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::word::{Alphabet, FreeWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix determinant {0} is not ±1")]
    NotUnimodular(BigInt),
    #[error("generator {0:?} has no assigned matrix")]
    Unassigned(String),
    #[error("word and assignment use different alphabets")]
    AlphabetMismatch,
    #[error("generator index {index} out of range for alphabet of rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
}

/// A 2x2 matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2([[BigInt; 2]; 2]);

impl Mat2 {
    pub fn new(entries: [[BigInt; 2]; 2]) -> Mat2 {
        Mat2(entries)
    }

    pub fn from_i64(entries: [[i64; 2]; 2]) -> Mat2 {
        Mat2(entries.map(|row| row.map(BigInt::from)))
    }

    pub fn identity() -> Mat2 {
        Mat2::from_i64([[1, 0], [0, 1]])
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.0
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ])
    }

    pub fn det(&self) -> BigInt {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    /// Inverse of a determinant-±1 matrix, which is again integral.
    pub fn inverse(&self) -> Result<Mat2, MatrixError> {
        let det = self.det();
        if !det.magnitude().is_one() {
            return Err(MatrixError::NotUnimodular(det));
        }
        let m = &self.0;
        Ok(Mat2([
            [&m[1][1] * &det, -(&m[0][1]) * &det],
            [-(&m[1][0]) * &det, &m[0][0] * &det],
        ]))
    }

    /// Integer power by repeated squaring; negative exponents require a
    /// unimodular matrix.
    pub fn pow(&self, exp: &BigInt) -> Result<Mat2, MatrixError> {
        let base = if exp.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut result = Mat2::identity();
        let mut square = base;
        let mut k = exp.magnitude().clone();
        while !k.is_zero() {
            if k.bit(0) {
                result = result.mul(&square);
            }
            k >>= 1;
            if !k.is_zero() {
                square = square.mul(&square);
            }
        }
        Ok(result)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

/// A partial map from generators to unimodular matrices.
#[derive(Debug, Clone)]
pub struct MatrixAssignment {
    alphabet: Arc<Alphabet>,
    images: Vec<Option<Mat2>>,
}

impl MatrixAssignment {
    pub fn new(alphabet: &Arc<Alphabet>) -> MatrixAssignment {
        MatrixAssignment {
            alphabet: Arc::clone(alphabet),
            images: vec![None; alphabet.rank()],
        }
    }

    /// Assigns a matrix to a generator; the determinant must be ±1 so the
    /// image is invertible over the integers.
    pub fn assign(&mut self, gen: usize, matrix: Mat2) -> Result<(), MatrixError> {
        if gen >= self.alphabet.rank() {
            return Err(MatrixError::GeneratorOutOfRange {
                index: gen,
                rank: self.alphabet.rank(),
            });
        }
        let det = matrix.det();
        if !det.magnitude().is_one() {
            return Err(MatrixError::NotUnimodular(det));
        }
        self.images[gen] = Some(matrix);
        Ok(())
    }

    pub fn image(&self, gen: usize) -> Option<&Mat2> {
        self.images.get(gen).and_then(Option::as_ref)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }
}

/// The image of `w` under the homomorphism induced by `assignment`.
pub fn eval_matrix(w: &FreeWord, assignment: &MatrixAssignment) -> Result<Mat2, MatrixError> {
    if w.alphabet() != assignment.alphabet() {
        return Err(MatrixError::AlphabetMismatch);
    }
    let mut acc = Mat2::identity();
    for run in w.runs() {
        let image = assignment
            .image(run.gen)
            .ok_or_else(|| MatrixError::Unassigned(w.alphabet().name(run.gen).to_string()))?;
        acc = acc.mul(&image.pow(&run.exp)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn identity_on_neutral_word() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let asg = MatrixAssignment::new(&a);
        let w = FreeWord::neutral(&a);
        assert_eq!(eval_matrix(&w, &asg).unwrap(), Mat2::identity());
    }

    #[test]
    fn single_generator_maps_to_its_matrix() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let mut asg = MatrixAssignment::new(&a);
        let m = Mat2::from_i64([[2, 1], [1, 1]]);
        asg.assign(0, m.clone()).unwrap();
        let w = FreeWord::generator(&a, 0).unwrap();
        assert_eq!(eval_matrix(&w, &asg).unwrap(), m);
    }

    #[test]
    fn commutator_of_shears() {
        // image of [a,b] under a -> [[1,1],[0,1]], b -> [[1,0],[1,1]],
        // the four-matrix product worked out by hand
        let a = Alphabet::new(["a", "b"]).unwrap();
        let mut asg = MatrixAssignment::new(&a);
        asg.assign(0, Mat2::from_i64([[1, 1], [0, 1]])).unwrap();
        asg.assign(1, Mat2::from_i64([[1, 0], [1, 1]])).unwrap();
        let w = parse("[a,b]", &a).unwrap();
        assert_eq!(
            eval_matrix(&w, &asg).unwrap(),
            Mat2::from_i64([[3, 1], [-1, 0]])
        );
    }

    #[test]
    fn rejects_unassigned_and_singular() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let mut asg = MatrixAssignment::new(&a);
        assert_eq!(
            asg.assign(0, Mat2::from_i64([[2, 0], [0, 2]])),
            Err(MatrixError::NotUnimodular(BigInt::from(4)))
        );
        asg.assign(0, Mat2::from_i64([[1, 1], [0, 1]])).unwrap();
        let w = parse("a b", &a).unwrap();
        assert_eq!(
            eval_matrix(&w, &asg),
            Err(MatrixError::Unassigned("b".to_string()))
        );
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let m = Mat2::from_i64([[1, 1], [0, 1]]);
        assert_eq!(
            m.pow(&BigInt::from(5)).unwrap(),
            Mat2::from_i64([[1, 5], [0, 1]])
        );
        assert_eq!(
            m.pow(&BigInt::from(-3)).unwrap(),
            Mat2::from_i64([[1, -3], [0, 1]])
        );
    }
}
