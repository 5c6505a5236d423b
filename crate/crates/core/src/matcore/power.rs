//! Real powers of positive definite matrices through their spectral
//! decomposition.

use super::eigen::{herm_eigen, HermEigen};
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Eigenvalues must exceed this fraction of the largest one.
pub const POSDEF_RATIO: f64 = 1e-12;

/// A Hermitian matrix stored with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct SpectralMatrix {
    pub matrix: CMatrix,
    pub eigen: HermEigen,
}

impl SpectralMatrix {
    pub fn new(matrix: &CMatrix) -> Result<Self> {
        Ok(Self {
            eigen: herm_eigen(matrix)?,
            matrix: matrix.clone(),
        })
    }
}

/// Positive definite matrix with cached eigen-data, so every real power
/// costs one conjugation.
#[derive(Clone, Debug)]
pub struct PosDef {
    matrix: CMatrix,
    eigen: HermEigen,
}

impl PosDef {
    pub fn new(matrix: &CMatrix) -> Result<Self> {
        Self::from_spectral(SpectralMatrix::new(matrix)?)
    }

    pub fn from_spectral(s: SpectralMatrix) -> Result<Self> {
        let (lo, hi) = (s.eigen.min(), s.eigen.max());
        if !(hi > 0.0 && lo > POSDEF_RATIO * hi) {
            return Err(Error::NotPositiveDefinite(if hi > 0.0 {
                lo / hi
            } else {
                lo
            }));
        }
        Ok(Self {
            matrix: s.matrix,
            eigen: s.eigen,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(&CMatrix::identity(n)).expect("identity is positive definite")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &HermEigen {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Q diag(lambda^s) Q^*`.
    pub fn pow(&self, s: f64) -> CMatrix {
        self.eigen.apply(|l| l.powf(s))
    }

    pub fn condition(&self) -> f64 {
        self.eigen.max() / self.eigen.min()
    }
}

pub fn frac_power(p: &CMatrix, s: f64) -> Result<CMatrix> {
    Ok(PosDef::new(p)?.pow(s))
}
