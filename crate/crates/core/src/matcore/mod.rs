//! Dense complex linear algebra for small matrices.

pub mod eigen;
pub mod matrix;
pub mod power;
pub mod random;
pub mod svd;

pub use eigen::{herm_eigen, HermEigen};
pub use matrix::{CMatrix, Complex, ONE, ZERO};
pub use power::{frac_power, PosDef, SpectralMatrix};
pub use random::{
    ginibre, haar_unitary, nonzero_complex_scalar, random_hermitian, random_invertible,
    random_normal_invertible, random_posdef, random_rank_one, random_reflection,
    random_selfadjoint_invertible, test_matrix, Rng,
};
pub use svd::{abs_adjoint_matrix, abs_matrix, singular_values, svd, SvdResult};
