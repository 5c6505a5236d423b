//! Numerical laboratory for unitarily invariant norm inequalities of Heinz
//! and Corach-Porta-Recht type on small complex matrices.

pub mod campaign;
pub mod chain;
pub mod classes;
pub mod conjecture;
pub mod cpr;
pub mod error;
pub mod heinz;
pub mod matcore;
pub mod norms;
pub mod quadrature;

pub use chain::{ChainReport, Relation, DEFAULT_TOL, EQUALITY_TOL};
pub use error::{Error, Result};
pub use matcore::{CMatrix, Complex, PosDef, Rng};
pub use norms::NormKind;
