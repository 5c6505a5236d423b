//! Unitarily invariant norms evaluated from singular values.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::{singular_values, CMatrix};

/// Singular values below this fraction of the largest are treated as zero.
const CLAMP_RATIO: f64 = 1e-14;

/// Norm selector. `Schatten(2)` is the Frobenius norm and `Schatten(1)` the
/// trace norm; the operator norm has its own variant rather than `Schatten(inf)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    Operator,
    Schatten(f64),
    KyFan(usize),
}

impl NormKind {
    pub const FROBENIUS: NormKind = NormKind::Schatten(2.0);
    pub const TRACE: NormKind = NormKind::Schatten(1.0);

    pub fn validate(self) -> Result<Self> {
        match self {
            NormKind::Schatten(p) if !(p.is_finite() && p >= 1.0) => Err(Error::InvalidParams(
                format!("Schatten exponent {p} must be finite and >= 1"),
            )),
            NormKind::KyFan(0) => Err(Error::InvalidParams("Ky Fan index must be >= 1".into())),
            k => Ok(k),
        }
    }

    /// Evaluates the norm from singular values sorted descending.
    pub fn of_singular_values(self, sigma: &[f64]) -> f64 {
        let top = sigma.first().copied().unwrap_or(0.0);
        let cut = CLAMP_RATIO * top;
        let clamped = sigma.iter().map(|&s| if s < cut { 0.0 } else { s });
        match self {
            NormKind::Operator => top,
            NormKind::KyFan(k) => clamped.take(k).sum(),
            NormKind::Schatten(1.0) => clamped.sum(),
            NormKind::Schatten(2.0) => clamped.map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Schatten(p) => {
                if top == 0.0 {
                    return 0.0;
                }
                // scaled to avoid overflow for large p
                let s: f64 = clamped.map(|s| (s / top).powf(p)).sum();
                top * s.powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "op"),
            NormKind::Schatten(p) if *p == 2.0 => write!(f, "fro"),
            NormKind::Schatten(p) if *p == 1.0 => write!(f, "tr"),
            NormKind::Schatten(p) => write!(f, "schatten:{p}"),
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParams(format!("unknown norm selector '{s}'"));
        let kind = match s {
            "op" => NormKind::Operator,
            "fro" => NormKind::FROBENIUS,
            "tr" => NormKind::TRACE,
            _ => {
                if let Some(p) = s.strip_prefix("schatten:") {
                    NormKind::Schatten(p.parse().map_err(|_| bad())?)
                } else if let Some(k) = s.strip_prefix("kyfan:") {
                    NormKind::KyFan(k.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        kind.validate()
    }
}

/// Parses a comma-separated selector list such as `op,tr,schatten:3`.
pub fn parse_norm_list(s: &str) -> Result<Vec<NormKind>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn norm(a: &CMatrix, kind: NormKind) -> f64 {
    kind.of_singular_values(&singular_values(a).expect("one-sided Jacobi converges"))
}

/// Several norms of the same matrix from one singular value computation.
pub fn norms(a: &CMatrix, kinds: &[NormKind]) -> Vec<f64> {
    let sigma = singular_values(a).expect("one-sided Jacobi converges");
    kinds.iter().map(|k| k.of_singular_values(&sigma)).collect()
}

/// Norm of the block-diagonal matrix `A (+) B`.
pub fn direct_sum_norm(a: &CMatrix, b: &CMatrix, kind: NormKind) -> f64 {
    norm(&a.direct_sum(b), kind)
}
