//! Heinz means `A^a X B^(1-a) + A^(1-a) X B^a`, the arithmetic-geometric
//! mean inequality, and the refined Heinz chains with an interval-mean term.

use crate::chain::{ChainReport, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, PosDef};
use crate::norms::{norm, NormKind};
use crate::quadrature::{GaussLegendre, DEFAULT_NODES};

/// Which half of `[0, 1]` a Heinz parameter is treated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `alpha` in `[0, 1/2]`: midpoint `alpha/2`, interval `[0, alpha]`.
    Lower,
    /// `alpha` in `[1/2, 1]`: midpoint `(1+alpha)/2`, interval `[alpha, 1]`.
    Upper,
}

impl Regime {
    pub fn for_alpha(alpha: f64) -> Self {
        if alpha <= 0.5 {
            Regime::Lower
        } else {
            Regime::Upper
        }
    }

    pub fn midpoint(self, alpha: f64) -> f64 {
        match self {
            Regime::Lower => alpha / 2.0,
            Regime::Upper => (1.0 + alpha) / 2.0,
        }
    }

    pub fn interval(self, alpha: f64) -> (f64, f64) {
        match self {
            Regime::Lower => (0.0, alpha),
            Regime::Upper => (alpha, 1.0),
        }
    }
}

pub(crate) fn check_sandwich(a: &PosDef, b: &PosDef, x: &CMatrix) -> Result<()> {
    if x.rows() != a.dim() || x.cols() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{} between {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParams(format!(
            "alpha = {alpha} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `A^p X B^q + A^q X B^p` for arbitrary real exponents.
pub fn sym_product(a: &PosDef, b: &PosDef, x: &CMatrix, p: f64, q: f64) -> Result<CMatrix> {
    check_sandwich(a, b, x)?;
    let first = a.pow(p) * x * b.pow(q);
    if p == q {
        return Ok(first.scale(2.0));
    }
    Ok(first + a.pow(q) * x * b.pow(p))
}

/// `A^alpha X B^(1-alpha) + A^(1-alpha) X B^alpha`.
pub fn heinz_expr(a: &PosDef, b: &PosDef, x: &CMatrix, alpha: f64) -> Result<CMatrix> {
    check_alpha(alpha)?;
    sym_product(a, b, x, alpha, 1.0 - alpha)
}

/// `AX + XB`, computed directly.
pub fn endpoint_sum(a: &PosDef, b: &PosDef, x: &CMatrix) -> Result<CMatrix> {
    check_sandwich(a, b, x)?;
    Ok(a.matrix() * x + x * b.matrix())
}

pub fn heinz_check(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    alpha: f64,
    kind: NormKind,
) -> Result<ChainReport> {
    let upper = norm(&endpoint_sum(a, b, x)?, kind);
    let lower = norm(&heinz_expr(a, b, x, alpha)?, kind);
    Ok(ChainReport::new(
        vec![("|||AX+XB|||", upper), ("|||heinz(alpha)|||", lower)],
        DEFAULT_TOL,
    ))
}

/// `(|||A^*A X + X B B^*|||, 2 |||A X B|||)` for arbitrary `A`, `B`.
pub fn agm_check(a: &CMatrix, b: &CMatrix, x: &CMatrix, kind: NormKind) -> Result<ChainReport> {
    let lhs = a.adjoint().matmul(a)?.matmul(x)? + x.matmul(&b.matmul(&b.adjoint())?)?;
    let rhs = a.matmul(x)?.matmul(b)?;
    Ok(ChainReport::new(
        vec![
            ("|||A*AX+XBB*|||", norm(&lhs, kind)),
            ("2|||AXB|||", 2.0 * norm(&rhs, kind)),
        ],
        DEFAULT_TOL,
    ))
}

/// Mean of `nu -> |||heinz_expr(A, B, X, nu)|||` over `[lo, hi]` by
/// Gauss-Legendre with `nodes` points.
#[allow(clippy::too_many_arguments)]
pub fn integral_mean_norm(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    lo: f64,
    hi: f64,
    kind: NormKind,
    nodes: usize,
) -> Result<f64> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "interval [{lo}, {hi}] not inside [0, 1]"
        )));
    }
    check_sandwich(a, b, x)?;
    GaussLegendre::new(nodes).adaptive_mean(lo, hi, |nu| {
        Ok(norm(&sym_product(a, b, x, nu, 1.0 - nu)?, kind))
    })
}

pub fn kittaneh_chain(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    alpha: f64,
    kind: NormKind,
) -> Result<ChainReport> {
    kittaneh_chain_in(a, b, x, alpha, kind, Regime::for_alpha(alpha))
}

/// The five-term refined Heinz chain, largest first:
/// `|||AX+XB|||`, the average of that and the Heinz mean at `alpha`, the
/// interval mean, the Heinz mean at the regime midpoint, the Heinz mean at
/// `alpha`. `alpha = 1/2` belongs to both regimes.
pub fn kittaneh_chain_in(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    alpha: f64,
    kind: NormKind,
    regime: Regime,
) -> Result<ChainReport> {
    check_alpha(alpha)?;
    let valid = match regime {
        Regime::Lower => alpha <= 0.5,
        Regime::Upper => alpha >= 0.5,
    };
    if !valid {
        return Err(Error::InvalidParams(format!(
            "alpha = {alpha} outside {regime:?} regime"
        )));
    }
    let endpoint = norm(&endpoint_sum(a, b, x)?, kind);
    let at_alpha = norm(&heinz_expr(a, b, x, alpha)?, kind);
    let at_mid = norm(&heinz_expr(a, b, x, regime.midpoint(alpha))?, kind);
    let (lo, hi) = regime.interval(alpha);
    let mean = integral_mean_norm(a, b, x, lo, hi, kind, DEFAULT_NODES)?;
    Ok(ChainReport::new(
        vec![
            ("|||AX+XB|||", endpoint),
            ("half-sum", 0.5 * endpoint + 0.5 * at_alpha),
            ("interval mean", mean),
            ("heinz(midpoint)", at_mid),
            ("heinz(alpha)", at_alpha),
        ],
        DEFAULT_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{ginibre, random_posdef, Rng};

    fn instance(n: usize, seed: u64) -> (PosDef, PosDef, CMatrix) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = ginibre(n, n, &mut rng);
        (a, b, x)
    }

    #[test]
    fn identity_weights_give_twice_x() {
        let id = PosDef::identity(3);
        let x = ginibre(3, 3, &mut Rng::new(1));
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let h = heinz_expr(&id, &id, &x, alpha).unwrap();
            assert!(h.rel_diff(&x.scale(2.0)) < 1e-14);
        }
    }

    #[test]
    fn half_collapses_to_single_term() {
        let (a, b, x) = instance(3, 2);
        let h = heinz_expr(&a, &b, &x, 0.5).unwrap();
        let single = (a.pow(0.5) * &x * b.pow(0.5)).scale(2.0);
        assert!(h.rel_diff(&single) < 1e-13);
    }

    #[test]
    fn symmetric_in_alpha() {
        let (a, b, x) = instance(4, 3);
        let h1 = heinz_expr(&a, &b, &x, 0.3).unwrap();
        let h2 = heinz_expr(&a, &b, &x, 0.7).unwrap();
        assert!(h1.rel_diff(&h2) <= 1e-12);
    }

    #[test]
    fn heinz_equality_cases() {
        let id = PosDef::identity(3);
        let x = ginibre(3, 3, &mut Rng::new(4));
        let r = heinz_check(&id, &id, &x, 0.3, NormKind::Operator).unwrap();
        assert!(r.margins[0].abs() < 1e-13);
        let (a, b, x) = instance(3, 5);
        let r = heinz_check(&a, &b, &x, 0.0, NormKind::TRACE).unwrap();
        assert!(r.margins[0].abs() <= 1e-12 * r.values[0]);
    }

    #[test]
    fn heinz_random_instance() {
        let (a, b, x) = instance(4, 6);
        let r = heinz_check(&a, &b, &x, 0.3, NormKind::Operator).unwrap();
        assert!(r.all_pass());
        assert!(r.margins[0] >= 0.0);
    }

    #[test]
    fn agm_examples() {
        let mut rng = Rng::new(7);
        let x = ginibre(3, 3, &mut rng);
        let id = CMatrix::identity(3);
        let r = agm_check(&id, &id, &x, NormKind::Operator).unwrap();
        let nx = norm(&x, NormKind::Operator);
        assert!((r.values[0] - 2.0 * nx).abs() < 1e-13);
        assert!((r.values[1] - 2.0 * nx).abs() < 1e-13);

        let b = ginibre(3, 3, &mut rng);
        let r = agm_check(&CMatrix::zeros(3, 3), &b, &x, NormKind::Operator).unwrap();
        assert_eq!(r.values[1], 0.0);
        assert!((r.values[0] - norm(&(&x * &b * b.adjoint()), NormKind::Operator)).abs() < 1e-13);

        let a = ginibre(3, 3, &mut rng);
        assert!(agm_check(&a, &b, &x, NormKind::TRACE).unwrap().all_pass());
    }

    #[test]
    fn integral_mean_constant_integrand() {
        let id = PosDef::identity(2);
        let x = ginibre(2, 2, &mut Rng::new(8));
        let nx = norm(&x, NormKind::FROBENIUS);
        let m = integral_mean_norm(&id, &id, &x, 0.1, 0.6, NormKind::FROBENIUS, 32).unwrap();
        assert!((m - 2.0 * nx).abs() < 1e-13);
    }

    #[test]
    fn integral_mean_node_doubling() {
        let (a, b, x) = instance(4, 9);
        for kind in [NormKind::Operator, NormKind::TRACE, NormKind::FROBENIUS] {
            let m32 = integral_mean_norm(&a, &b, &x, 0.0, 0.4, kind, 32).unwrap();
            let m64 = integral_mean_norm(&a, &b, &x, 0.0, 0.4, kind, 64).unwrap();
            assert!((m32 - m64).abs() <= 1e-8 * m64, "{kind}");
        }
    }

    #[test]
    fn integral_mean_tends_to_endpoint_sum() {
        let (a, b, x) = instance(3, 10);
        let target = norm(&endpoint_sum(&a, &b, &x).unwrap(), NormKind::Operator);
        let m = integral_mean_norm(&a, &b, &x, 0.0, 1e-6, NormKind::Operator, 32).unwrap();
        assert!((m - target).abs() <= 1e-4 * target);
        let m = integral_mean_norm(&a, &b, &x, 1.0 - 1e-6, 1.0, NormKind::Operator, 32).unwrap();
        assert!((m - target).abs() <= 1e-4 * target);
    }

    #[test]
    fn kittaneh_identity_all_equal() {
        let id = PosDef::identity(3);
        let x = ginibre(3, 3, &mut Rng::new(11));
        let nx = norm(&x, NormKind::TRACE);
        let r = kittaneh_chain(&id, &id, &x, 0.2, NormKind::TRACE).unwrap();
        for v in &r.values {
            assert!((v - 2.0 * nx).abs() < 1e-12);
        }
    }

    #[test]
    fn kittaneh_regimes_agree_at_half() {
        let (a, b, x) = instance(3, 12);
        let lo = kittaneh_chain_in(&a, &b, &x, 0.5, NormKind::Operator, Regime::Lower).unwrap();
        let hi = kittaneh_chain_in(&a, &b, &x, 0.5, NormKind::Operator, Regime::Upper).unwrap();
        for (u, v) in lo.values.iter().zip(&hi.values) {
            assert!((u - v).abs() <= 1e-10 * u.max(1.0));
        }
    }

    #[test]
    fn kittaneh_random_monotone() {
        let (a, b, x) = instance(3, 13);
        let r = kittaneh_chain(&a, &b, &x, 0.2, NormKind::TRACE).unwrap();
        assert_eq!(r.len(), 5);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn error_paths() {
        let (a, b, x) = instance(3, 14);
        assert!(matches!(
            heinz_expr(&a, &b, &x, 1.5),
            Err(Error::InvalidParams(_))
        ));
        let wrong = ginibre(2, 3, &mut Rng::new(0));
        assert!(matches!(
            heinz_expr(&a, &b, &wrong, 0.5),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(kittaneh_chain_in(&a, &b, &x, 0.7, NormKind::Operator, Regime::Lower).is_err());
        assert!(integral_mean_norm(&a, &b, &x, 0.5, 0.2, NormKind::Operator, 8).is_err());
        let semidefinite = CMatrix::from_diag_real(&[1.0, 0.0, 2.0]);
        assert!(matches!(
            PosDef::new(&semidefinite),
            Err(Error::NotPositiveDefinite(_))
        ));
    }
}
