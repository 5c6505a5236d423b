//! The operator classes `D_k` of invertible `S` with
//! `|||SXS^-1 + S^-1XS + kX||| >= (k+2)|||X|||`, their Schur multiplier
//! structure for self-adjoint `S`, a local-search probe of the infimum, and
//! sampled checks of the norm relations that characterize classical classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainReport, DEFAULT_TOL, EQUALITY_TOL};
use crate::error::{Error, Result};
use crate::matcore::{
    haar_unitary, herm_eigen, nonzero_complex_scalar, random_normal_invertible, random_reflection,
    random_selfadjoint_invertible, svd, CMatrix, Complex, HermEigen, Rng,
};
use crate::norms::{norm, NormKind};

/// Slack on the pairwise spectral criterion.
pub const SPECTRAL_TOL: f64 = 1e-12;
/// A probe ratio this far (relative) below `k+2` counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// `S X S^-1 + S^-1 X S + kX`.
pub fn phi(s: &CMatrix, k: f64, x: &CMatrix) -> Result<CMatrix> {
    if !s.is_square() || x.shape() != s.shape() {
        return Err(Error::DimensionMismatch(
            "S and X must be square of equal size".into(),
        ));
    }
    let si = s.inverse()?;
    Ok(phi_with_inverse(s, &si, k, x))
}

fn phi_with_inverse(s: &CMatrix, si: &CMatrix, k: f64, x: &CMatrix) -> CMatrix {
    s * x * si + si * x * s + x.scale(k)
}

/// `|l/m + m/l + k|`.
pub fn pair_value(l: f64, m: f64, k: f64) -> f64 {
    (l / m + m / l + k).abs()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTest {
    /// Every pair satisfies `|l/m + m/l + k| >= k + 2`.
    pub ok: bool,
    /// `k >= 0`, where the criterion is known to be necessary for membership.
    pub guaranteed: bool,
    pub worst_pair: (usize, usize),
    pub worst_value: f64,
    /// `(i, j, value)` for `i < j`.
    pub pairs: Vec<(usize, usize, f64)>,
}

pub fn dk_spectral_test(eigs: &[f64], k: f64) -> Result<SpectralTest> {
    if eigs.is_empty() {
        return Err(Error::InvalidParams("no eigenvalues".into()));
    }
    if let Some(i) = eigs.iter().position(|&l| l == 0.0) {
        return Err(Error::ZeroEigenvalue(i));
    }
    let mut pairs = Vec::new();
    // a single eigenvalue only pairs with itself
    let mut worst = (0, 0, pair_value(eigs[0], eigs[0], k));
    if eigs.len() > 1 {
        worst.2 = f64::INFINITY;
    }
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            let v = pair_value(eigs[i], eigs[j], k);
            if v < worst.2 {
                worst = (i, j, v);
            }
            pairs.push((i, j, v));
        }
    }
    Ok(SpectralTest {
        ok: worst.2 >= k + 2.0 - SPECTRAL_TOL,
        guaranteed: k >= 0.0,
        worst_pair: (worst.0, worst.1),
        worst_value: worst.2,
        pairs,
    })
}

/// `M_ij = l_i/l_j + l_j/l_i + k`.
pub fn multiplier(eigs: &[f64], k: f64) -> CMatrix {
    let n = eigs.len();
    CMatrix::from_fn(n, n, |i, j| {
        Complex::new(eigs[i] / eigs[j] + eigs[j] / eigs[i] + k, 0.0)
    })
}

fn selfadjoint_eigen(s: &CMatrix) -> Result<HermEigen> {
    let defect = s.hermitian_defect();
    if defect > HERMITIAN_TOL * s.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let e = herm_eigen(s)?;
    let scale = e.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if e.eigenvalues.iter().any(|l| l.abs() <= 1e-14 * scale) {
        return Err(Error::Singular);
    }
    Ok(e)
}

/// Relative Frobenius distance between `phi(S, k, X)` and its Schur product
/// form `Q (M o (Q^* X Q)) Q^*` with `S = Q diag(l) Q^*`.
pub fn schur_rep_residual(s: &CMatrix, k: f64, x: &CMatrix) -> Result<f64> {
    let e = selfadjoint_eigen(s)?;
    let direct = phi(s, k, x)?;
    let q = &e.vectors;
    let y = q.adjoint() * x * q;
    let rep = q * &multiplier(&e.eigenvalues, k).hadamard(&y)? * q.adjoint();
    Ok((&direct - &rep).frobenius_norm() / direct.frobenius_norm().max(1.0))
}

/// `(max_i N_ii ||X||, ||N o X||)` in the operator norm for positive
/// semidefinite `N`.
pub fn schur_theorem_bound_check(n: &CMatrix, x: &CMatrix) -> Result<ChainReport> {
    if !n.is_square() || x.shape() != n.shape() {
        return Err(Error::DimensionMismatch(
            "N and X must be square of equal size".into(),
        ));
    }
    let defect = n.hermitian_defect();
    if defect > HERMITIAN_TOL * n.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let e = herm_eigen(n)?;
    if e.min() < -PSD_TOL * e.max().abs().max(1.0) {
        return Err(Error::NotPsd(e.min()));
    }
    let top = n
        .diagonal()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ChainReport::new(
        vec![
            ("max N_ii ||X||", top * norm(x, NormKind::Operator)),
            ("||N o X||", norm(&n.hadamard(x)?, NormKind::Operator)),
        ],
        DEFAULT_TOL,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DkVerdict {
    /// A witness with ratio below `k+2` was found.
    Violated,
    /// Nothing below `k+2` within the search budget.
    Consistent,
    /// The pairwise spectral criterion already fails.
    SpectrallyExcluded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DkProbeResult {
    pub eigenvalues: Vec<f64>,
    pub k: f64,
    pub spectral_ok: bool,
    /// Least `||phi(X)|| / ||X||` found; an upper bound on the infimum.
    pub best_ratio: f64,
    /// Unit operator norm.
    pub witness: CMatrix,
    pub starts_used: usize,
    pub verdict: DkVerdict,
}

/// Multistart projected subgradient descent of `||phi(X)|| / ||X||` in the
/// operator norm over the unit Frobenius sphere.
///
/// The search runs in the eigenbasis of `S`, where `phi` is the Schur
/// multiplier by [`multiplier`]. Starting points are every `e_i e_j^*`, the
/// identity, and `starts` Ginibre draws, start `i` using substream `i` of `rng`.
pub fn dk_ratio_minimize(
    s: &CMatrix,
    k: f64,
    starts: usize,
    iters: usize,
    rng: &Rng,
) -> Result<DkProbeResult> {
    let e = selfadjoint_eigen(s)?;
    let n = e.dim();
    let m = multiplier(&e.eigenvalues, k);

    let mut seeds: Vec<CMatrix> = Vec::with_capacity(n * n + 1 + starts);
    for i in 0..n {
        for j in 0..n {
            seeds.push(CMatrix::unit(n, n, i, j));
        }
    }
    seeds.push(CMatrix::identity(n));
    for i in 0..starts {
        seeds.push(crate::matcore::ginibre(n, n, &mut rng.substream(i as u64)));
    }

    let mut best: Option<(f64, CMatrix)> = None;
    for seed in &seeds {
        let (r, y) = descend(&m, seed, iters)?;
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, y));
        }
    }
    let (_, y) = best.expect("at least one start");
    let q = &e.vectors;
    let x = q * &y * q.adjoint();
    let witness = x.scale(1.0 / norm(&x, NormKind::Operator));
    let best_ratio = norm(&phi(s, k, &witness)?, NormKind::Operator);

    let spectral = dk_spectral_test(&e.eigenvalues, k)?;
    let verdict = if !spectral.ok {
        DkVerdict::SpectrallyExcluded
    } else if best_ratio < k + 2.0 - VIOLATION_TOL * (k + 2.0).abs().max(1.0) {
        DkVerdict::Violated
    } else {
        DkVerdict::Consistent
    };
    Ok(DkProbeResult {
        eigenvalues: e.eigenvalues.clone(),
        k,
        spectral_ok: spectral.ok,
        best_ratio,
        witness,
        starts_used: seeds.len(),
        verdict,
    })
}

fn top_pair(a: &CMatrix) -> Result<(f64, CMatrix)> {
    let d = svd(a)?;
    let n = a.rows();
    let u = CMatrix::from_fn(n, 1, |i, _| d.left[(i, 0)]);
    let v = CMatrix::from_fn(a.cols(), 1, |i, _| d.right[(i, 0)]);
    Ok((d.singular_values[0], &u * &v.adjoint()))
}

/// Returns the best ratio seen and the iterate attaining it.
fn descend(m: &CMatrix, start: &CMatrix, iters: usize) -> Result<(f64, CMatrix)> {
    let mut y = start.scale(1.0 / start.frobenius_norm());
    let ratio = |y: &CMatrix| -> Result<f64> {
        let num = norm(&m.hadamard(y)?, NormKind::Operator);
        Ok(num / norm(y, NormKind::Operator))
    };
    let mut best = (ratio(&y)?, y.clone());
    for it in 1..=iters {
        let (sigma, uv) = top_pair(&m.hadamard(&y)?)?;
        let (tau, uv_den) = top_pair(&y)?;
        let grad = &m.hadamard(&uv)?.scale(1.0 / tau) - &uv_den.scale(sigma / (tau * tau));
        let g = grad.frobenius_norm();
        if g < 1e-15 {
            break;
        }
        let step = 0.1 / (it as f64).sqrt();
        let next = &y - &grad.scale(step / g);
        let f = next.frobenius_norm();
        if f < 1e-300 {
            break;
        }
        y = next.scale(1.0 / f);
        let r = ratio(&y)?;
        if r < best.0 {
            best = (r, y.clone());
        }
    }
    Ok(best)
}

/// Classes of invertible operators characterized by the relations in
/// [`CharacterizationForm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    /// Nonzero complex multiples of invertible self-adjoint operators.
    ComplexSelfadjoint,
    /// Invertible normal operators.
    Normal,
    /// Nonzero real multiples of unitaries.
    RealScaledUnitary,
    /// Nonzero complex multiples of unitary reflections.
    ComplexReflection,
}

fn log_uniform_modulus(cond: f64, rng: &mut Rng) -> f64 {
    let h = 0.5 * cond.ln();
    rng.uniform_in(-h, h).exp()
}

/// Draws a member of `class` with spectral moduli spread over about `cond`.
pub fn sample_class(class: OperatorClass, n: usize, cond: f64, rng: &mut Rng) -> CMatrix {
    match class {
        OperatorClass::ComplexSelfadjoint => {
            let c = nonzero_complex_scalar(rng);
            random_selfadjoint_invertible(n, cond, rng)
                .matrix
                .scale_complex(c)
        }
        OperatorClass::Normal => random_normal_invertible(n, cond, rng),
        OperatorClass::RealScaledUnitary => {
            let r = rng.sign() * log_uniform_modulus(cond, rng);
            haar_unitary(n, rng).scale(r)
        }
        OperatorClass::ComplexReflection => {
            let c = nonzero_complex_scalar(rng);
            random_reflection(n, rng).scale_complex(c)
        }
    }
}

/// Norm relations between `X` and its conjugates by an invertible `S`. With
///
/// * `sum = |||SXS^-1 + S^-1XS|||`, `star_sum = |||S^*XS^-1 + S^-1XS^*|||`,
/// * `split = |||SXS^-1||| + |||S^-1XS|||`,
///   `star_split = |||S^*XS^-1||| + |||S^-1XS^*|||`,
///
/// each variant names one relation, e.g. `SumGeTwoX` is `sum >= 2|||X|||`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharacterizationForm {
    SumGeTwoX,
    SumEqStarSum,
    SumGeStarSum,
    SplitGeTwoX,
    SplitEqStarSplit,
    SplitGeStarSplit,
    SplitLeStarSplit,
    SumLeTwoX,
    SumEqTwoX,
    SumLeStarSum,
    SplitEqTwoX,
    SplitLeTwoX,
    StarSumEqTwoX,
    StarSplitEqTwoX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Sum,
    StarSum,
    Split,
    StarSplit,
    TwoX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Ge,
    Le,
    Eq,
}

impl CharacterizationForm {
    pub const ALL: [CharacterizationForm; 14] = [
        Self::SumGeTwoX,
        Self::SumEqStarSum,
        Self::SumGeStarSum,
        Self::SplitGeTwoX,
        Self::SplitEqStarSplit,
        Self::SplitGeStarSplit,
        Self::SplitLeStarSplit,
        Self::SumLeTwoX,
        Self::SumEqTwoX,
        Self::SumLeStarSum,
        Self::SplitEqTwoX,
        Self::SplitLeTwoX,
        Self::StarSumEqTwoX,
        Self::StarSplitEqTwoX,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SumGeTwoX => "sum-ge-2x",
            Self::SumEqStarSum => "sum-eq-star-sum",
            Self::SumGeStarSum => "sum-ge-star-sum",
            Self::SplitGeTwoX => "split-ge-2x",
            Self::SplitEqStarSplit => "split-eq-star-split",
            Self::SplitGeStarSplit => "split-ge-star-split",
            Self::SplitLeStarSplit => "split-le-star-split",
            Self::SumLeTwoX => "sum-le-2x",
            Self::SumEqTwoX => "sum-eq-2x",
            Self::SumLeStarSum => "sum-le-star-sum",
            Self::SplitEqTwoX => "split-eq-2x",
            Self::SplitLeTwoX => "split-le-2x",
            Self::StarSumEqTwoX => "star-sum-eq-2x",
            Self::StarSplitEqTwoX => "star-split-eq-2x",
        }
    }

    fn parts(self) -> (Side, Cmp, Side) {
        use Cmp::*;
        use Side::*;
        match self {
            Self::SumGeTwoX => (Sum, Ge, TwoX),
            Self::SumEqStarSum => (Sum, Eq, StarSum),
            Self::SumGeStarSum => (Sum, Ge, StarSum),
            Self::SplitGeTwoX => (Split, Ge, TwoX),
            Self::SplitEqStarSplit => (Split, Eq, StarSplit),
            Self::SplitGeStarSplit => (Split, Ge, StarSplit),
            Self::SplitLeStarSplit => (Split, Le, StarSplit),
            Self::SumLeTwoX => (Sum, Le, TwoX),
            Self::SumEqTwoX => (Sum, Eq, TwoX),
            Self::SumLeStarSum => (Sum, Le, StarSum),
            Self::SplitEqTwoX => (Split, Eq, TwoX),
            Self::SplitLeTwoX => (Split, Le, TwoX),
            Self::StarSumEqTwoX => (StarSum, Eq, TwoX),
            Self::StarSplitEqTwoX => (StarSplit, Eq, TwoX),
        }
    }

    pub fn is_equality(self) -> bool {
        self.parts().1 == Cmp::Eq
    }

    /// The class this relation (holding for all `X`) singles out, if any.
    pub fn characterized_class(self) -> Option<OperatorClass> {
        use CharacterizationForm::*;
        match self {
            SumGeTwoX | SumEqStarSum | SumGeStarSum => Some(OperatorClass::ComplexSelfadjoint),
            SplitGeTwoX | SplitEqStarSplit | SplitGeStarSplit | SplitLeStarSplit => {
                Some(OperatorClass::Normal)
            }
            SumLeTwoX | SplitEqTwoX | SplitLeTwoX | StarSumEqTwoX | StarSplitEqTwoX => {
                Some(OperatorClass::RealScaledUnitary)
            }
            SumEqTwoX => Some(OperatorClass::ComplexReflection),
            SumLeStarSum => None,
        }
    }
}

impl fmt::Display for CharacterizationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CharacterizationForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown characterization form '{s}'")))
    }
}

fn side_label(side: Side) -> &'static str {
    match side {
        Side::Sum => "|||SXS^-1+S^-1XS|||",
        Side::StarSum => "|||S*XS^-1+S^-1XS*|||",
        Side::Split => "|||SXS^-1|||+|||S^-1XS|||",
        Side::StarSplit => "|||S*XS^-1|||+|||S^-1XS*|||",
        Side::TwoX => "2|||X|||",
    }
}

/// Evaluates both sides of `form`. `>=` relations become a two-member chain,
/// `<=` relations the reversed chain, and equalities an equality report.
pub fn characterization_check(
    s: &CMatrix,
    x: &CMatrix,
    form: CharacterizationForm,
    kind: NormKind,
) -> Result<ChainReport> {
    if !s.is_square() || x.shape() != s.shape() {
        return Err(Error::DimensionMismatch(
            "S and X must be square of equal size".into(),
        ));
    }
    let si = s.inverse()?;
    let sa = s.adjoint();
    let value = |side: Side| -> f64 {
        match side {
            Side::Sum => norm(&(s * x * &si + &si * x * s), kind),
            Side::StarSum => norm(&(&sa * x * &si + &si * x * &sa), kind),
            Side::Split => norm(&(s * x * &si), kind) + norm(&(&si * x * s), kind),
            Side::StarSplit => norm(&(&sa * x * &si), kind) + norm(&(&si * x * &sa), kind),
            Side::TwoX => 2.0 * norm(x, kind),
        }
    };
    let (l, cmp, r) = form.parts();
    let lhs = (side_label(l), value(l));
    let rhs = (side_label(r), value(r));
    Ok(match cmp {
        Cmp::Ge => ChainReport::new(vec![lhs, rhs], DEFAULT_TOL),
        Cmp::Le => ChainReport::new(vec![rhs, lhs], DEFAULT_TOL),
        Cmp::Eq => ChainReport::equality(vec![lhs, rhs], EQUALITY_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{ginibre, random_hermitian};

    #[test]
    fn phi_examples() {
        let x = ginibre(3, 3, &mut Rng::new(1));
        let p = phi(&CMatrix::identity(3), 0.7, &x).unwrap();
        assert!(p.rel_diff(&x.scale(2.7)) < 1e-15);
        let s = CMatrix::from_diag_real(&[1.0, -1.0]);
        let e12 = CMatrix::unit(2, 2, 0, 1);
        let k = 0.4;
        assert!(phi(&s, k, &e12).unwrap().rel_diff(&e12.scale(k - 2.0)) < 1e-15);
        assert_eq!(
            phi(&CMatrix::from_diag_real(&[1.0, 0.0]), 0.0, &e12),
            Err(Error::Singular)
        );
    }

    #[test]
    fn spectral_test_examples() {
        let t = dk_spectral_test(&[1.0, 2.0], 0.0).unwrap();
        assert!(t.ok);
        assert_eq!(t.worst_value, 2.5);
        let t = dk_spectral_test(&[1.0, -1.0], 1.0).unwrap();
        assert!(!t.ok);
        assert_eq!(t.worst_pair, (0, 1));
        assert_eq!(t.worst_value, 1.0);
        assert!(dk_spectral_test(&[1.0, -1.0], 0.0).unwrap().ok);
        assert!(!dk_spectral_test(&[1.0], -3.0).unwrap().guaranteed);
        assert_eq!(
            dk_spectral_test(&[1.0, 0.0], 0.0),
            Err(Error::ZeroEigenvalue(1))
        );
    }

    #[test]
    fn schur_residual_small() {
        let mut rng = Rng::new(2);
        let x1 = ginibre(1, 1, &mut rng);
        assert!(schur_rep_residual(&CMatrix::from_diag_real(&[-2.0]), 1.0, &x1).unwrap() < 1e-15);
        let d = CMatrix::from_diag_real(&[1.0, -3.0, 0.5]);
        let x = ginibre(3, 3, &mut rng);
        assert!(schur_rep_residual(&d, 0.5, &x).unwrap() <= 1e-12);
        let s = random_selfadjoint_invertible(5, 100.0, &mut rng).matrix;
        let x = ginibre(5, 5, &mut rng);
        assert!(schur_rep_residual(&s, 2.0, &x).unwrap() <= 1e-10);
    }

    #[test]
    fn schur_bound_examples() {
        let mut rng = Rng::new(3);
        let x = ginibre(3, 3, &mut rng);
        let ones = CMatrix::from_fn(3, 3, |_, _| Complex::new(1.0, 0.0));
        let r = schur_theorem_bound_check(&ones, &x).unwrap();
        assert!((r.values[0] - r.values[1]).abs() < 1e-12);
        let r = schur_theorem_bound_check(&CMatrix::identity(3), &x).unwrap();
        assert!(r.all_pass());
        let g = ginibre(3, 5, &mut rng);
        let gram = &g * &g.adjoint();
        assert!(schur_theorem_bound_check(&gram.hermitian_part(), &x)
            .unwrap()
            .all_pass());
        let neg = CMatrix::from_diag_real(&[1.0, -1.0, 1.0]);
        assert!(matches!(
            schur_theorem_bound_check(&neg, &x),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn probe_identity() {
        let r = dk_ratio_minimize(&CMatrix::identity(3), 0.5, 4, 50, &Rng::new(4)).unwrap();
        assert!((r.best_ratio - 2.5).abs() < 1e-12);
        assert_eq!(r.verdict, DkVerdict::Consistent);
        assert_eq!(r.starts_used, 9 + 1 + 4);
    }

    #[test]
    fn probe_two_by_two() {
        let s = CMatrix::from_diag_real(&[1.0, 2.0]);
        let r = dk_ratio_minimize(&s, 0.0, 8, 100, &Rng::new(5)).unwrap();
        assert!((r.best_ratio - 2.0).abs() < 1e-4);
        let s = CMatrix::from_diag_real(&[1.0, -1.0]);
        let r = dk_ratio_minimize(&s, 1.0, 8, 100, &Rng::new(6)).unwrap();
        assert!(r.best_ratio <= 1.0 + 1e-6);
        assert_eq!(r.verdict, DkVerdict::SpectrallyExcluded);
        let check = norm(&phi(&s, 1.0, &r.witness).unwrap(), NormKind::Operator);
        assert!((check - r.best_ratio).abs() <= 1e-10 * r.best_ratio);
        assert!((norm(&r.witness, NormKind::Operator) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probe_is_deterministic() {
        let s = random_hermitian(3, &mut Rng::new(7));
        let a = dk_ratio_minimize(&s, 1.0, 5, 40, &Rng::new(8)).unwrap();
        let b = dk_ratio_minimize(&s, 1.0, 5, 40, &Rng::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn form_ids_round_trip() {
        for f in CharacterizationForm::ALL {
            assert_eq!(f.id().parse::<CharacterizationForm>().unwrap(), f);
        }
        assert!("nope".parse::<CharacterizationForm>().is_err());
    }

    #[test]
    fn forms_hold_on_their_classes() {
        let mut rng = Rng::new(9);
        for form in CharacterizationForm::ALL {
            let Some(class) = form.characterized_class() else {
                continue;
            };
            for _ in 0..5 {
                let s = sample_class(class, 3, 50.0, &mut rng);
                let x = ginibre(3, 3, &mut rng);
                for kind in [NormKind::Operator, NormKind::TRACE, NormKind::KyFan(2)] {
                    let r = characterization_check(&s, &x, form, kind).unwrap();
                    assert!(r.all_pass(), "{form} {kind} {:?}", r.values);
                }
            }
        }
    }

    #[test]
    fn sum_eq_two_x_fails_off_class() {
        let s = CMatrix::from_diag_real(&[1.0, 3.0]);
        let x = CMatrix::unit(2, 2, 0, 1);
        let r = characterization_check(&s, &x, CharacterizationForm::SumEqTwoX, NormKind::Operator)
            .unwrap();
        assert!(!r.all_pass());
        assert!((r.values[0] - 10.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn less_equal_forms_reverse_the_chain() {
        let u = haar_unitary(3, &mut Rng::new(10));
        let x = ginibre(3, 3, &mut Rng::new(11));
        let r = characterization_check(&u, &x, CharacterizationForm::SumLeTwoX, NormKind::Operator)
            .unwrap();
        assert_eq!(r.labels[0], "2|||X|||");
        assert!(r.all_pass());
    }
}
