//! Corach-Porta-Recht type inequalities, the two-parameter Zhan chain and its
//! corollaries, and the direct-sum variants.

use crate::chain::{ChainReport, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::heinz::{check_sandwich, sym_product, Regime};
use crate::matcore::{abs_adjoint_matrix, abs_matrix, CMatrix, PosDef};
use crate::norms::{norm, NormKind};
use crate::quadrature::{GaussLegendre, DEFAULT_NODES};

const HERMITIAN_TOL: f64 = 1e-12;

/// Parameters `(t, r)` with `t <= 2` and `r` in `[1/2, 3/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZhanParams {
    pub t: f64,
    pub r: f64,
}

impl ZhanParams {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(t.is_finite() && t <= 2.0) {
            return Err(Error::InvalidParams(format!("t = {t} must satisfy t <= 2")));
        }
        if !(0.5..=1.5).contains(&r) {
            return Err(Error::InvalidParams(format!("r = {r} outside [1/2, 3/2]")));
        }
        Ok(Self { t, r })
    }

    /// `r <= 1` is the lower regime.
    pub fn regime(&self) -> Regime {
        if self.r <= 1.0 {
            Regime::Lower
        } else {
            Regime::Upper
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t <= 2.0) {
        return Err(Error::InvalidParams(format!("t = {t} must satisfy t <= 2")));
    }
    Ok(())
}

fn check_square_pair(s: &CMatrix, x: &CMatrix) -> Result<()> {
    if !s.is_square() || x.shape() != s.shape() {
        return Err(Error::DimensionMismatch(format!(
            "S is {}x{}, X is {}x{}",
            s.rows(),
            s.cols(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

fn selfadjoint_inverse(s: &CMatrix) -> Result<CMatrix> {
    let defect = s.hermitian_defect();
    if defect > HERMITIAN_TOL * s.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    s.inverse()
}

fn two_x(x: &CMatrix, kind: NormKind) -> (&'static str, f64) {
    ("2|||X|||", 2.0 * norm(x, kind))
}

/// `(|||S X S^-1 + S^-1 X S|||, 2|||X|||)` for self-adjoint invertible `S`.
pub fn cpr_check(s: &CMatrix, x: &CMatrix, kind: NormKind) -> Result<ChainReport> {
    check_square_pair(s, x)?;
    let si = selfadjoint_inverse(s)?;
    let lhs = s * x * &si + &si * x * s;
    Ok(ChainReport::new(
        vec![("|||SXS^-1+S^-1XS|||", norm(&lhs, kind)), two_x(x, kind)],
        DEFAULT_TOL,
    ))
}

/// `(|||S X T^-1 + S^-1 X T|||, 2|||X|||)` for self-adjoint invertible `S`, `T`.
pub fn cpr_two_sided_check(
    s: &CMatrix,
    t: &CMatrix,
    x: &CMatrix,
    kind: NormKind,
) -> Result<ChainReport> {
    check_square_pair(s, x)?;
    check_square_pair(t, x)?;
    let si = selfadjoint_inverse(s)?;
    let ti = selfadjoint_inverse(t)?;
    let lhs = s * x * &ti + &si * x * t;
    Ok(ChainReport::new(
        vec![("|||SXT^-1+S^-1XT|||", norm(&lhs, kind)), two_x(x, kind)],
        DEFAULT_TOL,
    ))
}

/// `(|||S^* X S^-1 + S^-1 X S^*|||, 2|||X|||)` for any invertible `S`.
pub fn cpr_star_check(s: &CMatrix, x: &CMatrix, kind: NormKind) -> Result<ChainReport> {
    check_square_pair(s, x)?;
    let si = s.inverse()?;
    let ss = s.adjoint();
    let lhs = &ss * x * &si + &si * x * &ss;
    Ok(ChainReport::new(
        vec![("|||S*XS^-1+S^-1XS*|||", norm(&lhs, kind)), two_x(x, kind)],
        DEFAULT_TOL,
    ))
}

/// Quantities shared by the Zhan inequality and the full chain.
struct ZhanEnds {
    /// `2 |||A^2 X + t AXB + X B^2|||`
    lhs: f64,
    /// `|||A^2 X + X B^2 + 2 AXB|||`
    with_two: f64,
    /// `|||AXB|||`
    axb: f64,
    /// `|||A^r X B^(2-r) + A^(2-r) X B^r|||`
    at_r: f64,
}

impl ZhanEnds {
    fn compute(a: &PosDef, b: &PosDef, x: &CMatrix, p: ZhanParams, kind: NormKind) -> Result<Self> {
        check_sandwich(a, b, x)?;
        let (am, bm) = (a.matrix(), b.matrix());
        let squares = am * am * x + x * (bm * bm);
        let axb = am * x * bm;
        let lhs = 2.0 * norm(&(&squares + &axb.scale(p.t)), kind);
        let with_two = norm(&(&squares + &axb.scale(2.0)), kind);
        let at_r = norm(&sym_product(a, b, x, p.r, 2.0 - p.r)?, kind);
        Ok(Self {
            lhs,
            with_two,
            axb: norm(&axb, kind),
            at_r,
        })
    }

    fn rhs(&self, t: f64) -> f64 {
        (t + 2.0) * self.at_r
    }
}

/// `(2|||A^2X + tAXB + XB^2|||, (2+t)|||A^rXB^(2-r) + A^(2-r)XB^r|||)`.
pub fn zhan_check(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    params: ZhanParams,
    kind: NormKind,
) -> Result<ChainReport> {
    let params = ZhanParams::new(params.t, params.r)?;
    let ends = ZhanEnds::compute(a, b, x, params, kind)?;
    Ok(ChainReport::new(
        vec![
            ("2|||A^2X+tAXB+XB^2|||", ends.lhs),
            ("(t+2)|||H_r|||", ends.rhs(params.t)),
        ],
        DEFAULT_TOL,
    ))
}

pub fn zhan_chain(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    params: ZhanParams,
    kind: NormKind,
) -> Result<ChainReport> {
    zhan_chain_in(a, b, x, params, kind, params.regime())
}

/// The eight-member refinement of the Zhan inequality. Every member except
/// the first and last carries the correction `-(4-2t)|||AXB|||`. The interval
/// mean runs over `[0, r-1/2]` in the lower regime and `[r-1/2, 1]` in the
/// upper one; `r = 1` may be evaluated in either.
pub fn zhan_chain_in(
    a: &PosDef,
    b: &PosDef,
    x: &CMatrix,
    params: ZhanParams,
    kind: NormKind,
    regime: Regime,
) -> Result<ChainReport> {
    let params = ZhanParams::new(params.t, params.r)?;
    let ZhanParams { t, r } = params;
    let valid = match regime {
        Regime::Lower => r <= 1.0,
        Regime::Upper => r >= 1.0,
    };
    if !valid {
        return Err(Error::InvalidParams(format!(
            "r = {r} outside {regime:?} regime"
        )));
    }
    let ends = ZhanEnds::compute(a, b, x, params, kind)?;
    let corr = (4.0 - 2.0 * t) * ends.axb;
    let at_three_halves = norm(&sym_product(a, b, x, 1.5, 0.5)?, kind);

    let alpha = r - 0.5;
    let (lo, hi) = regime.interval(alpha);
    let mean = GaussLegendre::new(DEFAULT_NODES).adaptive_mean(lo, hi, |nu| {
        Ok::<_, Error>(norm(&sym_product(a, b, x, nu + 0.5, 1.5 - nu)?, kind))
    })?;
    let (qa, qb) = match regime {
        Regime::Lower => ((2.0 * r + 1.0) / 4.0, (7.0 - 2.0 * r) / 4.0),
        Regime::Upper => ((2.0 * r + 3.0) / 4.0, (5.0 - 2.0 * r) / 4.0),
    };
    let quarter = norm(&sym_product(a, b, x, qa, qb)?, kind);

    Ok(ChainReport::new(
        vec![
            ("2|||A^2X+XB^2+tAXB|||", ends.lhs),
            ("2|||A^2X+XB^2+2AXB|||-c", 2.0 * ends.with_two - corr),
            ("4|||H_3/2|||-c", 4.0 * at_three_halves - corr),
            (
                "2|||H_3/2|||+2|||H_r|||-c",
                2.0 * at_three_halves + 2.0 * ends.at_r - corr,
            ),
            ("4*interval mean-c", 4.0 * mean - corr),
            ("4|||H_quarter|||-c", 4.0 * quarter - corr),
            ("4|||H_r|||-c", 4.0 * ends.at_r - corr),
            ("(t+2)|||H_r|||", ends.rhs(t)),
        ],
        DEFAULT_TOL,
    ))
}

/// `(|||A^*A X + X BB^* + t|A| X |B^*|||| , (t+2)|||AXB|||)` for arbitrary
/// `A`, `B` and `t <= 2`, with `|A| = (A^*A)^{1/2}` and `|B^*| = (BB^*)^{1/2}`.
///
/// The pairing of `XBB^*` with `|B^*|` and `AXB` matters: mixing `XBB^*` with
/// `|B|` and `AXB^*` gives an inequality that fails for non-normal `B`.
pub fn cor23_check(
    a: &CMatrix,
    b: &CMatrix,
    x: &CMatrix,
    t: f64,
    kind: NormKind,
) -> Result<ChainReport> {
    check_t(t)?;
    if !a.is_square() || !b.is_square() || x.rows() != a.rows() || x.cols() != b.rows() {
        return Err(Error::DimensionMismatch("cor23 operand shapes".into()));
    }
    let abs_a = abs_matrix(a)?;
    let abs_bstar = abs_adjoint_matrix(b)?;
    let lhs = a.adjoint() * a * x + x * (b * b.adjoint()) + (&abs_a * x * &abs_bstar).scale(t);
    let rhs = a * x * b;
    Ok(ChainReport::new(
        vec![
            ("|||A*AX+XBB*+t|A|X|B*||||", norm(&lhs, kind)),
            ("(t+2)|||AXB|||", (t + 2.0) * norm(&rhs, kind)),
        ],
        DEFAULT_TOL,
    ))
}

/// `(|||P X Q^-1 + P^-1 X Q + tX|||, (t+2)|||X|||)`.
pub fn cor24_check(
    p: &PosDef,
    q: &PosDef,
    x: &CMatrix,
    t: f64,
    kind: NormKind,
) -> Result<ChainReport> {
    check_t(t)?;
    check_sandwich(p, q, x)?;
    let lhs = p.matrix() * x * q.pow(-1.0) + p.pow(-1.0) * x * q.matrix() + x.scale(t);
    Ok(ChainReport::new(
        vec![
            ("|||PXQ^-1+P^-1XQ+tX|||", norm(&lhs, kind)),
            ("(t+2)|||X|||", (t + 2.0) * norm(x, kind)),
        ],
        DEFAULT_TOL,
    ))
}

struct Conjugates {
    s: CMatrix,
    s_inv: CMatrix,
    s_adj: CMatrix,
    s_adj_inv: CMatrix,
}

impl Conjugates {
    fn new(s: &CMatrix) -> Result<Self> {
        let s_inv = s.inverse()?;
        Ok(Self {
            s: s.clone(),
            s_adj: s.adjoint(),
            s_adj_inv: s_inv.adjoint(),
            s_inv,
        })
    }

    /// `S Z S^-1 + S^{*-1} Z S^*`
    fn forward(&self, z: &CMatrix) -> CMatrix {
        &self.s * z * &self.s_inv + &self.s_adj_inv * z * &self.s_adj
    }

    /// `S^* Z S^{*-1} + S^-1 Z S`
    fn backward(&self, z: &CMatrix) -> CMatrix {
        &self.s_adj * z * &self.s_adj_inv + &self.s_inv * z * &self.s
    }
}

fn check_direct_sum_operands(s: &CMatrix, x: &CMatrix, y: &CMatrix) -> Result<()> {
    check_square_pair(s, x)?;
    check_square_pair(s, y)
}

/// `(|||(SYS^-1 + S^{*-1}YS^*) (+) (S^*XS^{*-1} + S^-1XS)|||, 2|||X (+) Y|||)`.
pub fn mos1_check(s: &CMatrix, x: &CMatrix, y: &CMatrix, kind: NormKind) -> Result<ChainReport> {
    check_direct_sum_operands(s, x, y)?;
    let c = Conjugates::new(s)?;
    let lhs = c.forward(y).direct_sum(&c.backward(x));
    Ok(ChainReport::new(
        vec![
            (
                "|||(SYS^-1+S*^-1YS*)+(S*XS*^-1+S^-1XS)|||",
                norm(&lhs, kind),
            ),
            ("2|||X+Y|||", 2.0 * norm(&x.direct_sum(y), kind)),
        ],
        DEFAULT_TOL,
    ))
}

/// `(|||(SYS^{*-1} + S^{*-1}YS) (+) (S^*XS^-1 + S^-1XS^*)|||, 2|||X (+) Y|||)`.
pub fn mos2_check(s: &CMatrix, x: &CMatrix, y: &CMatrix, kind: NormKind) -> Result<ChainReport> {
    check_direct_sum_operands(s, x, y)?;
    let c = Conjugates::new(s)?;
    let left = &c.s * y * &c.s_adj_inv + &c.s_adj_inv * y * &c.s;
    let right = &c.s_adj * x * &c.s_inv + &c.s_inv * x * &c.s_adj;
    Ok(ChainReport::new(
        vec![
            (
                "|||(SYS*^-1+S*^-1YS)+(S*XS^-1+S^-1XS*)|||",
                norm(&left.direct_sum(&right), kind),
            ),
            ("2|||X+Y|||", 2.0 * norm(&x.direct_sum(y), kind)),
        ],
        DEFAULT_TOL,
    ))
}

/// The direct-sum inequality with `Y = X`, read off blockwise in the operator
/// norm (maximum of the blocks) and in the Schatten `p`-norm (sum of `p`-th
/// powers).
#[derive(Clone, Debug, PartialEq)]
pub struct FinalCorReport {
    pub operator: ChainReport,
    pub schatten: ChainReport,
}

impl FinalCorReport {
    pub fn all_pass(&self) -> bool {
        self.operator.all_pass() && self.schatten.all_pass()
    }
}

pub fn final_cor_check(s: &CMatrix, x: &CMatrix, p: f64) -> Result<FinalCorReport> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParams(format!("p = {p} must be >= 1")));
    }
    check_square_pair(s, x)?;
    let c = Conjugates::new(s)?;
    let (m1, m2) = (c.forward(x), c.backward(x));
    let op = NormKind::Operator;
    let operator = ChainReport::new(
        vec![
            ("max block norm", norm(&m1, op).max(norm(&m2, op))),
            ("2||X||", 2.0 * norm(x, op)),
        ],
        DEFAULT_TOL,
    );
    let sp = NormKind::Schatten(p);
    let schatten = ChainReport::new(
        vec![
            (
                "sum of p-th powers",
                norm(&m1, sp).powf(p) + norm(&m2, sp).powf(p),
            ),
            ("2^(p+1)||X||_p^p", 2f64.powf(p + 1.0) * norm(x, sp).powf(p)),
        ],
        DEFAULT_TOL,
    );
    Ok(FinalCorReport { operator, schatten })
}
