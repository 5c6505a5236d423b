//! Gauss-Legendre quadrature.

use std::f64::consts::PI;

pub const DEFAULT_NODES: usize = 32;

/// Intervals shorter than this are collapsed to a single evaluation at the
/// midpoint, which is the limit of the interval mean.
pub const DEGENERATE_LENGTH: f64 = 1e-10;

/// Panel refinement stops once halving a panel changes its integral by less
/// than this fraction of the whole-interval estimate.
pub const PANEL_TOL: f64 = 1e-14;

pub const MAX_DEPTH: u32 = 30;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// `(1/(hi-lo)) * integral_lo^hi f`.
    pub fn mean<E>(
        &self,
        lo: f64,
        hi: f64,
        mut f: impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        if half.abs() * 2.0 < DEGENERATE_LENGTH {
            return f(mid);
        }
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(0.5 * acc)
    }

    /// Like [`mean`](Self::mean), but panels are bisected until the rule
    /// agrees with itself on the two halves. Norms of matrix paths can have
    /// kinks (singular values meeting or touching zero) where a single panel
    /// converges slowly.
    pub fn adaptive_mean<E>(
        &self,
        lo: f64,
        hi: f64,
        mut f: impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        if (hi - lo).abs() < DEGENERATE_LENGTH {
            return f(0.5 * (hi + lo));
        }
        let whole = self.panel(lo, hi, &mut f)?;
        let scale = whole.abs().max(f64::MIN_POSITIVE);
        let total = self.refine(lo, hi, whole, scale, 0, &mut f)?;
        Ok(total / (hi - lo))
    }

    fn panel<E>(
        &self,
        a: f64,
        b: f64,
        f: &mut impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(half * acc)
    }

    fn refine<E>(
        &self,
        a: f64,
        b: f64,
        whole: f64,
        scale: f64,
        depth: u32,
        f: &mut impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        let m = 0.5 * (a + b);
        let left = self.panel(a, m, f)?;
        let right = self.panel(m, b, f)?;
        if (left + right - whole).abs() <= PANEL_TOL * scale || depth >= MAX_DEPTH {
            return Ok(left + right);
        }
        Ok(self.refine(a, m, left, scale, depth + 1, f)?
            + self.refine(m, b, right, scale, depth + 1, f)?)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
