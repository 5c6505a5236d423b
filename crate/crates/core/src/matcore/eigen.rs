//! Cyclic Jacobi eigensolver for Hermitian matrices.

use super::matrix::{CMatrix, Complex};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-12;

/// Spectral decomposition `A = Q diag(eigenvalues) Q^*` with eigenvalues
/// ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct HermEigen {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `Q diag(f(lambda_i)) Q^*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        conjugate_diag(&self.vectors, &weights)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|l| l)
    }

    /// Reorders so eigenvalues ascend; ties keep their current order.
    pub(crate) fn sorted(eigenvalues: Vec<f64>, vectors: CMatrix) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let sorted_vals = order.iter().map(|&i| eigenvalues[i]).collect();
        let mut sorted_vecs = CMatrix::zeros(vectors.rows(), n);
        for (dst, &src) in order.iter().enumerate() {
            sorted_vecs.set_column(dst, &vectors.column(src));
        }
        Self {
            eigenvalues: sorted_vals,
            vectors: sorted_vecs,
        }
    }
}

/// `Q diag(w) Q^*` for real weights; the result is exactly Hermitian.
pub(crate) fn conjugate_diag(q: &CMatrix, w: &[f64]) -> CMatrix {
    let n = q.rows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = Complex::new(0.0, 0.0);
            for (k, &wk) in w.iter().enumerate() {
                s += q[(i, k)] * wk * q[(j, k)].conj();
            }
            if i == j {
                s.im = 0.0;
            }
            out[(i, j)] = s;
            out[(j, i)] = s.conj();
        }
    }
    out
}

/// Complex Jacobi rotation annihilating the off-diagonal entry of the
/// Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]`.
///
/// Returns `(c, s, e)` for the unitary `J` with `J_pp = J_qq = c`,
/// `J_pq = s e`, `J_qp = -s conj(e)`; then `J^* A J` is diagonal on the pair.
pub(crate) fn jacobi_rotation(app: f64, aqq: f64, apq: Complex) -> (f64, f64, Complex) {
    let g = apq.norm();
    let e = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, e)
}

/// Right-multiplies columns `p`, `q` of `m` by the rotation.
pub(crate) fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, e: Complex) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * e.conj() * s;
        m[(k, q)] = mp * e * s + mq * c;
    }
}

fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, e: Complex) {
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * e * s;
        m[(q, k)] = mp * e.conj() * s + mq * c;
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn herm_eigen(a: &CMatrix) -> Result<HermEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(defect / scale.max(1.0)));
    }
    let n = a.rows();
    let mut work = a.hermitian_part();
    let mut q = CMatrix::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * scale;

    let mut converged = off_diagonal_norm(&work) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = work[(p, r)];
                if apq.norm() == 0.0 {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(work[(p, p)].re, work[(r, r)].re, apq);
                rotate_columns(&mut work, p, r, c, s, e);
                rotate_rows(&mut work, p, r, c, s, e);
                work[(p, r)] = Complex::new(0.0, 0.0);
                work[(r, p)] = Complex::new(0.0, 0.0);
                work[(p, p)].im = 0.0;
                work[(r, r)].im = 0.0;
                rotate_columns(&mut q, p, r, c, s, e);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&work) <= threshold;
    }
    let eigenvalues = (0..n).map(|i| work[(i, i)].re).collect();
    Ok(HermEigen::sorted(eigenvalues, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::random::{random_hermitian, Rng};

    #[test]
    fn diagonal_input_gives_permutation() {
        let e = herm_eigen(&CMatrix::from_diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        // columns are signed standard basis vectors
        for j in 0..3 {
            let nonzero = e
                .vectors
                .column(j)
                .iter()
                .filter(|z| z.norm() > 0.5)
                .count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn symmetric_two_by_two() {
        let e = herm_eigen(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let mut rng = Rng::new(11);
        let a = random_hermitian(6, &mut rng);
        let e = herm_eigen(&a).unwrap();
        assert!(e.reconstruct().rel_diff(&a) <= 1e-10);
        let qtq = e.vectors.adjoint() * &e.vectors;
        assert!((&qtq - &CMatrix::identity(6)).frobenius_norm() <= 1e-10);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(herm_eigen(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn deterministic() {
        let mut rng = Rng::new(3);
        let a = random_hermitian(5, &mut rng);
        assert_eq!(herm_eigen(&a).unwrap(), herm_eigen(&a).unwrap());
    }
}
