//! Singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! Column pairs of a working copy of `A` are rotated until mutually
//! orthogonal; the rotations use the same 2x2 Hermitian kernel as the
//! eigensolver applied to the Gram entries. Small singular values come out
//! with absolute accuracy of order `eps * ||A||`, which squaring into `A^*A`
//! would destroy.

use super::eigen::{jacobi_rotation, rotate_columns, MAX_SWEEPS};
use super::matrix::{CMatrix, Complex, ZERO};
use crate::error::{Error, Result};

const ORTHOGONALITY_TOL: f64 = 1e-15;
const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    /// Descending, nonnegative; `min(rows, cols)` entries.
    pub singular_values: Vec<f64>,
    /// `rows x rows` unitary.
    pub left: CMatrix,
    /// `cols x cols` unitary.
    pub right: CMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        let mut out = CMatrix::zeros(m, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let u = self.left[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += u * self.right[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn svd(a: &CMatrix) -> Result<SvdResult> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint())?;
        return Ok(SvdResult {
            singular_values: t.singular_values,
            left: t.right,
            right: t.left,
        });
    }
    svd_tall(a)
}

/// Singular values only, descending.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let tall = if a.rows() < a.cols() {
        a.adjoint()
    } else {
        a.clone()
    };
    let (w, _) = orthogonalize_columns(tall, false)?;
    let mut s: Vec<f64> = (0..w.cols()).map(|j| column_norm(&w, j)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

fn column_norm(w: &CMatrix, j: usize) -> f64 {
    (0..w.rows())
        .map(|i| w[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn orthogonalize_columns(mut w: CMatrix, track: bool) -> Result<(CMatrix, Option<CMatrix>)> {
    let n = w.cols();
    let m = w.rows();
    let mut v = track.then(|| CMatrix::identity(n));
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..m {
                    let (wp, wq) = (w[(k, p)], w[(k, q)]);
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.norm() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, e);
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, p, q, c, s, e);
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

fn svd_tall(a: &CMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let (w, v) = orthogonalize_columns(a.clone(), true)?;
    let v = v.expect("tracked");
    let norms: Vec<f64> = (0..n).map(|j| column_norm(&w, j)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let sigma_max = norms[order[0]];
    let mut singular_values = Vec::with_capacity(n);
    let mut right = CMatrix::zeros(n, n);
    let mut left = CMatrix::zeros(m, m);
    let mut have: Vec<Vec<Complex>> = Vec::with_capacity(m);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        right.set_column(dst, &v.column(src));
        if sigma > RANK_TOL * sigma_max && sigma > 0.0 {
            let u: Vec<Complex> = w.column(src).iter().map(|z| z / sigma).collect();
            left.set_column(dst, &u);
            have.push(u);
        } else {
            missing.push(dst);
        }
    }
    missing.extend(n..m);
    for dst in missing {
        let u = complete_basis(&have, m);
        left.set_column(dst, &u);
        have.push(u);
    }
    Ok(SvdResult {
        singular_values,
        left,
        right,
    })
}

/// A unit vector orthogonal to every vector in `basis` (Gram-Schmidt with
/// reorthogonalization, started from the standard basis vector that keeps
/// the largest residual; that residual is at least `1/sqrt(dim)`).
pub(crate) fn complete_basis(basis: &[Vec<Complex>], dim: usize) -> Vec<Complex> {
    let mut best: Option<(f64, Vec<Complex>)> = None;
    for seed in 0..dim {
        let mut x = vec![ZERO; dim];
        x[seed] = Complex::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis {
                let proj: Complex = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= proj * bi;
                }
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, x));
        }
    }
    match best {
        Some((norm, x)) if norm > 0.1 / (dim as f64).sqrt() => {
            x.into_iter().map(|z| z / norm).collect()
        }
        _ => unreachable!("basis already spans the space"),
    }
}

/// `|A| = (A^*A)^{1/2} = V diag(sigma) V^*`.
pub fn abs_matrix(a: &CMatrix) -> Result<CMatrix> {
    let d = svd(a)?;
    let n = a.cols();
    let mut w = vec![0.0; n];
    w[..d.singular_values.len()].copy_from_slice(&d.singular_values);
    Ok(super::eigen::conjugate_diag(&d.right, &w))
}

/// `|A^*| = (AA^*)^{1/2} = U diag(sigma) U^*`.
pub fn abs_adjoint_matrix(a: &CMatrix) -> Result<CMatrix> {
    abs_matrix(&a.adjoint())
}
