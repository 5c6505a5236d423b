//! Seeded random instances: Ginibre and Haar matrices, positive definite and
//! self-adjoint invertible matrices with prescribed conditioning.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::eigen::{conjugate_diag, HermEigen};
use super::matrix::{CMatrix, Complex};
use super::power::{PosDef, SpectralMatrix};

/// Counter-based generator identified by `(seed, stream)`. Substreams are
/// derived from the parent stream and an index, so instance `i` of a campaign
/// draws the same numbers no matter which thread evaluates it.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for sub-task `index`; does not advance `self`.
    pub fn substream(&self, index: u64) -> Rng {
        let stream = splitmix64(self.stream ^ splitmix64(index.wrapping_add(1)));
        Self::with_stream(self.seed, stream)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn sign(&mut self) -> f64 {
        if self.inner.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex {
        let re = self.normal();
        let im = self.normal();
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn unit_phase(&mut self) -> Complex {
        Complex::from_polar(1.0, self.uniform_in(0.0, std::f64::consts::TAU))
    }
}

/// I.i.d. standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

pub fn random_hermitian(n: usize, rng: &mut Rng) -> CMatrix {
    let g = ginibre(n, n, rng);
    g.hermitian_part()
}

/// Haar-distributed unitary: QR of a Ginibre matrix. Gram-Schmidt (with one
/// reorthogonalization pass) produces `R` with positive real diagonal, which is
/// the phase-corrected factorization, so `Q` needs no further adjustment.
pub fn haar_unitary(n: usize, rng: &mut Rng) -> CMatrix {
    assert!(n >= 1, "dimension must be positive");
    loop {
        let z = ginibre(n, n, rng);
        if let Some(q) = gram_schmidt(&z) {
            return q;
        }
    }
}

fn gram_schmidt(z: &CMatrix) -> Option<CMatrix> {
    let n = z.cols();
    let mut q = CMatrix::zeros(z.rows(), n);
    for j in 0..n {
        let mut v = z.column(j);
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let proj: Complex = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(&qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        let col: Vec<Complex> = v.iter().map(|c| c / norm).collect();
        q.set_column(j, &col);
    }
    Some(q)
}

fn log_uniform_spectrum(n: usize, cond: f64, rng: &mut Rng) -> Vec<f64> {
    let half = 0.5 * cond.ln();
    (0..n).map(|_| rng.uniform_in(-half, half).exp()).collect()
}

fn spectral_sample(n: usize, cond: f64, signs: Option<&[f64]>, rng: &mut Rng) -> SpectralMatrix {
    let u = haar_unitary(n, rng);
    let mut spectrum = log_uniform_spectrum(n, cond, rng);
    if let Some(signs) = signs {
        for (l, s) in spectrum.iter_mut().zip(signs) {
            *l *= s;
        }
    }
    let matrix = conjugate_diag(&u, &spectrum);
    SpectralMatrix {
        matrix,
        eigen: HermEigen::sorted(spectrum, u),
    }
}

/// Positive definite matrix `U diag(lambda) U^*` with Haar `U` and eigenvalues
/// log-uniform in `[cond^{-1/2}, cond^{1/2}]`. The sampled eigen-data is kept.
pub fn random_posdef(n: usize, cond: f64, rng: &mut Rng) -> PosDef {
    assert!(n >= 1 && cond >= 1.0, "need n >= 1 and cond >= 1");
    PosDef::from_spectral(spectral_sample(n, cond, None, rng))
        .expect("sampled spectrum is positive")
}

/// As [`random_posdef`] with an independent random sign on each eigenvalue.
/// The signs are drawn after the positive sample, so an all-positive sign
/// draw reproduces the positive definite matrix from the same generator state.
pub fn random_selfadjoint_invertible(n: usize, cond: f64, rng: &mut Rng) -> SpectralMatrix {
    assert!(n >= 1 && cond >= 1.0, "need n >= 1 and cond >= 1");
    let mut probe = rng.clone();
    let _ = spectral_sample(n, cond, None, &mut probe);
    let signs: Vec<f64> = (0..n).map(|_| probe.sign()).collect();
    let sample = spectral_sample(n, cond, Some(&signs), rng);
    *rng = probe;
    sample
}

/// Rank-one `e_i e_j^*` with random `(i, j)`.
pub fn random_rank_one(n: usize, rng: &mut Rng) -> CMatrix {
    let i = rng.index(n);
    let j = rng.index(n);
    CMatrix::unit(n, n, i, j)
}

/// Normal matrix `U D U^*` with Haar `U` and complex diagonal `D` whose
/// moduli are log-uniform in `[cond^{-1/2}, cond^{1/2}]` and phases uniform.
pub fn random_normal_invertible(n: usize, cond: f64, rng: &mut Rng) -> CMatrix {
    let u = haar_unitary(n, rng);
    let moduli = log_uniform_spectrum(n, cond, rng);
    let d: Vec<Complex> = moduli.iter().map(|&m| rng.unit_phase() * m).collect();
    &u * &CMatrix::from_diag(&d) * &u.adjoint()
}

/// Ginibre matrix, redrawn until comfortably invertible.
pub fn random_invertible(n: usize, rng: &mut Rng) -> CMatrix {
    loop {
        let g = ginibre(n, n, rng);
        let s = super::svd::singular_values(&g).expect("svd converges");
        if s[n - 1] > 1e-3 * s[0] {
            return g;
        }
    }
}

/// Unitary reflection `U diag(+-1) U^*` with at least one sign of each kind
/// when `n >= 2`.
pub fn random_reflection(n: usize, rng: &mut Rng) -> CMatrix {
    let u = haar_unitary(n, rng);
    let mut signs: Vec<f64> = (0..n).map(|_| rng.sign()).collect();
    if n >= 2 && signs.iter().all(|&s| s == signs[0]) {
        let flip = rng.index(n);
        signs[flip] = -signs[flip];
    }
    conjugate_diag(&u, &signs)
}

/// Test matrix number `i`: Ginibre, rank one, Hermitian and Haar unitary in
/// turn.
pub fn test_matrix(i: usize, n: usize, rng: &mut Rng) -> CMatrix {
    match i % 4 {
        0 => ginibre(n, n, rng),
        1 => random_rank_one(n, rng),
        2 => random_hermitian(n, rng),
        _ => haar_unitary(n, rng),
    }
}

pub fn nonzero_complex_scalar(rng: &mut Rng) -> Complex {
    let z = rng.complex_normal();
    if z.norm() < 1e-3 {
        Complex::new(1.0, 0.0)
    } else {
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigen::herm_eigen;

    #[test]
    fn haar_one_by_one_has_unit_modulus() {
        let u = haar_unitary(1, &mut Rng::new(9));
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_columns_orthonormal() {
        let u = haar_unitary(4, &mut Rng::new(1));
        let gram = u.adjoint() * &u;
        assert!((&gram - &CMatrix::identity(4)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn haar_is_deterministic() {
        let a = haar_unitary(5, &mut Rng::new(77));
        let b = haar_unitary(5, &mut Rng::new(77));
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let root = Rng::new(4);
        let mut a = root.substream(3);
        let mut b = root.substream(3);
        let mut c = root.substream(4);
        let xa: Vec<f64> = (0..4).map(|_| a.uniform()).collect();
        let xb: Vec<f64> = (0..4).map(|_| b.uniform()).collect();
        let xc: Vec<f64> = (0..4).map(|_| c.uniform()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn posdef_with_unit_condition_is_identity() {
        let p = random_posdef(4, 1.0, &mut Rng::new(2));
        assert!(p.matrix().rel_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn posdef_condition_bound() {
        let p = random_posdef(5, 100.0, &mut Rng::new(6));
        let e = herm_eigen(p.matrix()).unwrap();
        let ratio = e.max() / e.min();
        assert!((1.0..=100.0 + 1e-6).contains(&ratio));
        assert!(p.matrix().is_hermitian(1e-14));
    }

    #[test]
    fn posdef_deterministic() {
        let a = random_posdef(3, 10.0, &mut Rng::new(8));
        let b = random_posdef(3, 10.0, &mut Rng::new(8));
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn selfadjoint_invertible_bounds() {
        let cond = 50.0;
        for seed in 0..20 {
            let s = random_selfadjoint_invertible(3, cond, &mut Rng::new(seed));
            assert!(s.matrix.is_hermitian(1e-14));
            let e = herm_eigen(&s.matrix).unwrap();
            let min_abs = e
                .eigenvalues
                .iter()
                .map(|l| l.abs())
                .fold(f64::INFINITY, f64::min);
            assert!(min_abs >= cond.powf(-0.5) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn all_positive_signs_reproduce_posdef() {
        let mut hits = 0;
        for seed in 0..64 {
            let s = random_selfadjoint_invertible(2, 30.0, &mut Rng::new(seed));
            if s.eigen.eigenvalues.iter().all(|&l| l > 0.0) {
                let p = random_posdef(2, 30.0, &mut Rng::new(seed));
                assert_eq!(&s.matrix, p.matrix());
                hits += 1;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn selfadjoint_deterministic() {
        let a = random_selfadjoint_invertible(4, 10.0, &mut Rng::new(12));
        let b = random_selfadjoint_invertible(4, 10.0, &mut Rng::new(12));
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn reflection_squares_to_identity() {
        let r = random_reflection(4, &mut Rng::new(1));
        assert!(r.is_hermitian(1e-14));
        assert!((&r * &r).rel_diff(&CMatrix::identity(4)) < 1e-12);
    }
}
