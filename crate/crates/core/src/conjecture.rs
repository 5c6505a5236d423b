//! Counterexample search for positive semidefiniteness of
//! `C_ij = l_i l_j / (l_i^2 + l_j^2 + k l_i l_j)` under the pairwise
//! constraint `|l_i/l_j + l_j/l_i + k| >= k + 2`, and a sampled check of the
//! norm inequality that positivity of `C` would imply.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::DEFAULT_TOL;
use crate::classes::{pair_value, phi, SPECTRAL_TOL};
use crate::error::{Error, Result};
use crate::matcore::{herm_eigen, test_matrix, CMatrix, Complex, Rng};
use crate::norms::{norm, NormKind};

pub const PSD_TOL: f64 = 1e-10;
pub const MAX_REJECTIONS: usize = 10_000;
pub const LAMBDA_RANGE: (f64, f64) = (1e-2, 1e2);
const DENOMINATOR_TOL: f64 = 1e-12;
/// Instances evaluated between flushes of the violations stream.
const CHUNK: usize = 1024;

fn check_k(k: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&k) {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

fn check_nonzero(lambdas: &[f64]) -> Result<()> {
    match lambdas.iter().position(|&l| l == 0.0 || !l.is_finite()) {
        Some(i) => Err(Error::ZeroLambda(i)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintResult {
    pub ok: bool,
    /// `(i, j)` with `i < j` (or `(0, 0)` for a single value) minimizing `|l_i/l_j + l_j/l_i + k|`.
    pub worst_pair: (usize, usize),
    pub worst_value: f64,
}

pub fn constraint_check(lambdas: &[f64], k: f64) -> Result<ConstraintResult> {
    check_k(k)?;
    check_nonzero(lambdas)?;
    if lambdas.is_empty() {
        return Err(Error::InvalidParams("no lambdas".into()));
    }
    let mut worst = ((0, 0), pair_value(lambdas[0], lambdas[0], k));
    if lambdas.len() > 1 {
        worst.1 = f64::INFINITY;
    }
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            let v = pair_value(lambdas[i], lambdas[j], k);
            if v < worst.1 {
                worst = ((i, j), v);
            }
        }
    }
    Ok(ConstraintResult {
        ok: worst.1 >= k + 2.0 - SPECTRAL_TOL,
        worst_pair: worst.0,
        worst_value: worst.1,
    })
}

/// The real symmetric matrix `C`. Its diagonal is set to `1/(2+k)` exactly.
pub fn build_conj_matrix(lambdas: &[f64], k: f64) -> Result<CMatrix> {
    check_nonzero(lambdas)?;
    let n = lambdas.len();
    let mut c = CMatrix::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = Complex::new(1.0 / (2.0 + k), 0.0);
        for j in i + 1..n {
            let (a, b) = (lambdas[i], lambdas[j]);
            let den = a * a + b * b + k * a * b;
            if den.abs() <= DENOMINATOR_TOL * (a * a + b * b) {
                return Err(Error::DegenerateDenominator(i, j));
            }
            let v = Complex::new(a * b / den, 0.0);
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    Ok(c)
}

/// Hermitian analogue `l_i conj(l_j) / (|l_i|^2 + |l_j|^2 + k l_i conj(l_j))`
/// for complex `l`. Experimental; not part of the real search.
pub fn build_conj_matrix_complex(lambdas: &[Complex], k: f64) -> Result<CMatrix> {
    if let Some(i) = lambdas.iter().position(|l| l.norm() == 0.0) {
        return Err(Error::ZeroLambda(i));
    }
    let n = lambdas.len();
    let mut c = CMatrix::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = Complex::new(1.0 / (2.0 + k), 0.0);
        for j in i + 1..n {
            let (a, b) = (lambdas[i], lambdas[j]);
            let cross = a * b.conj();
            let mods = a.norm_sqr() + b.norm_sqr();
            let den = mods + cross * k;
            if den.norm() <= DENOMINATOR_TOL * mods {
                return Err(Error::DegenerateDenominator(i, j));
            }
            let v = cross / den;
            c[(i, j)] = v;
            c[(j, i)] = v.conj();
        }
    }
    Ok(c)
}

/// `(min_eig, psd)` with `psd` iff `min_eig >= -1e-10 max(1, max_eig)`.
pub fn psd_check(c: &CMatrix) -> Result<(f64, bool)> {
    let e = herm_eigen(c)?;
    let (lo, hi) = (e.min(), e.max());
    Ok((lo, lo >= -PSD_TOL * hi.max(1.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureInstance {
    pub k: f64,
    pub lambdas: Vec<f64>,
    pub constraint_ok: bool,
    pub matrix: CMatrix,
    pub min_eig: f64,
    pub psd: bool,
}

impl ConjectureInstance {
    pub fn evaluate(lambdas: &[f64], k: f64) -> Result<Self> {
        let constraint = constraint_check(lambdas, k)?;
        let matrix = build_conj_matrix(lambdas, k)?;
        let (min_eig, psd) = psd_check(&matrix)?;
        Ok(Self {
            k,
            lambdas: lambdas.to_vec(),
            constraint_ok: constraint.ok,
            matrix,
            min_eig,
            psd,
        })
    }
}

/// One persisted counterexample candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: f64,
    pub lambdas: Vec<f64>,
    pub min_eig: f64,
    pub seed: u64,
    pub instance: u64,
}

impl Violation {
    /// Recomputes the instance from the stored `lambdas` and `k`.
    pub fn replay(&self) -> Result<ConjectureInstance> {
        ConjectureInstance::evaluate(&self.lambdas, self.k)
    }
}

fn log_uniform(rng: &mut Rng) -> f64 {
    let (lo, hi) = LAMBDA_RANGE;
    rng.uniform_in(lo.ln(), hi.ln()).exp()
}

/// Draws `n` real values with log-uniform magnitudes and random signs until
/// the constraint holds. Returns the accepted draw and the number of rejected
/// draws before it.
pub fn sample_constrained(n: usize, k: f64, rng: &mut Rng) -> Result<(Vec<f64>, usize)> {
    check_k(k)?;
    for rejected in 0..MAX_REJECTIONS {
        let lambdas: Vec<f64> = (0..n).map(|_| rng.sign() * log_uniform(rng)).collect();
        if constraint_check(&lambdas, k)?.ok {
            return Ok((lambdas, rejected));
        }
    }
    Err(Error::SamplerExhausted(MAX_REJECTIONS))
}

/// Complex analogue of [`sample_constrained`] with uniform phases.
pub fn sample_constrained_complex(
    n: usize,
    k: f64,
    rng: &mut Rng,
) -> Result<(Vec<Complex>, usize)> {
    check_k(k)?;
    for rejected in 0..MAX_REJECTIONS {
        let lambdas: Vec<Complex> = (0..n)
            .map(|_| rng.unit_phase() * log_uniform(rng))
            .collect();
        let ok = lambdas.iter().all(|a| {
            lambdas
                .iter()
                .all(|b| (a / b + b / a + k).norm() >= k + 2.0 - SPECTRAL_TOL)
        });
        if ok {
            return Ok((lambdas, rejected));
        }
    }
    Err(Error::SamplerExhausted(MAX_REJECTIONS))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub k_values: Vec<f64>,
    pub count: usize,
    pub seed: u64,
    /// Search over complex `l` with the Hermitian analogue of `C`.
    #[serde(default)]
    pub complex: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecadeBin {
    /// Bin `[10^decade, 10^(decade+1))`; the lowest bin also holds zero.
    pub decade: i32,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub n: usize,
    pub k: f64,
    pub seed: u64,
    pub accepted: usize,
    pub rejected_draws: usize,
    pub rejection_rate: f64,
    pub min_min_eig: f64,
    pub violations: usize,
    /// Instances with `min_eig < 0`, violation or not.
    pub negative: usize,
    pub histogram: Vec<DecadeBin>,
}

const LOWEST_DECADE: i32 = -16;

fn decade_of(x: f64) -> i32 {
    if x <= 0.0 {
        return LOWEST_DECADE;
    }
    (x.log10().floor() as i32).max(LOWEST_DECADE)
}

struct Outcome {
    lambdas: Vec<f64>,
    rejected: usize,
    min_eig: f64,
    psd: bool,
}

fn run_instance(cfg: &SearchConfig, k: f64, rng: &mut Rng) -> Result<Outcome> {
    if cfg.complex {
        let (lambdas, rejected) = sample_constrained_complex(cfg.n, k, rng)?;
        let (min_eig, psd) = psd_check(&build_conj_matrix_complex(&lambdas, k)?)?;
        // only moduli and phases are informative; persist moduli with the sign of the real part
        let lambdas = lambdas.iter().map(|l| l.norm().copysign(l.re)).collect();
        return Ok(Outcome {
            lambdas,
            rejected,
            min_eig,
            psd,
        });
    }
    let (lambdas, rejected) = sample_constrained(cfg.n, k, rng)?;
    let inst = ConjectureInstance::evaluate(&lambdas, k)?;
    Ok(Outcome {
        lambdas,
        rejected,
        min_eig: inst.min_eig,
        psd: inst.psd,
    })
}

/// Runs `count` constrained instances for every `k`. Instance `i` of the
/// `j`-th `k` draws from substream `i` of substream `j` of the seed, so the
/// result does not depend on the number of worker threads. Violations are
/// written to `violations` as JSON lines, chunk by chunk, before the summary
/// is returned.
pub fn conjecture_search<W: Write>(
    cfg: &SearchConfig,
    violations: &mut W,
) -> Result<Vec<SearchSummary>> {
    if cfg.n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let root = Rng::new(cfg.seed);
    let mut summaries = Vec::with_capacity(cfg.k_values.len());
    for (j, &k) in cfg.k_values.iter().enumerate() {
        check_k(k)?;
        let base = root.substream(j as u64);
        let mut summary = SearchSummary {
            n: cfg.n,
            k,
            seed: cfg.seed,
            accepted: 0,
            rejected_draws: 0,
            rejection_rate: 0.0,
            min_min_eig: f64::INFINITY,
            violations: 0,
            negative: 0,
            histogram: Vec::new(),
        };
        let mut bins = std::collections::BTreeMap::<i32, usize>::new();
        for start in (0..cfg.count).step_by(CHUNK) {
            let end = (start + CHUNK).min(cfg.count);
            let outcomes: Vec<Result<Outcome>> = (start..end)
                .into_par_iter()
                .map(|i| run_instance(cfg, k, &mut base.substream(i as u64)))
                .collect();
            for (i, out) in (start..end).zip(outcomes) {
                let out = out?;
                summary.accepted += 1;
                summary.rejected_draws += out.rejected;
                summary.min_min_eig = summary.min_min_eig.min(out.min_eig);
                if out.min_eig < 0.0 {
                    summary.negative += 1;
                }
                *bins.entry(decade_of(out.min_eig)).or_default() += 1;
                if !out.psd {
                    summary.violations += 1;
                    let v = Violation {
                        k,
                        lambdas: out.lambdas,
                        min_eig: out.min_eig,
                        seed: cfg.seed,
                        instance: i as u64,
                    };
                    serde_json::to_writer(&mut *violations, &v)?;
                    violations.write_all(b"\n")?;
                }
            }
            violations.flush()?;
        }
        let draws = summary.accepted + summary.rejected_draws;
        summary.rejection_rate = if draws == 0 {
            0.0
        } else {
            summary.rejected_draws as f64 / draws as f64
        };
        summary.histogram = bins
            .into_iter()
            .map(|(decade, count)| DecadeBin { decade, count })
            .collect();
        summaries.push(summary);
    }
    Ok(summaries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionalVerdict {
    /// `C` is PSD and the norm inequality held on every sample.
    Consistent,
    /// `C` is PSD but some sample violates the inequality, which positivity
    /// rules out.
    ImplementationAnomaly,
    /// `C` is not PSD and every sample satisfied the inequality.
    Inconclusive,
    /// `C` is not PSD and some sample violates the inequality.
    NonPsdViolated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalReport {
    pub k: f64,
    pub lambdas: Vec<f64>,
    pub min_eig: f64,
    pub psd: bool,
    pub samples: usize,
    /// Least `(||phi(X)|| - (k+2)||X||) / max(1, ||phi(X)||, (k+2)||X||)`.
    pub min_relative_margin: f64,
    pub verdict: ConditionalVerdict,
}

/// With `S = diag(lambdas)`, checks `||phi(S, k, X)|| >= (k+2)||X||` in the
/// operator norm on the identity and `samples` random `X`, and compares the
/// outcome with positivity of `C`.
pub fn conditional_theorem_check(
    lambdas: &[f64],
    k: f64,
    samples: usize,
    rng: &mut Rng,
) -> Result<ConditionalReport> {
    let constraint = constraint_check(lambdas, k)?;
    if !constraint.ok {
        return Err(Error::InvalidParams(format!(
            "constraint fails at pair {:?}",
            constraint.worst_pair
        )));
    }
    let inst = ConjectureInstance::evaluate(lambdas, k)?;
    let n = lambdas.len();
    let s = CMatrix::from_diag_real(lambdas);
    let mut worst = f64::INFINITY;
    for i in 0..=samples {
        let x = if i == 0 {
            CMatrix::identity(n)
        } else {
            test_matrix(i - 1, n, rng)
        };
        let lhs = norm(&phi(&s, k, &x)?, NormKind::Operator);
        let rhs = (k + 2.0) * norm(&x, NormKind::Operator);
        worst = worst.min((lhs - rhs) / lhs.max(rhs).max(1.0));
    }
    let holds = worst >= -DEFAULT_TOL;
    let verdict = match (inst.psd, holds) {
        (true, true) => ConditionalVerdict::Consistent,
        (true, false) => ConditionalVerdict::ImplementationAnomaly,
        (false, true) => ConditionalVerdict::Inconclusive,
        (false, false) => ConditionalVerdict::NonPsdViolated,
    };
    Ok(ConditionalReport {
        k,
        lambdas: lambdas.to_vec(),
        min_eig: inst.min_eig,
        psd: inst.psd,
        samples: samples + 1,
        min_relative_margin: worst,
        verdict,
    })
}
