//! Campaign configuration, suite execution and report files.
//!
//! Instance `i` of a run draws all of its matrices from substream `i` of the
//! campaign seed and records are written in instance order, so output does
//! not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainReport, Relation};
use crate::classes::{
    characterization_check, dk_ratio_minimize, sample_class, schur_rep_residual,
    schur_theorem_bound_check, CharacterizationForm, DkProbeResult,
};
use crate::conjecture::{conjecture_search, SearchConfig, SearchSummary};
use crate::cpr::{
    cor23_check, cor24_check, cpr_check, cpr_star_check, cpr_two_sided_check, final_cor_check,
    mos1_check, mos2_check, zhan_chain, zhan_check, ZhanParams,
};
use crate::error::{Error, Result};
use crate::heinz::{agm_check, heinz_check, kittaneh_chain};
use crate::matcore::{
    ginibre, random_invertible, random_posdef, random_selfadjoint_invertible, test_matrix, CMatrix,
    Rng,
};
use crate::norms::{parse_norm_list, NormKind};

/// Heinz parameters every `heinz` instance is checked at.
pub const HEINZ_ALPHAS: [f64; 7] = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
/// Residual bound for the Schur product representation.
pub const SCHUR_REP_TOL: f64 = 1e-10;
pub const MAX_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Heinz,
    Agm,
    Cpr,
    Zhan,
    Cor23,
    Cor24,
    /// The direct-sum variants.
    T2,
    Finalcor,
    Characterizations,
    Dk,
    Conjecture,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Heinz,
        Suite::Agm,
        Suite::Cpr,
        Suite::Zhan,
        Suite::Cor23,
        Suite::Cor24,
        Suite::T2,
        Suite::Finalcor,
        Suite::Characterizations,
        Suite::Dk,
        Suite::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Heinz => "heinz",
            Suite::Agm => "agm",
            Suite::Cpr => "cpr",
            Suite::Zhan => "zhan",
            Suite::Cor23 => "cor23",
            Suite::Cor24 => "cor24",
            Suite::T2 => "t2",
            Suite::Finalcor => "finalcor",
            Suite::Characterizations => "characterizations",
            Suite::Dk => "dk",
            Suite::Conjecture => "conjecture",
        }
    }

    /// Probe suites report findings; their failures do not affect the exit
    /// status.
    pub fn is_probe(self) -> bool {
        matches!(self, Suite::Dk | Suite::Conjecture)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown suite '{s}'")))
    }
}

/// Every setting as optional, in the shape of a JSON config file. Keys are
/// the command-line flag names without the leading dashes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub suite: Option<String>,
    pub dim: Option<usize>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub norms: Option<String>,
    pub tol: Option<f64>,
    pub cond: Option<f64>,
    pub t: Option<Vec<f64>>,
    pub r: Option<Vec<f64>>,
    pub k: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub eigs: Option<Vec<f64>>,
    pub starts: Option<usize>,
    pub iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub no_timing: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            suite: over.suite.or(self.suite),
            dim: over.dim.or(self.dim),
            count: over.count.or(self.count),
            seed: over.seed.or(self.seed),
            norms: over.norms.or(self.norms),
            tol: over.tol.or(self.tol),
            cond: over.cond.or(self.cond),
            t: over.t.or(self.t),
            r: over.r.or(self.r),
            k: over.k.or(self.k),
            p: over.p.or(self.p),
            n: over.n.or(self.n),
            eigs: over.eigs.or(self.eigs),
            starts: over.starts.or(self.starts),
            iters: over.iters.or(self.iters),
            out: over.out.or(self.out),
            no_timing: over.no_timing.or(self.no_timing),
        }
    }

    /// Fills defaults and validates. `suite` is required.
    pub fn resolve(self) -> Result<CampaignConfig> {
        let suite: Suite = self
            .suite
            .as_deref()
            .ok_or_else(|| Error::ConfigInvalid("no suite given".into()))?
            .parse()?;
        let norms = parse_norm_list(
            self.norms
                .as_deref()
                .unwrap_or("op,tr,fro,kyfan:2,schatten:3"),
        )
        .map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let cfg = CampaignConfig {
            suite,
            dim: self.dim.unwrap_or(4),
            count: self.count.unwrap_or(100),
            seed: self.seed.unwrap_or(0),
            norms,
            tol: self.tol.unwrap_or(crate::chain::DEFAULT_TOL),
            cond: self.cond.unwrap_or(100.0),
            t_values: self.t.unwrap_or_else(|| vec![-1.0, 0.0, 0.5, 1.0, 2.0]),
            r_values: self.r.unwrap_or_else(|| vec![0.5, 0.75, 1.0, 1.25, 1.5]),
            k_values: self.k.unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0]),
            p_values: self.p.unwrap_or_else(|| vec![1.0, 2.0, 3.0]),
            n: self.n.unwrap_or(3),
            eigs: self.eigs,
            starts: self.starts.unwrap_or(64),
            iters: self.iters.unwrap_or(500),
            out: self.out,
            timing: !self.no_timing.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub suite: Suite,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub norms: Vec<NormKind>,
    pub tol: f64,
    pub cond: f64,
    pub t_values: Vec<f64>,
    pub r_values: Vec<f64>,
    pub k_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Size of the conjecture matrices.
    pub n: usize,
    /// Explicit spectrum for the D_k probe.
    pub eigs: Option<Vec<f64>>,
    pub starts: usize,
    pub iters: usize,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::ConfigInvalid(msg.into())
}

fn nonempty(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(invalid(format!("--{name} list is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("--{name} contains a non-finite value")));
    }
    Ok(())
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(invalid(format!("dim = {} outside 1..={MAX_DIM}", self.dim)));
        }
        if self.suite == Suite::Dk && self.dim < 2 {
            return Err(invalid("the dk suite needs dim >= 2"));
        }
        if self.count == 0 {
            return Err(invalid("count must be positive"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(invalid(format!(
                "tol = {} must be finite and >= 0",
                self.tol
            )));
        }
        if !(self.cond.is_finite() && self.cond >= 1.0) {
            return Err(invalid(format!("cond = {} must be >= 1", self.cond)));
        }
        if self.norms.is_empty() {
            return Err(invalid("--norms list is empty"));
        }
        match self.suite {
            Suite::Zhan | Suite::Cor23 | Suite::Cor24 => {
                nonempty("t", &self.t_values)?;
                if let Some(t) = self.t_values.iter().find(|&&t| t > 2.0) {
                    return Err(invalid(format!("t = {t} violates t <= 2")));
                }
                if self.suite == Suite::Zhan {
                    nonempty("r", &self.r_values)?;
                    if let Some(r) = self.r_values.iter().find(|r| !(0.5..=1.5).contains(*r)) {
                        return Err(invalid(format!("r = {r} outside [0.5, 1.5]")));
                    }
                }
            }
            Suite::Finalcor => {
                nonempty("p", &self.p_values)?;
                if let Some(p) = self.p_values.iter().find(|&&p| p < 1.0) {
                    return Err(invalid(format!("p = {p} must be >= 1")));
                }
            }
            Suite::Dk => nonempty("k", &self.k_values)?,
            Suite::Conjecture => {
                nonempty("k", &self.k_values)?;
                if let Some(k) = self.k_values.iter().find(|k| !(0.0..=2.0).contains(*k)) {
                    return Err(invalid(format!("k = {k} outside [0, 2]")));
                }
                if !(1..=MAX_DIM).contains(&self.n) {
                    return Err(invalid(format!("n = {} outside 1..={MAX_DIM}", self.n)));
                }
            }
            _ => {}
        }
        if let Some(eigs) = &self.eigs {
            nonempty("eigs", eigs)?;
            if eigs.contains(&0.0) {
                return Err(invalid("--eigs must be nonzero"));
            }
        }
        Ok(())
    }
}

/// One checked relation on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub suite: String,
    pub check: String,
    pub instance: usize,
    pub params: BTreeMap<String, f64>,
    pub norm: String,
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub margins: Vec<f64>,
    pub pass: bool,
    pub min_rel_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub wall_time: f64,
}

struct Recorder<'a> {
    cfg: &'a CampaignConfig,
    instance: usize,
    records: Vec<ResultRecord>,
}

impl<'a> Recorder<'a> {
    fn new(cfg: &'a CampaignConfig, instance: usize) -> Self {
        Self {
            cfg,
            instance,
            records: Vec::new(),
        }
    }

    /// Records a report; non-increasing chains are re-judged at the campaign
    /// tolerance.
    fn push(
        &mut self,
        check: &str,
        params: &[(&str, f64)],
        norm: &str,
        f: impl FnOnce() -> Result<ChainReport>,
    ) -> Result<()> {
        let tol = self.cfg.tol;
        self.push_with(check, params, norm, None, || {
            let r = f()?;
            Ok(match r.relation {
                Relation::NonIncreasing => r.with_tol(tol),
                Relation::Equal => r,
            })
        })
    }

    /// Records a report as computed, with its own tolerance.
    fn push_with(
        &mut self,
        check: &str,
        params: &[(&str, f64)],
        norm: &str,
        verdict: Option<String>,
        f: impl FnOnce() -> Result<ChainReport>,
    ) -> Result<()> {
        let start = Instant::now();
        let report = f()?;
        let wall_time = if self.cfg.timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        self.records.push(ResultRecord {
            suite: self.cfg.suite.name().into(),
            check: check.into(),
            instance: self.instance,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            norm: norm.into(),
            pass: report.all_pass(),
            min_rel_margin: report.min_relative_margin(),
            labels: report.labels,
            values: report.values,
            margins: report.margins,
            verdict,
            wall_time,
        });
        Ok(())
    }
}

fn run_instance(cfg: &CampaignConfig, i: usize) -> Result<Vec<ResultRecord>> {
    let mut rng = Rng::new(cfg.seed).substream(i as u64);
    let n = cfg.dim;
    let x = test_matrix(i, n, &mut rng);
    let mut rec = Recorder::new(cfg, i);
    let norms: Vec<(NormKind, String)> = cfg.norms.iter().map(|k| (*k, k.to_string())).collect();
    match cfg.suite {
        Suite::Heinz => {
            let a = random_posdef(n, cfg.cond, &mut rng);
            let b = random_posdef(n, cfg.cond, &mut rng);
            for alpha in HEINZ_ALPHAS {
                for (kind, name) in &norms {
                    let ps = [("alpha", alpha)];
                    rec.push("heinz", &ps, name, || heinz_check(&a, &b, &x, alpha, *kind))?;
                    rec.push("kittaneh", &ps, name, || {
                        kittaneh_chain(&a, &b, &x, alpha, *kind)
                    })?;
                }
            }
        }
        Suite::Agm => {
            let a = ginibre(n, n, &mut rng);
            let b = ginibre(n, n, &mut rng);
            for (kind, name) in &norms {
                rec.push("agm", &[], name, || agm_check(&a, &b, &x, *kind))?;
            }
        }
        Suite::Cpr => {
            let s = random_selfadjoint_invertible(n, cfg.cond, &mut rng).matrix;
            let t = random_selfadjoint_invertible(n, cfg.cond, &mut rng).matrix;
            let g = random_invertible(n, &mut rng);
            for (kind, name) in &norms {
                rec.push("cpr", &[], name, || cpr_check(&s, &x, *kind))?;
                rec.push("cpr_two_sided", &[], name, || {
                    cpr_two_sided_check(&s, &t, &x, *kind)
                })?;
                rec.push("cpr_star", &[], name, || cpr_star_check(&g, &x, *kind))?;
            }
        }
        Suite::Zhan => {
            let a = random_posdef(n, cfg.cond, &mut rng);
            let b = random_posdef(n, cfg.cond, &mut rng);
            for &t in &cfg.t_values {
                for &r in &cfg.r_values {
                    let p = ZhanParams::new(t, r)?;
                    let ps = [("r", r), ("t", t)];
                    for (kind, name) in &norms {
                        rec.push("zhan", &ps, name, || zhan_check(&a, &b, &x, p, *kind))?;
                        rec.push("zhan_chain", &ps, name, || zhan_chain(&a, &b, &x, p, *kind))?;
                    }
                }
            }
        }
        Suite::Cor23 => {
            let a = ginibre(n, n, &mut rng);
            let b = ginibre(n, n, &mut rng);
            for &t in &cfg.t_values {
                for (kind, name) in &norms {
                    rec.push("cor23", &[("t", t)], name, || {
                        cor23_check(&a, &b, &x, t, *kind)
                    })?;
                }
            }
        }
        Suite::Cor24 => {
            let p = random_posdef(n, cfg.cond, &mut rng);
            let q = random_posdef(n, cfg.cond, &mut rng);
            for &t in &cfg.t_values {
                for (kind, name) in &norms {
                    rec.push("cor24", &[("t", t)], name, || {
                        cor24_check(&p, &q, &x, t, *kind)
                    })?;
                }
            }
        }
        Suite::T2 => {
            let s = random_invertible(n, &mut rng);
            let y = test_matrix(i + 1, n, &mut rng);
            for (kind, name) in &norms {
                rec.push("mos1", &[], name, || mos1_check(&s, &x, &y, *kind))?;
                rec.push("mos2", &[], name, || mos2_check(&s, &x, &y, *kind))?;
            }
        }
        Suite::Finalcor => {
            let s = random_invertible(n, &mut rng);
            for &p in &cfg.p_values {
                let r = final_cor_check(&s, &x, p)?;
                let ps = [("p", p)];
                rec.push("finalcor_max", &ps, "op", || Ok(r.operator))?;
                let sp = NormKind::Schatten(p).to_string();
                rec.push("finalcor_sum", &ps, &sp, || Ok(r.schatten))?;
            }
        }
        Suite::Characterizations => {
            for form in CharacterizationForm::ALL {
                let Some(class) = form.characterized_class() else {
                    continue;
                };
                let s = sample_class(class, n, cfg.cond, &mut rng);
                for (kind, name) in &norms {
                    rec.push(form.id(), &[], name, || {
                        characterization_check(&s, &x, form, *kind)
                    })?;
                }
            }
        }
        Suite::Dk => run_dk_instance(cfg, i, &x, &mut rng, &mut rec, &norms)?,
        Suite::Conjecture => unreachable!("conjecture runs through run_conjecture"),
    }
    Ok(rec.records)
}

fn probe_report(r: &DkProbeResult) -> ChainReport {
    ChainReport::new(vec![("best ratio", r.best_ratio), ("k+2", r.k + 2.0)], 0.0)
}

fn run_dk_instance(
    cfg: &CampaignConfig,
    i: usize,
    x: &CMatrix,
    rng: &mut Rng,
    rec: &mut Recorder<'_>,
    norms: &[(NormKind, String)],
) -> Result<()> {
    let n = cfg.dim;
    let s = match &cfg.eigs {
        Some(e) => CMatrix::from_diag_real(e),
        None => random_selfadjoint_invertible(n, cfg.cond, rng).matrix,
    };
    let x = if s.rows() == n {
        x.clone()
    } else {
        test_matrix(i, s.rows(), rng)
    };
    let probe_rng = rng.substream(0);
    for (j, &k) in cfg.k_values.iter().enumerate() {
        let ps = [("k", k)];
        let r = dk_ratio_minimize(&s, k, cfg.starts, cfg.iters, &probe_rng.substream(j as u64))?;
        let verdict = serde_json::to_value(r.verdict)?.as_str().map(String::from);
        rec.push_with("dk_probe", &ps, "op", verdict, || Ok(probe_report(&r)))?;
        rec.push_with("schur_rep", &ps, "fro", None, || {
            let res = schur_rep_residual(&s, k, &x)?;
            Ok(ChainReport::new(
                vec![("bound", SCHUR_REP_TOL), ("residual", res)],
                0.0,
            ))
        })?;
    }
    let g = ginibre(s.rows(), s.rows(), rng);
    let gram = (&g * &g.adjoint()).hermitian_part();
    rec.push("schur_bound", &[], "op", || {
        schur_theorem_bound_check(&gram, &x)
    })?;

    // complex multiples of positive definite matrices lie in every D_k, k in [0, 2]
    let c = crate::matcore::nonzero_complex_scalar(rng);
    let p = random_posdef(s.rows(), cfg.cond, rng)
        .matrix()
        .scale_complex(c);
    for &k in cfg.k_values.iter().filter(|k| (0.0..=2.0).contains(*k)) {
        for (kind, name) in norms {
            rec.push("phi_posdef", &[("k", k)], name, || {
                let lhs = crate::norms::norm(&crate::classes::phi(&p, k, &x)?, *kind);
                let rhs = (k + 2.0) * crate::norms::norm(&x, *kind);
                Ok(ChainReport::new(
                    vec![("|||phi(X)|||", lhs), ("(k+2)|||X|||", rhs)],
                    cfg.tol,
                ))
            })?;
        }
    }
    Ok(())
}

/// Runs every instance of a verification suite in parallel and returns the
/// records in instance order.
pub fn run_verify(cfg: &CampaignConfig) -> Result<Vec<ResultRecord>> {
    if cfg.suite == Suite::Conjecture {
        return Err(invalid("the conjecture suite has no verification records"));
    }
    let per_instance: Vec<Result<Vec<ResultRecord>>> = (0..cfg.count)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect();
    let mut out = Vec::new();
    for r in per_instance {
        out.extend(r?);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[ResultRecord], w: &mut W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut *w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ResultRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

/// One row of the CSV summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub suite: String,
    pub norm: String,
    pub params: String,
    pub count: usize,
    pub pass: usize,
    pub fail: usize,
    pub min_margin: Option<f64>,
    pub min_eig: Option<f64>,
}

pub const CSV_HEADER: &str = "suite,norm,param-tuple,count,pass,fail,min_margin,min_eig";

impl SummaryRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.suite,
            self.norm,
            self.params,
            self.count,
            self.pass,
            self.fail,
            opt(self.min_margin),
            opt(self.min_eig)
        )
    }
}

fn param_tuple(check: &str, params: &BTreeMap<String, f64>) -> String {
    let mut s = format!("check={check}");
    for (k, v) in params {
        s.push_str(&format!(";{k}={v}"));
    }
    s
}

/// Groups records by suite, norm, check and parameters. `min_margin` is the
/// least relative margin in the group.
pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, String), SummaryRow> = BTreeMap::new();
    for r in records {
        let params = param_tuple(&r.check, &r.params);
        let key = (r.suite.clone(), params.clone(), r.norm.clone());
        let row = groups.entry(key).or_insert_with(|| SummaryRow {
            suite: r.suite.clone(),
            norm: r.norm.clone(),
            params,
            count: 0,
            pass: 0,
            fail: 0,
            min_margin: None,
            min_eig: None,
        });
        row.count += 1;
        if r.pass {
            row.pass += 1;
        } else {
            row.fail += 1;
        }
        let m = r.min_rel_margin;
        row.min_margin = Some(row.min_margin.map_or(m, |x| x.min(m)));
    }
    groups.into_values().collect()
}

pub fn conjecture_rows(summaries: &[SearchSummary]) -> Vec<SummaryRow> {
    summaries
        .iter()
        .map(|s| SummaryRow {
            suite: "conjecture".into(),
            norm: String::new(),
            params: format!("n={};k={}", s.n, s.k),
            count: s.accepted,
            pass: s.accepted - s.violations,
            fail: s.violations,
            min_margin: None,
            min_eig: Some(s.min_min_eig),
        })
        .collect()
}

pub fn write_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    w.flush()?;
    Ok(())
}

/// `<out>.summary.csv`
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

/// Runs the conjecture search for every `k`, writing violations to `out` (or
/// discarding them) and the summary CSV next to it.
/// `complex` switches to the experimental complex-valued search.
pub fn run_conjecture(cfg: &CampaignConfig, complex: bool) -> Result<Vec<SearchSummary>> {
    let search = SearchConfig {
        n: cfg.n,
        k_values: cfg.k_values.clone(),
        count: cfg.count,
        seed: cfg.seed,
        complex,
    };
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let summaries = conjecture_search(&search, &mut w)?;
            write_summary_csv(&conjecture_rows(&summaries), &summary_path(path))?;
            Ok(summaries)
        }
        None => conjecture_search(&search, &mut std::io::sink()),
    }
}

/// Probe outcome without the witness matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub eigenvalues: Vec<f64>,
    pub k: f64,
    pub spectral_ok: bool,
    pub best_ratio: f64,
    pub starts_used: usize,
    pub verdict: crate::classes::DkVerdict,
}

/// Probes `D_k` membership of `diag(eigs)`, or of a random self-adjoint
/// matrix of size `dim` when no spectrum is given, for every `k`.
pub fn dk_probe(cfg: &CampaignConfig) -> Result<Vec<ProbeSummary>> {
    let root = Rng::new(cfg.seed);
    let s = match &cfg.eigs {
        Some(e) => CMatrix::from_diag_real(e),
        None => random_selfadjoint_invertible(cfg.dim, cfg.cond, &mut root.substream(0)).matrix,
    };
    let probes = root.substream(1);
    cfg.k_values
        .par_iter()
        .enumerate()
        .map(|(j, &k)| {
            let r = dk_ratio_minimize(&s, k, cfg.starts, cfg.iters, &probes.substream(j as u64))?;
            Ok(ProbeSummary {
                eigenvalues: r.eigenvalues,
                k,
                spectral_ok: r.spectral_ok,
                best_ratio: r.best_ratio,
                starts_used: r.starts_used,
                verdict: r.verdict,
            })
        })
        .collect()
}

/// Outcome of a `verify` run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub records: usize,
    pub failures: usize,
    pub rows: Vec<SummaryRow>,
}

/// Runs a verification suite and writes the JSONL records and summary CSV
/// when `out` is set.
pub fn verify(cfg: &CampaignConfig) -> Result<VerifyOutcome> {
    let records = run_verify(cfg)?;
    let rows = summarize(&records);
    if let Some(path) = &cfg.out {
        let mut w = BufWriter::new(File::create(path)?);
        write_jsonl(&records, &mut w)?;
        write_summary_csv(&rows, &summary_path(path))?;
    }
    Ok(VerifyOutcome {
        records: records.len(),
        failures: records.iter().filter(|r| !r.pass).count(),
        rows,
    })
}
