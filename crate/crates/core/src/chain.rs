//! Ordered chains of norm values that must be non-increasing.

use serde::{Deserialize, Serialize};

/// Relative tolerance for chain links.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Tolerance for the exact norm equalities of the characterization forms.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `v_0 >= v_1 >= ...`
    NonIncreasing,
    /// `v_0 = v_1 = ...`
    Equal,
}

/// Named values `v_0, v_1, ...` with the margins of consecutive links.
///
/// For a non-increasing chain the margin is `v_i - v_{i+1}`; for an equality
/// it is `-|v_i - v_{i+1}|`. A link passes when its margin is at least
/// `-tol * max(1, |v_i|, |v_{i+1}|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub margins: Vec<f64>,
    pub pass: Vec<bool>,
    pub relation: Relation,
    pub tol: f64,
}

impl ChainReport {
    pub fn new<S: Into<String>>(items: Vec<(S, f64)>, tol: f64) -> Self {
        Self::build(items, Relation::NonIncreasing, tol)
    }

    pub fn equality<S: Into<String>>(items: Vec<(S, f64)>, tol: f64) -> Self {
        Self::build(items, Relation::Equal, tol)
    }

    fn build<S: Into<String>>(items: Vec<(S, f64)>, relation: Relation, tol: f64) -> Self {
        let (labels, values): (Vec<String>, Vec<f64>) =
            items.into_iter().map(|(l, v)| (l.into(), v)).unzip();
        let mut report = Self {
            labels,
            values,
            margins: Vec::new(),
            pass: Vec::new(),
            relation,
            tol,
        };
        report.evaluate();
        report
    }

    fn evaluate(&mut self) {
        self.margins = self
            .values
            .windows(2)
            .map(|w| match self.relation {
                Relation::NonIncreasing => w[0] - w[1],
                Relation::Equal => -(w[0] - w[1]).abs(),
            })
            .collect();
        self.pass = self
            .values
            .windows(2)
            .zip(&self.margins)
            .map(|(w, &m)| m >= -self.tol * link_scale(w[0], w[1]))
            .collect();
    }

    /// Re-evaluates the links under a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.evaluate();
        self
    }

    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest margin divided by its link scale.
    pub fn min_relative_margin(&self) -> f64 {
        self.values
            .windows(2)
            .zip(&self.margins)
            .map(|(w, &m)| m / link_scale(w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first failing link.
    pub fn first_failure(&self) -> Option<usize> {
        self.pass.iter().position(|&p| !p)
    }
}

pub fn link_scale(a: f64, b: f64) -> f64 {
    1.0f64.max(a.abs()).max(b.abs())
}
