//! Everything computed from a spectrum: heat traces, kernel diagonals,
//! power-law fits and the eigenvalue bound checks.

mod bounds;
mod kernel;
pub mod quadrature;
mod trace;

pub use bounds::{
    alpha_n, check_thm2, check_thm4, check_thm5, grushin_log_bound, hansson_laptev_bound, hansson_laptev_constant,
    heisenberg_explicit_constant, heisenberg_explicit_lower, lattice_sum, partial_sum_ratios, tauberian_consistency,
    tauberian_consistency_split,
};
pub use kernel::{check_thm1_uniform_bound, diagonal_kernel, kernel_trace_defect, sup_norms, supnorm_growth, DiagonalKernel};
pub use trace::{
    counts, growth_exponent, heat_trace, heat_trace_default, heat_trace_span, log_grid, trace_amplitude, trace_exponent_fit, trace_window,
    weyl_coefficient_at, weyl_fit, z_of, HeatTrace, PowerFit, WeylFit,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const WEYL_RANGE: (f64, f64) = (0.2, 0.6);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("empty valid window: {0}")]
    EmptyWindow(String),
    #[error("window too narrow: {have} samples, need {need}")]
    WindowTooNarrow { have: usize, need: usize },
    #[error("too few eigenvalues: {have}, need {need}")]
    TooFewPoints { have: usize, need: usize },
    #[error("eigenvectors were not retained")]
    MissingVectors,
    #[error("refused: {0}")]
    Refused(String),
    #[error("lattice series tail bound not reached for n = {0}")]
    TailBound(u32),
    #[error("quadrature did not converge for n = {0}")]
    Quadrature(u32),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// One verification result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub pass: bool,
    #[serde(default)]
    pub inputs: BTreeMap<String, f64>,
    pub fitted: BTreeMap<String, f64>,
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(name: &str, anchor: &str, pass: bool) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            inputs: BTreeMap::new(),
            fitted: BTreeMap::new(),
            tolerance: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn input(mut self, k: &str, v: f64) -> Self {
        self.inputs.insert(k.into(), v);
        self
    }

    pub fn fitted(mut self, k: &str, v: f64) -> Self {
        self.fitted.insert(k.into(), v);
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn push(&mut self, r: CheckRecord) {
        self.checks.push(r);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// The shared "stays bounded" rule applied to the last half of a sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailStability {
    pub pass: bool,
    pub median: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Log-log slope of the last half against its index.
    pub drift: f64,
}

/// Every value in the last half lies within a factor 2 of that half's median.
pub fn stable_tail(seq: &[f64]) -> TailStability {
    let start = seq.len() / 2;
    let tail = &seq[start..];
    let med = median(tail);
    let min = tail.iter().fold(f64::INFINITY, |m, &x| m.min(x)) / med;
    let max = tail.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)) / med;
    let drift = if tail.len() >= 2 && tail.iter().all(|&x| x > 0.0) {
        let idx: Vec<f64> = (start..seq.len()).map(|i| (i + 1) as f64).collect();
        fit_loglog(&idx, tail).0
    } else {
        f64::NAN
    };
    TailStability {
        pass: med > 0.0 && min >= 0.5 && max <= 2.0,
        median: med,
        min_ratio: min,
        max_ratio: max,
        drift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_recovers_power() {
        let x: Vec<f64> = (1..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.25)).collect();
        let (s, b) = fit_loglog(&x, &y);
        assert!((s + 1.25).abs() < 1e-12);
        assert!((b.exp() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn stability_rule() {
        assert!(stable_tail(&[5.0, 1.0, 1.0, 1.5, 0.9]).pass);
        assert!(!stable_tail(&[1.0, 1.0, 1.0, 0.3, 1.0, 1.0]).pass);
    }
}
