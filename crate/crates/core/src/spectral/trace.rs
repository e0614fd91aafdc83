//! Heat traces, their power-law fits and the Weyl counting fit.

use std::io::{self, Write};

use super::{fit_loglog, SpectralError};
use crate::eigen::Spectrum;

/// Truncation tail allowed relative to the trace.
pub const TAIL_TOL: f64 = 1e-6;
/// Smallest trace value kept in the window.
pub const MIN_TRACE: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct HeatTrace {
    pub samples: Vec<(f64, f64)>,
    pub in_window: Vec<bool>,
    pub valid_window: (f64, f64),
    pub k_used: usize,
}

pub fn z_of(values: &[f64], t: f64) -> f64 {
    // smallest terms first
    values.iter().rev().map(|&l| (-l * t).exp()).sum()
}

/// `(t_min, t_max)` with `λ_K t_min = ln(10⁶ K)` and `Z(t_max) = 3`.
pub fn trace_window(spec: &Spectrum) -> Result<(f64, f64), SpectralError> {
    let k = spec.len();
    if k == 0 {
        return Err(SpectralError::EmptyWindow("empty spectrum".into()));
    }
    if (k as f64) < MIN_TRACE {
        return Err(SpectralError::EmptyWindow(format!("K = {k} < 3")));
    }
    let (t_min, t_max) = window_ends(spec);
    if t_min >= t_max {
        return Err(SpectralError::EmptyWindow(format!(
            "t_min = {t_min:.4e} ≥ t_max = {t_max:.4e}; K = {k} is too small"
        )));
    }
    Ok((t_min, t_max))
}

fn window_ends(spec: &Spectrum) -> (f64, f64) {
    let t_min = (spec.len() as f64 / TAIL_TOL).ln() / spec.max_value();
    let mut lo = 0.0;
    let mut hi = 1.0 / spec.values[0];
    while z_of(&spec.values, hi) >= MIN_TRACE {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if z_of(&spec.values, mid) >= MIN_TRACE {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (t_min, lo)
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    g
}

pub fn heat_trace(spec: &Spectrum, t_grid: &[f64]) -> Result<HeatTrace, SpectralError> {
    if let Some(t) = t_grid.iter().find(|&&t| !(t > 0.0)) {
        return Err(SpectralError::InvalidInput(format!("non-positive time {t}")));
    }
    let window = trace_window(spec)?;
    let samples: Vec<(f64, f64)> = t_grid.iter().map(|&t| (t, z_of(&spec.values, t))).collect();
    let in_window = t_grid.iter().map(|&t| t >= window.0 && t <= window.1).collect();
    Ok(HeatTrace {
        samples,
        in_window,
        valid_window: window,
        k_used: spec.len(),
    })
}

/// Trace sampled at `n` log-spaced points across its own valid window.
pub fn heat_trace_default(spec: &Spectrum, n: usize) -> Result<HeatTrace, SpectralError> {
    let (lo, hi) = trace_window(spec)?;
    heat_trace(spec, &log_grid(lo, hi, n))
}

/// Like [`heat_trace_default`], but an empty window still yields samples
/// between its two ends, all flagged as outside the window.
pub fn heat_trace_span(spec: &Spectrum, n: usize) -> Result<HeatTrace, SpectralError> {
    match heat_trace_default(spec, n) {
        Err(SpectralError::EmptyWindow(_)) if !spec.values.is_empty() && spec.values[0] > 0.0 => {
            let (a, b) = window_ends(spec);
            let (lo, hi) = if b > 0.0 && a != b { (a.min(b), a.max(b)) } else { (a, 10.0 * a) };
            let grid = log_grid(lo, hi, n);
            Ok(HeatTrace {
                samples: grid.iter().map(|&t| (t, z_of(&spec.values, t))).collect(),
                in_window: vec![false; n],
                valid_window: (a, b),
                k_used: spec.len(),
            })
        }
        other => other,
    }
}

impl HeatTrace {
    pub fn windowed(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples.iter().zip(&self.in_window).filter(|(_, &w)| w).map(|(s, _)| *s)
    }

    /// Strictly decreasing and log-convex on the sampled grid.
    pub fn is_monotone_log_convex(&self) -> bool {
        let s = &self.samples;
        let dec = s.windows(2).all(|w| w[1].0 <= w[0].0 || w[1].1 < w[0].1);
        let convex = s.windows(3).all(|w| {
            let (t0, t1, t2) = (w[0].0, w[1].0, w[2].0);
            let (a, b, c) = (w[0].1.ln(), w[1].1.ln(), w[2].1.ln());
            // ln Z is convex in t: the middle point lies on or below the chord
            let chord = a + (c - a) * (t1 - t0) / (t2 - t0);
            b <= chord + 1e-12 * chord.abs().max(1.0)
        });
        dec && convex
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,Z,in_window")?;
        for ((t, z), inside) in self.samples.iter().zip(&self.in_window) {
            writeln!(w, "{t:.12e},{z:.12e},{}", u8::from(*inside))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub points: usize,
}

/// Slope and intercept of `log Z` against `log t` inside the window.
pub fn trace_exponent_fit(trace: &HeatTrace) -> Result<PowerFit, SpectralError> {
    let pts: Vec<(f64, f64)> = trace.windowed().collect();
    if pts.len() < 5 {
        return Err(SpectralError::WindowTooNarrow { have: pts.len(), need: 5 });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let (slope, intercept) = fit_loglog(&xs, &ys);
    Ok(PowerFit {
        exponent: slope,
        amplitude: intercept.exp(),
        points: xs.len(),
    })
}

/// `t^{ν̃/2} Z(t)` at the short-time end of the valid window.
pub fn trace_amplitude(spec: &Spectrum, nu_tilde: usize) -> Result<f64, SpectralError> {
    let (t, _) = trace_window(spec)?;
    Ok(t.powf(nu_tilde as f64 / 2.0) * z_of(&spec.values, t))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub points: usize,
    pub range: (f64, f64),
    /// Exponents refitted on shifted windows.
    pub sensitivity: Vec<((f64, f64), f64)>,
}

/// Relative gap below which sorted eigenvalues count as one degenerate level.
pub const TIE_REL: f64 = 1e-9;

/// `N(λ_j)` for every computed eigenvalue, ties counted inclusively. Values
/// closer than `TIE_REL` relative to their neighbour share a level.
pub fn counts(values: &[f64]) -> Vec<usize> {
    let mut n = vec![0; values.len()];
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= TIE_REL * values[end].abs() {
            end += 1;
        }
        n[start..end].fill(end);
        start = end;
    }
    n
}

fn weyl_points(values: &[f64], range: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    let k = values.len();
    let lo = ((range.0 * k as f64).ceil() as usize).max(1);
    let hi = ((range.1 * k as f64).floor() as usize).min(k);
    let n = counts(values);
    let pts: Vec<(f64, f64)> = (lo..=hi).map(|j| (values[j - 1], n[j - 1] as f64)).collect();
    if pts.len() < 20 {
        return Err(SpectralError::TooFewPoints { have: pts.len(), need: 20 });
    }
    if pts.iter().any(|p| !(p.0 > 0.0)) {
        return Err(SpectralError::InvalidInput("non-positive eigenvalue in the fit range".into()));
    }
    Ok(pts.into_iter().unzip())
}

/// Power law `N(λ) ≈ c λ^e` over `λ ∈ [λ_{⌈aK⌉}, λ_{⌊bK⌋}]`.
pub fn weyl_fit(spec: &Spectrum, range: (f64, f64)) -> Result<WeylFit, SpectralError> {
    let (xs, ys) = weyl_points(&spec.values, range)?;
    let (slope, intercept) = fit_loglog(&xs, &ys);
    let mut sensitivity = Vec::new();
    for d in [-0.1, 0.1] {
        let r = (range.0 + d, range.1 + d);
        if r.0 > 0.0 && r.1 <= 1.0 {
            if let Ok((x, y)) = weyl_points(&spec.values, r) {
                sensitivity.push((r, fit_loglog(&x, &y).0));
            }
        }
    }
    Ok(WeylFit {
        exponent: slope,
        coefficient: intercept.exp(),
        points: xs.len(),
        range,
        sensitivity,
    })
}

/// Median of `N(λ)/λ^{e}` over the fit range, with the exponent held at `e`.
pub fn weyl_coefficient_at(spec: &Spectrum, range: (f64, f64), exponent: f64) -> Result<f64, SpectralError> {
    let (xs, ys) = weyl_points(&spec.values, range)?;
    let ratios: Vec<f64> = xs.iter().zip(&ys).map(|(l, n)| n / l.powf(exponent)).collect();
    Ok(super::median(&ratios))
}

/// Slope of `log λ_k` against `log k` over the fit range.
pub fn growth_exponent(spec: &Spectrum, range: (f64, f64)) -> Result<f64, SpectralError> {
    let (xs, ys) = weyl_points(&spec.values, range)?;
    Ok(fit_loglog(&ys, &xs).0)
}
