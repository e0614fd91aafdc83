//! Truncated diagonal heat kernel and eigenfunction sup-norms.

use std::io::{self, Write};

use super::trace::{log_grid, trace_window, z_of, TAIL_TOL};
use super::{fit_loglog, CheckRecord, SpectralError};
use crate::eigen::Spectrum;

fn vectors(spec: &Spectrum) -> Result<&[Vec<f64>], SpectralError> {
    spec.vectors.as_deref().ok_or(SpectralError::MissingVectors)
}

fn volume_element(spec: &Spectrum) -> Result<f64, SpectralError> {
    spec.grid
        .as_ref()
        .map(|g| g.volume_element)
        .ok_or_else(|| SpectralError::InvalidInput("spectrum carries no grid metadata".into()))
}

/// `max_x |φ_j(x)|` for each mode, with `φ_j = v_j / √vol`.
pub fn sup_norms(spec: &Spectrum) -> Result<Vec<f64>, SpectralError> {
    let vol = volume_element(spec)?;
    Ok(vectors(spec)?
        .iter()
        .map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs())) / vol.sqrt())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalKernel {
    pub node: usize,
    pub samples: Vec<(f64, f64)>,
    pub valid_window: (f64, f64),
}

impl DiagonalKernel {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,h")?;
        for (t, h) in &self.samples {
            writeln!(w, "{t:.12e},{h:.12e}")?;
        }
        Ok(())
    }

    /// Slope and intercept of `log h` against `log t`.
    pub fn exponent_fit(&self) -> Result<(f64, f64), SpectralError> {
        if self.samples.len() < 5 {
            return Err(SpectralError::WindowTooNarrow {
                have: self.samples.len(),
                need: 5,
            });
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = self.samples.iter().copied().unzip();
        let (s, b) = fit_loglog(&xs, &ys);
        Ok((s, b.exp()))
    }
}

fn h_at(values: &[f64], phi2: &[f64], t: f64) -> f64 {
    values.iter().zip(phi2).rev().map(|(&l, &p)| (-l * t).exp() * p).sum()
}

/// Window for the diagonal kernel at one node: the lower end bounds the
/// omitted modes by `K · max_j ‖φ_j‖²_∞ · e^{−λ_K t} ≤ 10⁻⁶ h_K(x,x,t)`, the
/// upper end is the trace window's.
fn kernel_window(spec: &Spectrum, phi2: &[f64], sup2: f64) -> Result<(f64, f64), SpectralError> {
    let (_, t_max) = trace_window(spec)?;
    let lk = spec.max_value();
    let k = spec.len() as f64;
    let excess = |t: f64| (k * sup2).ln() - lk * t - (TAIL_TOL * h_at(&spec.values, phi2, t)).ln();
    if excess(t_max) > 0.0 {
        return Err(SpectralError::EmptyWindow(
            "kernel tail bound not met below the trace window end".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0, t_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi >= t_max {
        return Err(SpectralError::EmptyWindow("kernel window has zero width".into()));
    }
    Ok((hi, t_max))
}

/// `h_K(x,x,t) = Σ_{j≤K} e^{−λ_j t} φ_j(x)²` at `points` log-spaced times in the
/// valid window for `node`.
pub fn diagonal_kernel(spec: &Spectrum, node: usize, points: usize) -> Result<DiagonalKernel, SpectralError> {
    let vol = volume_element(spec)?;
    let vecs = vectors(spec)?;
    if vecs.first().is_none_or(|v| node >= v.len()) {
        return Err(SpectralError::InvalidInput(format!("node {node} is not an interior node")));
    }
    let phi2: Vec<f64> = vecs.iter().map(|v| v[node] * v[node] / vol).collect();
    let sup2 = sup_norms(spec)?.into_iter().fold(0.0f64, |m, s| m.max(s * s));
    let window = kernel_window(spec, &phi2, sup2)?;
    let samples = log_grid(window.0, window.1, points)
        .into_iter()
        .map(|t| (t, h_at(&spec.values, &phi2, t)))
        .collect();
    Ok(DiagonalKernel {
        node,
        samples,
        valid_window: window,
    })
}

/// `vol · Σ_x h_K(x,x,t)` for every node, to compare with `Z_K(t)`.
pub fn kernel_trace_defect(spec: &Spectrum, t_grid: &[f64]) -> Result<f64, SpectralError> {
    let vecs = vectors(spec)?;
    let mut worst = 0.0f64;
    for &t in t_grid {
        let z = z_of(&spec.values, t);
        let summed: f64 = vecs
            .iter()
            .zip(&spec.values)
            .map(|(v, &l)| (-l * t).exp() * v.iter().map(|x| x * x).sum::<f64>())
            .sum();
        worst = worst.max((summed - z).abs() / z);
    }
    Ok(worst)
}

/// Largest `t^{ν̃/2} h_K(x,x,t)` over the given kernels.
pub fn check_thm1_uniform_bound(kernels: &[DiagonalKernel], nu_tilde: usize) -> CheckRecord {
    let mut sup = f64::NEG_INFINITY;
    let mut at = (0usize, 0.0);
    for kern in kernels {
        for &(t, h) in &kern.samples {
            let v = t.powf(nu_tilde as f64 / 2.0) * h;
            if v > sup {
                sup = v;
                at = (kern.node, t);
            }
        }
    }
    let pass = kernels.len() >= 20 && sup.is_finite() && sup > 0.0;
    CheckRecord::new("uniform_kernel_bound", "uniform diagonal heat kernel bound", pass)
        .input("nodes", kernels.len() as f64)
        .input("nu_tilde", nu_tilde as f64)
        .fitted("sup", sup)
        .fitted("argmax_node", at.0 as f64)
        .fitted("argmax_t", at.1)
}

/// Fits `log ‖φ_j‖_∞` against `log λ_j`; the slope must stay below `ν̃/4 + 0.1`.
pub fn supnorm_growth(spec: &Spectrum, nu_tilde: usize) -> Result<CheckRecord, SpectralError> {
    let s = sup_norms(spec)?;
    let vol = volume_element(spec)?;
    let omega = vol * vectors(spec)?[0].len() as f64;
    let (slope, _) = fit_loglog(&spec.values, &s);
    let limit = nu_tilde as f64 / 4.0 + 0.1;
    let floor = s.iter().fold(f64::INFINITY, |m, &x| m.min(x)) * omega.sqrt();
    Ok(CheckRecord::new(
        "supnorm_growth",
        "eigenfunction sup-norm growth",
        slope <= limit && floor >= 1.0 - 1e-9,
    )
    .input("nu_tilde", nu_tilde as f64)
    .fitted("slope", slope)
    .fitted("min_sup_times_sqrt_volume", floor)
    .fitted("max_sup", s.iter().fold(0.0f64, |m, &x| m.max(x)))
    .tolerance(limit))
}
