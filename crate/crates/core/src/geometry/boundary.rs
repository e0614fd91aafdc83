use serde::Serialize;

use super::{DomainSpec, GeometryError};
use crate::fields::{FieldSystem, Polynomial};

/// Below this best normal component a boundary point is reported as characteristic.
pub const CHARACTERISTIC_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicReport {
    /// `min over samples of (Σ_i <X_i(x), n(x)>²)^{1/2}`.
    pub min_normal_component: f64,
    pub argmin: Vec<f64>,
    pub samples: usize,
    pub characteristic: bool,
}

fn gradient(g: &Polynomial) -> Vec<Polynomial> {
    (0..g.nvars()).map(|k| g.derivative(k)).collect()
}

/// Moves `x` onto `{g = 0}` along the gradient, halving the step whenever it
/// fails to reduce `|g|`.
fn project(g: &Polynomial, grad: &[Polynomial], x: &mut [f64]) {
    for _ in 0..10 {
        let v = g.eval_f64(x);
        let dg: Vec<f64> = grad.iter().map(|p| p.eval_f64(x)).collect();
        let norm2: f64 = dg.iter().map(|d| d * d).sum();
        if norm2 == 0.0 || v == 0.0 {
            return;
        }
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&dg).map(|(xi, d)| xi - step * v * d / norm2).collect();
            if g.eval_f64(&trial).abs() < v.abs() || step < 1e-4 {
                x.copy_from_slice(&trial);
                break;
            }
            step *= 0.5;
        }
    }
}

/// Lattice points adjacent to a sign change of the mask, at the coarsest
/// lattice that yields at least `want` of them.
fn crossing_points(spec: &DomainSpec, g: &Polynomial, want: usize) -> Vec<Vec<f64>> {
    let n = spec.dim();
    let max_r = if n <= 2 { 2048 } else { 128 };
    let mut r = 8usize;
    loop {
        let h: Vec<f64> = spec.bounds().iter().map(|(lo, hi)| (hi - lo) / r as f64).collect();
        let at = |idx: &[usize]| -> Vec<f64> { idx.iter().enumerate().map(|(k, &i)| spec.bounds()[k].0 + i as f64 * h[k]).collect() };
        let mut pts = Vec::new();
        let mut idx = vec![0usize; n];
        'scan: loop {
            let x = at(&idx);
            let gx = g.eval_f64(&x);
            for k in 0..n {
                if idx[k] < r {
                    let mut nb = idx.clone();
                    nb[k] += 1;
                    if (g.eval_f64(&at(&nb)) < 0.0) != (gx < 0.0) {
                        pts.push(x);
                        break;
                    }
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    break 'scan;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] <= r {
                    break;
                }
                idx[k] = 0;
            }
        }
        if pts.len() >= want || r >= max_r {
            if pts.len() > want {
                let step = pts.len() as f64 / want as f64;
                return (0..want).map(|i| pts[(i as f64 * step) as usize].clone()).collect();
            }
            return pts;
        }
        r *= 2;
    }
}

/// Samples `∂Ω = {g = 0}` and reports how far the fields are from being
/// tangent to it.
pub fn characteristic_check(spec: &DomainSpec, sys: &FieldSystem, boundary_samples: usize) -> Result<CharacteristicReport, GeometryError> {
    let g = spec.mask().ok_or(GeometryError::MissingMask)?;
    if sys.dim() != spec.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: spec.dim(),
            found: sys.dim(),
        });
    }
    let grad = gradient(g);
    let fields: Vec<_> = sys.fields().iter().map(|f| f.compile()).collect();
    let mut best = f64::INFINITY;
    let mut argmin = Vec::new();
    let pts = crossing_points(spec, g, boundary_samples.max(1));
    for mut x in pts.clone() {
        project(g, &grad, &mut x);
        let dg: Vec<f64> = grad.iter().map(|p| p.eval_f64(&x)).collect();
        let norm = dg.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(GeometryError::VanishingGradient(x));
        }
        let score = fields
            .iter()
            .map(|f| f.iter().zip(&dg).map(|(a, d)| a.eval(&x) * d / norm).sum::<f64>().powi(2))
            .sum::<f64>()
            .sqrt();
        if score < best {
            best = score;
            argmin = x;
        }
    }
    Ok(CharacteristicReport {
        min_normal_component: best,
        argmin,
        samples: pts.len(),
        characteristic: best < CHARACTERISTIC_TOL,
    })
}
