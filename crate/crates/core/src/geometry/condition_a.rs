use itertools::Itertools;
use serde::Serialize;

use super::DomainSpec;
use crate::fields::linalg::det_f64;
use crate::fields::FieldSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
}

#[derive(Clone, Debug)]
pub struct ConditionAOptions {
    /// Upper bound on the number of quadrature cells.
    pub max_cells: usize,
    /// Excision levels `ε_j = 2^-j`, `j = 1..=levels`; chosen from `max_cells` if unset.
    pub levels: Option<usize>,
    /// Cells per excision radius at the finest level.
    pub cells_per_radius: usize,
    /// Convergence threshold on the decay exponent of successive increments.
    pub min_decay: f64,
}

impl Default for ConditionAOptions {
    fn default() -> Self {
        Self {
            max_cells: 1 << 22,
            levels: None,
            cells_per_radius: 8,
            min_decay: 0.25,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionA {
    pub verdict: Verdict,
    /// `(ε_j, ∫_{D ≥ ε_j} 1/D)`.
    pub estimates: Vec<(f64, f64)>,
    /// Fitted `κ` in `I(ε/2) − I(ε) ∝ ε^κ`; `None` when the increments vanish.
    pub decay_exponent: Option<f64>,
    /// Fraction of cells where every determinant vanishes.
    pub null_fraction: f64,
    pub estimate: f64,
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Midpoint estimate of `∫_Ω dx / D(x)`, `D = Σ |det(X_{i1}, …, X_{in})|` over
/// combinations of the original fields, with `{D < ε}` cut out.
///
/// Successive increments `I(ε/2) − I(ε)` decay like a positive power of `ε`
/// for an integrable singularity and stay level (or grow) otherwise.
pub fn condition_a_integral(sys: &FieldSystem, spec: &DomainSpec, opts: &ConditionAOptions) -> ConditionA {
    let n = spec.dim();
    let fields: Vec<_> = sys.fields().iter().map(|f| f.compile()).collect();
    let combos: Vec<Vec<usize>> = (0..fields.len()).combinations(n).collect();
    let sides: Vec<f64> = spec.bounds().iter().map(|(lo, hi)| hi - lo).collect();
    let cells_for = |levels: usize| -> Vec<usize> {
        let h = 0.5f64.powi(levels as i32) / opts.cells_per_radius as f64;
        sides.iter().map(|s| (s / h).ceil() as usize).collect()
    };
    let levels = opts.levels.unwrap_or_else(|| {
        (3..=12)
            .rev()
            .find(|&j| cells_for(j).iter().product::<usize>() <= opts.max_cells)
            .unwrap_or(3)
    });
    let counts = cells_for(levels);
    let h: Vec<f64> = sides.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();
    let vol: f64 = h.iter().product();

    // bucket[j] collects cells with ε_{j+1} ≤ D < ε_j (bucket[0]: D ≥ 1/2)
    let mut buckets = vec![0.0f64; levels + 1];
    let (mut inside, mut null) = (0usize, 0usize);
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut vals: Vec<Vec<f64>> = vec![vec![0.0; n]; fields.len()];
    'scan: loop {
        for k in 0..n {
            x[k] = spec.bounds()[k].0 + (idx[k] as f64 + 0.5) * h[k];
        }
        if spec.contains(&x) {
            inside += 1;
            for (v, f) in vals.iter_mut().zip(&fields) {
                for (vk, a) in v.iter_mut().zip(f) {
                    *vk = a.eval(&x);
                }
            }
            let d: f64 = combos
                .iter()
                .map(|c| det_f64(&c.iter().map(|&i| vals[i].clone()).collect::<Vec<_>>()).abs())
                .sum();
            if d <= 0.0 {
                null += 1;
            } else {
                // smallest j with 2^-j <= d, capped at the finest level
                let j = if d >= 0.5 {
                    0
                } else {
                    ((-d.log2()).ceil() as usize).min(levels + 1) - 1
                };
                if j < levels {
                    buckets[j] += vol / d;
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
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let null_fraction = if inside == 0 { 0.0 } else { null as f64 / inside as f64 };
    let mut estimates = Vec::with_capacity(levels);
    let mut acc = 0.0;
    for j in 1..=levels {
        acc += buckets[j - 1];
        estimates.push((0.5f64.powi(j as i32), acc));
    }
    let estimate = acc;
    if null_fraction > 1e-3 {
        return ConditionA {
            verdict: Verdict::Divergent,
            estimates,
            decay_exponent: None,
            null_fraction,
            estimate: f64::INFINITY,
        };
    }
    let incs: Vec<(f64, f64)> = estimates
        .windows(2)
        .map(|w| (w[1].0, w[1].1 - w[0].1))
        .filter(|&(_, d)| d > 1e-12 * estimate.max(1e-300))
        .collect();
    let decay_exponent = if incs.len() < 2 {
        None
    } else {
        let tail = &incs[incs.len().saturating_sub(4)..];
        let xs: Vec<f64> = tail.iter().map(|(e, _)| e.ln()).collect();
        let ys: Vec<f64> = tail.iter().map(|(_, d)| d.ln()).collect();
        Some(fit_slope(&xs, &ys))
    };
    let verdict = match decay_exponent {
        Some(k) if k < opts.min_decay => Verdict::Divergent,
        _ => Verdict::Convergent,
    };
    ConditionA {
        verdict,
        estimates,
        decay_exponent,
        null_fraction,
        estimate,
    }
}
