use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::DomainSpec;
use crate::fields::{point_indices, CommutatorBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HVerdict {
    Positive,
    Zero,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct HMeasure {
    pub resolutions: Vec<usize>,
    /// Fraction of cells inside the domain whose center has `ν = ν̃`.
    pub fractions: Vec<f64>,
    pub cells: Vec<usize>,
    pub verdict: HVerdict,
}

impl HMeasure {
    pub fn is_positive(&self) -> bool {
        self.verdict == HVerdict::Positive
    }
}

fn fraction_at(basis: &CommutatorBasis, spec: &DomainSpec, r: usize, nu_tilde: usize) -> (f64, usize) {
    let n = spec.dim();
    let bounds = spec.bounds_exact();
    let two_r = BigRational::from_integer((2 * r).into());
    let center = |k: usize, i: usize| -> BigRational {
        let (lo, hi) = &bounds[k];
        lo + (hi - lo) * BigRational::from_integer((2 * i + 1).into()) / &two_r
    };
    let mut idx = vec![0usize; n];
    let (mut inside, mut hits) = (0usize, 0usize);
    'scan: loop {
        let x: Vec<BigRational> = (0..n).map(|k| center(k, idx[k])).collect();
        if spec.mask().is_none_or(|g| g.eval(&x).is_negative()) {
            inside += 1;
            if point_indices(basis, &x).nu == nu_tilde {
                hits += 1;
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                break 'scan;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < r {
                break;
            }
            idx[k] = 0;
        }
    }
    if inside == 0 {
        (0.0, 0)
    } else {
        (hits as f64 / inside as f64, inside)
    }
}

/// Grid fraction of `H = {ν = ν̃}` at `R`, `2R` and `4R` cells per axis.
///
/// `|H| = 0` when the fraction drops by at least 1.8x at each refinement,
/// positive when the last two fractions agree within 10%.
pub fn measure_h(basis: &CommutatorBasis, spec: &DomainSpec, resolution: usize, nu_tilde: usize) -> HMeasure {
    let resolutions = vec![resolution, 2 * resolution, 4 * resolution];
    let (fractions, cells): (Vec<f64>, Vec<usize>) = resolutions.iter().map(|&r| fraction_at(basis, spec, r, nu_tilde)).unzip();
    let decays = fractions.windows(2).all(|w| w[1] <= w[0] / 1.8);
    let stable = fractions[2] > 0.0 && (fractions[2] - fractions[1]).abs() <= 0.1 * fractions[1];
    let verdict = if decays {
        HVerdict::Zero
    } else if stable {
        HVerdict::Positive
    } else {
        HVerdict::Inconclusive
    };
    HMeasure {
        resolutions,
        fractions,
        cells,
        verdict,
    }
}
