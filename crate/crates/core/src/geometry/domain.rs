use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::fields::{polynomial_from_json, polynomial_to_json, rational_from_decimal_f64, Polynomial, TermJson};

/// A coordinate box, optionally cut down to `{g < 0}` by a polynomial mask.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    bounds: Vec<(f64, f64)>,
    mask: Option<Polynomial>,
}

impl DomainSpec {
    pub fn new(bounds: Vec<(f64, f64)>, mask: Option<Polynomial>) -> Result<Self, GeometryError> {
        if bounds.is_empty() {
            return Err(GeometryError::Invalid("box has no axes".into()));
        }
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(GeometryError::Invalid(format!("empty box side [{lo}, {hi}]")));
        }
        if let Some(m) = &mask {
            if m.nvars() != bounds.len() {
                return Err(GeometryError::DimensionMismatch {
                    expected: bounds.len(),
                    found: m.nvars(),
                });
            }
        }
        Ok(Self { bounds, mask })
    }

    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![(lo, hi); n], None).expect("valid cube")
    }

    /// Ball of radius `r` about `center`, inside its bounding box.
    pub fn ball(center: &[f64], r: f64) -> Self {
        let n = center.len();
        let mut g = Polynomial::constant(n, -rational_from_decimal_f64(r) * rational_from_decimal_f64(r));
        for (k, &c) in center.iter().enumerate() {
            let shifted = &Polynomial::var(n, k) - &Polynomial::constant(n, rational_from_decimal_f64(c));
            g = &g + &(&shifted * &shifted);
        }
        let pad = 0.05 * r;
        let bounds = center.iter().map(|&c| (c - r - pad, c + r + pad)).collect();
        Self::new(bounds, Some(g)).expect("valid ball")
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn mask(&self) -> Option<&Polynomial> {
        self.mask.as_ref()
    }

    pub fn bounds_exact(&self) -> Vec<(BigRational, BigRational)> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| (rational_from_decimal_f64(lo), rational_from_decimal_f64(hi)))
            .collect()
    }

    pub fn box_volume(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// Strict membership test in floating point.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.bounds.iter().zip(x).all(|(&(lo, hi), &xi)| lo < xi && xi < hi) && self.mask.as_ref().is_none_or(|g| g.eval_f64(x) < 0.0)
    }
}

/// `{"box": [[lo, hi], ..], "mask": [{"c": .., "e": ..}, ..] | null, "resolution": [..]}`
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct DomainJson {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    #[serde(default)]
    pub mask: Option<Vec<TermJson>>,
    #[serde(default)]
    pub resolution: Option<Vec<usize>>,
}

impl DomainJson {
    pub fn to_spec(&self) -> Result<DomainSpec, GeometryError> {
        let n = self.bounds.len();
        let mask = match &self.mask {
            Some(terms) => Some(polynomial_from_json(n, terms).map_err(|e| GeometryError::Invalid(e.to_string()))?),
            None => None,
        };
        DomainSpec::new(self.bounds.iter().map(|b| (b[0], b[1])).collect(), mask)
    }

    pub fn from_spec(spec: &DomainSpec, resolution: Option<Vec<usize>>) -> Self {
        Self {
            bounds: spec.bounds.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            mask: spec.mask.as_ref().map(polynomial_to_json),
            resolution,
        }
    }
}
