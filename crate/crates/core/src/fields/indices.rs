use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::{det_values, rank_f64, rank_values, value_is_zero};
use super::{format_rational, CommutatorBasis, FieldError, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointIndices {
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<BigRational>,
    /// `dim V_j(x)` for `j = 1..=Q`.
    pub layer_dims: Vec<usize>,
    pub nu: usize,
    pub hormander_ok: bool,
}

fn ser_point<S: serde::Serializer>(p: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(format_rational))
}

fn point_string(x: &[BigRational]) -> String {
    format!("({})", x.iter().map(format_rational).join(", "))
}

/// `det(Y_{i1}, …, Y_{in})(x)` for entry indices `idx`.
pub fn lambda_i(basis: &CommutatorBasis, idx: &[usize], x: &[BigRational]) -> Value {
    let rows: Vec<Vec<Value>> = idx.iter().map(|&i| basis.entries()[i].field.eval(x)).collect();
    det_values(&rows)
}

/// Nonzero determinants over combinations of active entries at `x`, as
/// `(total degree, |det|)` pairs.
fn nonzero_minors(basis: &CommutatorBasis, x: &[BigRational]) -> Vec<(usize, Value)> {
    let n = basis.dim();
    let active: Vec<(usize, Vec<Value>)> = basis
        .active()
        .map(|(_, e)| (e.degree, e.field.eval(x)))
        .filter(|(_, v)| !v.iter().all(value_is_zero))
        .collect();
    let mut out = Vec::new();
    for combo in (0..active.len()).combinations(n) {
        let rows: Vec<Vec<Value>> = combo.iter().map(|&i| active[i].1.clone()).collect();
        let det = det_values(&rows);
        if !value_is_zero(&det) {
            let d = combo.iter().map(|&i| active[i].0).sum();
            out.push((d, det));
        }
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `Λ(x, r) = Σ_I |λ_I(x)| r^{d(I)}` over ordered `n`-tuples of entries.
///
/// Tuples with a repeated entry, a vanishing entry or a sign duplicate
/// contribute nothing, so the sum is `n!` times the sum over combinations.
pub fn capital_lambda(basis: &CommutatorBasis, x: &[BigRational], r: f64) -> f64 {
    let f = factorial(basis.dim()) as f64;
    nonzero_minors(basis, x)
        .iter()
        .map(|(d, v)| f * v.to_f64().abs() * r.powi(*d as i32))
        .sum()
}

/// Exact `Λ(x, r)` for rational `r`; `None` when some determinant is not exact.
pub fn capital_lambda_exact(basis: &CommutatorBasis, x: &[BigRational], r: &BigRational) -> Option<BigRational> {
    let f = BigRational::from_integer(factorial(basis.dim()).into());
    let mut acc = BigRational::zero();
    for (d, v) in nonzero_minors(basis, x) {
        match v {
            Value::Exact(q) => acc += &f * q.abs() * num_traits::pow(r.clone(), d),
            Value::Approx(_) => return None,
        }
    }
    Some(acc)
}

fn indices_from_layers(point: Vec<BigRational>, layer_dims: Vec<usize>, n: usize) -> PointIndices {
    let mut nu = 0;
    let mut prev = 0;
    for (j, &d) in layer_dims.iter().enumerate() {
        nu += (j + 1) * (d - prev);
        prev = d;
    }
    PointIndices {
        point,
        hormander_ok: prev == n,
        layer_dims,
        nu,
    }
}

/// Layer dimensions `ν_j(x)` and the pointwise homogeneous dimension.
pub fn point_indices(basis: &CommutatorBasis, x: &[BigRational]) -> PointIndices {
    let mut layer_dims = Vec::with_capacity(basis.max_degree());
    let mut rows: Vec<Vec<Value>> = Vec::new();
    for j in 1..=basis.max_degree() {
        rows.extend(basis.of_degree(j).filter(|e| !e.zero).map(|e| e.field.eval(x)));
        layer_dims.push(rank_values(&rows));
    }
    indices_from_layers(x.to_vec(), layer_dims, basis.dim())
}

/// Floating-point layer dimensions at an arbitrary real point.
pub fn point_layers_f64(basis: &CommutatorBasis, x: &[f64]) -> Vec<usize> {
    let mut layer_dims = Vec::with_capacity(basis.max_degree());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for j in 1..=basis.max_degree() {
        rows.extend(basis.of_degree(j).filter(|e| !e.zero).map(|e| e.field.eval_f64(x)));
        layer_dims.push(rank_f64(&rows));
    }
    layer_dims
}

/// `ν(x)` as the least total degree of an `n`-tuple with nonzero determinant.
pub fn nu_via_determinants(basis: &CommutatorBasis, x: &[BigRational]) -> Result<usize, FieldError> {
    nonzero_minors(basis, x)
        .iter()
        .map(|(d, _)| *d)
        .min()
        .ok_or_else(|| FieldError::HormanderFails {
            point: point_string(x),
            q: basis.max_degree(),
        })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetivierIndex {
    pub nu_tilde: usize,
    pub nus: Vec<usize>,
    /// Samples where `ν(x)` attains the maximum.
    pub h_flags: Vec<bool>,
}

/// Sample maximum of `ν` and the samples attaining it.
pub fn metivier_index(basis: &CommutatorBasis, samples: &[Vec<BigRational>]) -> Result<MetivierIndex, FieldError> {
    if samples.is_empty() {
        return Err(FieldError::Invalid("no sample points".into()));
    }
    let mut nus = Vec::with_capacity(samples.len());
    for x in samples {
        let pi = point_indices(basis, x);
        if !pi.hormander_ok {
            return Err(FieldError::HormanderFails {
                point: point_string(x),
                q: basis.max_degree(),
            });
        }
        nus.push(pi.nu);
    }
    let nu_tilde = *nus.iter().max().unwrap();
    let h_flags = nus.iter().map(|&v| v == nu_tilde).collect();
    Ok(MetivierIndex { nu_tilde, nus, h_flags })
}

/// For each layer `j`, whether `ν_j` takes a single value across the samples.
pub fn metivier_condition_check(basis: &CommutatorBasis, samples: &[Vec<BigRational>]) -> Vec<bool> {
    let layers: Vec<Vec<usize>> = samples.iter().map(|x| point_indices(basis, x).layer_dims).collect();
    (0..basis.max_degree()).map(|j| layers.iter().map(|l| l[j]).all_equal()).collect()
}
