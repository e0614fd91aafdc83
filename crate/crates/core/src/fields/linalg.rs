//! Rank and determinant over the rationals, with a floating fallback for
//! matrices that contain non-exact entries.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Value;

/// Relative singular-value cutoff used when a matrix has inexact entries.
pub const RANK_TOL: f64 = 1e-10;

/// Row-reduces a copy of `rows` and returns its rank.
pub fn rank_exact(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..ncols {
                let delta = &f * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square rational matrix by fraction-carrying elimination.
pub fn det_exact(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Numerical rank: singular values above `RANK_TOL · σ_max` after scaling
/// every nonzero row to unit length, so a field and its multiples agree.
pub fn rank_f64(rows: &[Vec<f64>]) -> usize {
    let unit: Vec<Vec<f64>> = rows
        .iter()
        .filter_map(|r| {
            let nrm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            (nrm > 0.0).then(|| r.iter().map(|x| x / nrm).collect())
        })
        .collect();
    if unit.is_empty() {
        return 0;
    }
    let ncols = unit[0].len();
    let m = DMatrix::from_fn(unit.len(), ncols, |i, j| unit[i][j]);
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_TOL * smax).count()
}

pub fn det_f64(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}

fn all_exact(rows: &[Vec<Value>]) -> Option<Vec<Vec<BigRational>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|v| match v {
                    Value::Exact(q) => Some(q.clone()),
                    Value::Approx(_) => None,
                })
                .collect()
        })
        .collect()
}

fn to_f64(rows: &[Vec<Value>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(Value::to_f64).collect()).collect()
}

/// Rank of evaluated field vectors, exact when every entry is exact.
pub fn rank_values(rows: &[Vec<Value>]) -> usize {
    match all_exact(rows) {
        Some(q) => rank_exact(&q),
        None => rank_f64(&to_f64(rows)),
    }
}

/// Determinant of evaluated field vectors. The floating branch returns
/// `Approx(0)` when `|det|` is below `RANK_TOL` times the product of row norms.
pub fn det_values(rows: &[Vec<Value>]) -> Value {
    match all_exact(rows) {
        Some(q) => Value::Exact(det_exact(&q)),
        None => {
            let f = to_f64(rows);
            let d = det_f64(&f);
            let scale: f64 = f.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt()).product();
            if d.abs() <= RANK_TOL * scale {
                Value::Approx(0.0)
            } else {
                Value::Approx(d)
            }
        }
    }
}

pub fn value_abs(v: &Value) -> Value {
    match v {
        Value::Exact(q) => Value::Exact(q.abs()),
        Value::Approx(x) => Value::Approx(x.abs()),
    }
}

pub fn value_is_zero(v: &Value) -> bool {
    match v {
        Value::Exact(q) => q.is_zero(),
        Value::Approx(x) => *x == 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    #[test]
    fn exact_rank_and_det() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank_exact(&a), 2);
        assert!(det_exact(&a).is_zero());
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_exact(&b), BigRational::from_integer((-1).into()));
        let c = m(&[&[2, 0, 1], &[1, 3, 0], &[0, 1, 4]]);
        assert_eq!(det_exact(&c), BigRational::from_integer(25.into()));
    }

    #[test]
    fn float_rank_threshold() {
        assert_eq!(rank_f64(&[vec![1.0, 0.0], vec![1.0, 1e-12]]), 1);
        assert_eq!(rank_f64(&[vec![1.0, 0.0], vec![1.0, 1e-6]]), 2);
        // a short but nonzero field still spans its direction
        assert_eq!(rank_f64(&[vec![1.0, 0.0], vec![0.0, 1e-12]]), 2);
        assert_eq!(rank_f64(&[vec![0.0, 0.0], vec![0.0, 0.0]]), 0);
        assert!((det_f64(&[vec![2.0, 1.0], vec![1.0, 3.0]]) - 5.0).abs() < 1e-12);
    }
}
