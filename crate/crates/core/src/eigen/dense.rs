//! Small dense helpers shared by the iterative solvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::assemble::DiscreteOperator;

pub fn random_block(rng: &mut ChaCha8Rng, n: usize, b: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, b, |_, _| rng.gen_range(-1.0..1.0))
}

/// Removes from `w` its components along the first `m` columns of `v`
/// (two passes) and returns the accumulated coefficients `vᵀw`.
pub fn project_out(v: &DMatrix<f64>, m: usize, w: &mut DMatrix<f64>) -> DMatrix<f64> {
    let mut total = DMatrix::zeros(m, w.ncols());
    if m == 0 {
        return total;
    }
    let basis = v.columns(0, m);
    for _ in 0..2 {
        let c = basis.tr_mul(w);
        *w -= basis * &c;
        total += c;
    }
    total
}

/// Modified Gram-Schmidt in place. Columns that collapse below `1e-12` of
/// their original norm are replaced by fresh random directions orthogonal to
/// `v[:, ..m]` and the earlier columns; their row of `r` stays zero.
pub fn orthonormalize(w: &mut DMatrix<f64>, v: Option<(&DMatrix<f64>, usize)>, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let (n, b) = w.shape();
    let mut r = DMatrix::zeros(b, b);
    for j in 0..b {
        let orig = w.column(j).norm();
        for _pass in 0..2 {
            for i in 0..j {
                let d = w.column(i).dot(&w.column(j));
                r[(i, j)] += d;
                let ci = w.column(i).clone_owned();
                w.column_mut(j).axpy(-d, &ci, 1.0);
            }
        }
        let mut nrm = w.column(j).norm();
        // heavy cancellation leaves rounding noise with components along `v`
        if let Some((v, m)) = v {
            let mut before = orig;
            for _ in 0..3 {
                if nrm > 0.5 * before {
                    break;
                }
                before = nrm;
                let mut col = DMatrix::from_column_slice(w.nrows(), 1, w.column(j).as_slice());
                project_out(v, m, &mut col);
                for i in 0..j {
                    let d = w.column(i).dot(&col.column(0));
                    r[(i, j)] += d;
                    let ci = w.column(i).clone_owned();
                    col.column_mut(0).axpy(-d, &ci, 1.0);
                }
                w.column_mut(j).copy_from(&col);
                nrm = w.column(j).norm();
            }
        }
        if nrm > 1e-12 * orig.max(f64::MIN_POSITIVE) && nrm > 0.0 {
            r[(j, j)] = nrm;
            w.column_mut(j).scale_mut(1.0 / nrm);
            continue;
        }
        // breakdown: substitute a random direction
        let mut fresh = DMatrix::from_fn(n, 1, |_, _| rng.gen_range(-1.0..1.0));
        if let Some((v, m)) = v {
            project_out(v, m, &mut fresh);
        }
        for _pass in 0..2 {
            for i in 0..j {
                let d = w.column(i).dot(&fresh.column(0));
                let ci = w.column(i).clone_owned();
                fresh.column_mut(0).axpy(-d, &ci, 1.0);
            }
        }
        let norm = fresh.norm();
        w.column_mut(j).copy_from(&(fresh.column(0) / norm));
        r[(j, j)] = 0.0;
    }
    r
}

/// `A Y` for a block of column vectors.
pub fn apply_block(a: &DiscreteOperator, y: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(y.nrows(), y.ncols());
    let mut buf = vec![0.0; y.nrows()];
    for j in 0..y.ncols() {
        a.apply(y.column(j).as_slice(), &mut buf);
        out.column_mut(j).copy_from_slice(&buf);
    }
    out
}

/// Eigenpairs of a symmetric matrix sorted by ascending eigenvalue.
pub fn sorted_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (&h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).clone_owned())
            .collect::<Vec<DVector<f64>>>(),
    );
    (vals, vecs)
}

/// Rayleigh-Ritz of `A` on the span of the orthonormal columns of `y`.
pub fn rayleigh_ritz(a: &DiscreteOperator, y: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let ay = apply_block(a, y);
    let g = y.tr_mul(&ay);
    let (vals, s) = sorted_eigen(g);
    (vals, y * s)
}
