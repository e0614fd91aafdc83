//! Locally optimal block preconditioned conjugate gradient with a Jacobi
//! preconditioner.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dense::{apply_block, random_block, sorted_eigen};
use super::EigenError;
use crate::assemble::DiscreteOperator;

/// Gram-Schmidt that drops dependent columns instead of replacing them.
fn orth_drop(s: &DMatrix<f64>) -> DMatrix<f64> {
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(s.ncols());
    for j in 0..s.ncols() {
        let mut c = s.column(j).clone_owned();
        let orig = c.norm();
        for _ in 0..2 {
            for q in &cols {
                let d = q.dot(&c);
                c.axpy(-d, q, 1.0);
            }
        }
        let nrm = c.norm();
        if nrm > 1e-10 * orig && nrm > 0.0 {
            cols.push(c / nrm);
        }
    }
    DMatrix::from_columns(&cols)
}

pub fn lobpcg(a: &DiscreteOperator, k: usize, tol: f64, seed: u64, max_iter: usize) -> Result<(Vec<f64>, DMatrix<f64>), EigenError> {
    let n = a.size();
    let nb = (2 * k).min(k + 10).min(n / 3).max(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let x0 = orth_drop(&random_block(&mut rng, n, nb));
    let (mut lam, mut x) = {
        let ax = apply_block(a, &x0);
        let (l, c) = sorted_eigen(x0.tr_mul(&ax));
        (l, &x0 * c)
    };
    let mut p: Option<DMatrix<f64>> = None;
    let mut res = vec![f64::INFINITY; k];
    for _ in 0..max_iter {
        let ax = apply_block(a, &x);
        let mut r = ax.clone();
        for j in 0..nb {
            let xj = x.column(j).clone_owned();
            r.column_mut(j).axpy(-lam[j], &xj, 1.0);
        }
        for j in 0..k {
            res[j] = r.column(j).norm();
        }
        let scale = lam[k - 1].abs().max(1.0);
        if res.iter().all(|&v| v <= tol * scale) {
            return Ok((lam[..k].to_vec(), x.columns(0, k).clone_owned()));
        }
        for (i, mut row) in r.row_iter_mut().enumerate() {
            row *= inv_diag[i];
        }
        let mut blocks = vec![x.clone(), r];
        if let Some(p) = &p {
            blocks.push(p.clone());
        }
        let total: usize = blocks.iter().map(|m| m.ncols()).sum();
        let mut s = DMatrix::zeros(n, total);
        let mut at = 0;
        for m in &blocks {
            s.columns_mut(at, m.ncols()).copy_from(m);
            at += m.ncols();
        }
        let q = orth_drop(&s);
        let aq = apply_block(a, &q);
        let (l, c) = sorted_eigen(q.tr_mul(&aq));
        let cx = c.columns(0, nb).clone_owned();
        let x_new = &q * &cx;
        // search direction: the part of the update outside span(x)
        let coeff = x.tr_mul(&x_new);
        p = Some(&x_new - &x * coeff);
        x = x_new;
        lam = l[..nb].to_vec();
    }
    Err(EigenError::NotConverged { residuals: res })
}
