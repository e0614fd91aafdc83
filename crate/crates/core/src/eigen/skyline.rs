//! Variable-band `LDLᵀ` factorization of a shifted sparse symmetric matrix.

use nalgebra::DMatrix;

use crate::assemble::DiscreteOperator;

#[derive(Clone, Debug)]
pub struct SkylineLdl {
    n: usize,
    /// First stored column of each row.
    first: Vec<usize>,
    /// Offset of row `i`'s strictly-lower entries `L[i, first[i]..i]`.
    start: Vec<usize>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    shift: f64,
}

impl SkylineLdl {
    /// Factors `A − σI` without pivoting. Returns `None` on a zero pivot.
    pub fn factor(a: &DiscreteOperator, shift: f64) -> Option<Self> {
        let n = a.size();
        let mut first = vec![0usize; n];
        for (i, f) in first.iter_mut().enumerate() {
            *f = a.row(i).map(|(c, _)| c).filter(|&c| c <= i).min().unwrap_or(i);
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i]);
        }
        let mut lower = vec![0.0; start[n]];
        let mut diag = vec![0.0; n];
        for i in 0..n {
            for (c, v) in a.row(i) {
                if c < i {
                    lower[start[i] + c - first[i]] = v;
                } else if c == i {
                    diag[i] = v - shift;
                }
            }
        }
        let scale = a.norm_inf().max(shift.abs()).max(f64::MIN_POSITIVE);
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = lower.split_at_mut(start[i]);
            let row_i = &mut rest[..i - fi];
            // t_j = A_ij − Σ_k L_jk t_k, stored in place of L_ij until the row is finished
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                if lo < j {
                    let lj = &done[start[j] + lo - fj..start[j] + j - fj];
                    let ti = &row_i[lo - fi..j - fi];
                    let s: f64 = lj.iter().zip(ti).map(|(a, b)| a * b).sum();
                    row_i[j - fi] -= s;
                }
            }
            let mut d = diag[i];
            for j in fi..i {
                let t = row_i[j - fi];
                let l = t / diag[j];
                d -= l * t;
                row_i[j - fi] = l;
            }
            if d.abs() <= 1e-14 * scale {
                return None;
            }
            diag[i] = d;
        }
        Some(Self {
            n,
            first,
            start,
            lower,
            diag,
            shift,
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Number of eigenvalues of `A` below the shift (negative pivots).
    pub fn inertia(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    pub fn min_abs_pivot(&self) -> f64 {
        self.diag.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min)
    }

    /// Overwrites `x` with `(A − σI)^{-1} x`.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            let s: f64 = row.iter().zip(&x[fi..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for (xi, d) in x.iter_mut().zip(&self.diag) {
            *xi /= d;
        }
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let xi = x[i];
            if xi != 0.0 {
                let row = &self.lower[self.start[i]..self.start[i + 1]];
                for (xj, l) in x[fi..i].iter_mut().zip(row) {
                    *xj -= l * xi;
                }
            }
        }
    }
}

impl SkylineLdl {
    /// Solves for every column of `w` in one sweep over the factor.
    pub fn solve_block(&self, w: &mut DMatrix<f64>) {
        let b = w.ncols();
        if b == 1 {
            self.solve_in_place(w.as_mut_slice());
            return;
        }
        // row-major copy so the b right-hand sides of a row are contiguous
        let mut x = vec![0.0; self.n * b];
        for (c, col) in w.column_iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                x[i * b + c] = *v;
            }
        }
        let mut acc = vec![0.0; b];
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            acc.iter_mut().for_each(|a| *a = 0.0);
            for (l, xj) in row.iter().zip(x[fi * b..i * b].chunks_exact(b)) {
                for (a, v) in acc.iter_mut().zip(xj) {
                    *a += l * v;
                }
            }
            for (xi, a) in x[i * b..(i + 1) * b].iter_mut().zip(&acc) {
                *xi -= a;
            }
        }
        for (xi, d) in x.chunks_exact_mut(b).zip(&self.diag) {
            xi.iter_mut().for_each(|v| *v /= d);
        }
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            let (head, tail) = x.split_at_mut(i * b);
            let xi = &tail[..b];
            for (l, xj) in row.iter().zip(head[fi * b..].chunks_exact_mut(b)) {
                for (v, s) in xj.iter_mut().zip(xi) {
                    *v -= l * s;
                }
            }
        }
        for (c, mut col) in w.column_iter_mut().enumerate() {
            for (i, v) in col.iter_mut().enumerate() {
                *v = x[i * b + c];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> DiscreteOperator {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        DiscreteOperator::from_triplets(n, t, 1.0)
    }

    #[test]
    fn solve_matches_matrix() {
        let a = tridiag(20);
        let f = SkylineLdl::factor(&a, 0.3).unwrap();
        let b: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        f.solve_in_place(&mut x);
        let ax = a.mul_vec(&x);
        for i in 0..20 {
            assert!((ax[i] - 0.3 * x[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn block_solve_matches_columnwise() {
        let a = tridiag(25);
        let f = SkylineLdl::factor(&a, 1.1).unwrap();
        let w0 = DMatrix::from_fn(25, 3, |i, j| ((i * 7 + j * 3) as f64).cos());
        let mut w = w0.clone();
        f.solve_block(&mut w);
        for j in 0..3 {
            let mut x: Vec<f64> = w0.column(j).iter().copied().collect();
            f.solve_in_place(&mut x);
            for i in 0..25 {
                assert_eq!(x[i], w[(i, j)]);
            }
        }
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        let n = 30;
        let a = tridiag(n);
        // eigenvalues 2 − 2cos(kπ/(n+1))
        let eig: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        for &s in &[0.05, 0.7, 1.9, 3.5] {
            let f = SkylineLdl::factor(&a, s).unwrap();
            assert_eq!(f.inertia(), eig.iter().filter(|&&e| e < s).count());
        }
    }
}
