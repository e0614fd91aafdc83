//! Block Lanczos on `(A − σI)^{-1}` with full reorthogonalization.

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use super::dense::{orthonormalize, project_out, random_block, sorted_eigen};
use super::skyline::SkylineLdl;

pub struct BlockLanczos<'a> {
    ldl: &'a SkylineLdl,
    block: usize,
    cap: usize,
    /// Orthonormal basis, first `m` columns valid.
    v: DMatrix<f64>,
    /// Projected operator `Vᵀ (A − σI)^{-1} V`.
    h: DMatrix<f64>,
    m: usize,
    /// The newest block has not been multiplied yet.
    pending: bool,
    /// Triangular factor of the most recent residual block.
    last_r: DMatrix<f64>,
    rng: ChaCha8Rng,
}

/// Ritz data ordered by ascending `λ = σ + 1/θ`.
pub struct Ritz {
    pub lambda: Vec<f64>,
    /// `‖(A − σI)^{-1} y − θ y‖ / |θ|`.
    pub rel_residual: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl<'a> BlockLanczos<'a> {
    pub fn new(ldl: &'a SkylineLdl, n: usize, block: usize, cap: usize, mut rng: ChaCha8Rng) -> Self {
        let cap = cap.min(n).max(block);
        let mut v = DMatrix::zeros(n, cap);
        let mut q = random_block(&mut rng, n, block);
        orthonormalize(&mut q, None, &mut rng);
        v.columns_mut(0, block).copy_from(&q);
        Self {
            ldl,
            block,
            cap,
            v,
            h: DMatrix::zeros(cap, cap),
            m: block,
            pending: true,
            last_r: DMatrix::zeros(block, block),
            rng,
        }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn exhausted(&self) -> bool {
        !self.pending
    }

    /// Applies the operator to the newest block and appends the next one.
    pub fn step(&mut self) {
        if !self.pending {
            return;
        }
        let b = self.block;
        let start = self.m - b;
        let mut w = self.v.columns(start, b).clone_owned();
        self.ldl.solve_block(&mut w);
        let coeffs = project_out(&self.v, self.m, &mut w);
        self.h.view_mut((0, start), (self.m, b)).copy_from(&coeffs);
        self.h.view_mut((start, 0), (b, self.m)).copy_from(&coeffs.transpose());
        let r = orthonormalize(&mut w, Some((&self.v, self.m)), &mut self.rng);
        self.last_r = r;
        if self.m + b <= self.cap {
            self.v.columns_mut(self.m, b).copy_from(&w);
            self.m += b;
        } else {
            self.pending = false;
        }
    }

    /// Ritz pairs on the blocks multiplied so far.
    pub fn ritz(&self) -> Ritz {
        let k = if self.pending { self.m - self.block } else { self.m };
        let hk = self.h.view((0, 0), (k, k)).clone_owned();
        let (theta, s) = sorted_eigen(hk);
        let sigma = self.ldl.shift();
        let mut rows: Vec<(f64, f64, usize)> = theta
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let tail = s.view((k - self.block, i), (self.block, 1));
                let res = (&self.last_r * tail).norm();
                (sigma + 1.0 / t, res / t.abs(), i)
            })
            .collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let vectors = DMatrix::from_columns(&rows.iter().map(|r| s.column(r.2).clone_owned()).collect::<Vec<_>>());
        Ritz {
            lambda: rows.iter().map(|r| r.0).collect(),
            rel_residual: rows.iter().map(|r| r.1).collect(),
            vectors,
        }
    }

    /// Ritz vectors `V s` for the given Ritz indices.
    pub fn ritz_vectors(&self, ritz: &Ritz, idx: &[usize]) -> DMatrix<f64> {
        let k = ritz.vectors.nrows();
        let s = DMatrix::from_columns(&idx.iter().map(|&i| ritz.vectors.column(i).clone_owned()).collect::<Vec<_>>());
        self.v.columns(0, k) * s
    }
}
