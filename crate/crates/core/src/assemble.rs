//! Finite-difference Dirichlet form `Σ_i G_iᵀ G_i` of a field system on a grid.

use std::io::{self, Write};

use thiserror::Error;

use crate::fields::{FieldSystem, VectorField};
use crate::geometry::Grid;

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("field dimension {found} does not match grid dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Discrete directional derivative: one row per lattice node whose forward
/// stencil touches the interior, columns indexed by interior nodes.
#[derive(Clone, Debug)]
pub struct DiscreteField {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)`, sorted by row then column.
    pub triplets: Vec<(usize, usize, f64)>,
}

impl DiscreteField {
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.cols]; self.rows];
        for &(r, c, v) in &self.triplets {
            m[r][c] += v;
        }
        m
    }
}

/// `(G u)(p) = Σ_k a_k(p + h_k e_k / 2) (u(p + e_k) − u(p)) / h_k`, with `u = 0`
/// off the interior.
pub fn discretize_field(field: &VectorField, grid: &Grid) -> DiscreteField {
    let n = grid.dim();
    let coef = field.compile();
    let h = grid.spacing();
    // candidate rows: interior nodes and their backward neighbours
    let mut cand: Vec<Vec<i64>> = Vec::with_capacity(grid.len() * (n + 1));
    for i in 0..grid.len() {
        let p: Vec<i64> = grid.node(i).iter().map(|&v| v as i64).collect();
        for k in 0..n {
            if coef[k].is_zero() {
                continue;
            }
            let mut q = p.clone();
            q[k] -= 1;
            if grid.index_of(&q).is_none() {
                cand.push(q);
            }
        }
        cand.push(p);
    }
    cand.sort();
    cand.dedup();
    let mut triplets = Vec::new();
    let mut rows = 0;
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(n + 1);
    for p in &cand {
        entries.clear();
        let pf: Vec<f64> = p.iter().map(|&v| v as f64).collect();
        for k in 0..n {
            if coef[k].is_zero() {
                continue;
            }
            let mut mid = pf.clone();
            mid[k] += 0.5;
            let a = coef[k].eval(&grid.lattice_coords(&mid));
            if a == 0.0 {
                continue;
            }
            let w = a / h[k];
            let mut q = p.clone();
            q[k] += 1;
            if let Some(c) = grid.index_of(&q) {
                entries.push((c, w));
            }
            if let Some(c) = grid.index_of(p) {
                entries.push((c, -w));
            }
        }
        if entries.is_empty() {
            continue;
        }
        entries.sort_by_key(|e| e.0);
        let mut last: Option<usize> = None;
        for &(c, v) in entries.iter() {
            if last == Some(c) {
                triplets.last_mut().map(|t: &mut (usize, usize, f64)| t.2 += v);
            } else {
                triplets.push((rows, c, v));
                last = Some(c);
            }
        }
        rows += 1;
    }
    DiscreteField {
        rows,
        cols: grid.len(),
        triplets,
    }
}

/// Symmetric sparse matrix in compressed-row form (both triangles stored).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteOperator {
    size: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    volume_element: f64,
}

impl DiscreteOperator {
    /// Builds the operator from unsorted triplets, summing duplicates in
    /// their input order.
    pub fn from_triplets(size: usize, mut triplets: Vec<(usize, usize, f64)>, volume_element: f64) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; size + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut prev: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if prev == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                prev = Some((r, c));
            }
        }
        for r in 0..size {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            size,
            row_ptr,
            col_idx,
            values,
            volume_element,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn volume_element(&self) -> f64 {
        self.volume_element
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(p) => self.values[span.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size).map(|r| self.get(r, r)).collect()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[p] * x[self.col_idx[p]];
            }
            *yr = s;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.size];
        self.apply(x, &mut y);
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.size {
            for (c, v) in self.row(r) {
                worst = worst.max((v - self.get(c, r)).abs());
            }
        }
        worst
    }

    /// Max absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.size)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Half-bandwidth `max |r − c|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.size)
            .flat_map(|r| self.row(r).map(move |(c, _)| r.abs_diff(c)))
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    /// Coordinate text dump, one `row col value` line per stored entry.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {} {}", self.size, self.size, self.nnz())?;
        for r in 0..self.size {
            for (c, v) in self.row(r) {
                writeln!(w, "{r} {c} {v:.16e}")?;
            }
        }
        Ok(())
    }
}

/// `A = Σ_i G_iᵀ G_i`. Each product `G_ri G_rj` enters `A_ij` and `A_ji` in
/// the same order, so the result is symmetric bit for bit.
pub fn assemble_operator(sys: &FieldSystem, grid: &Grid) -> Result<DiscreteOperator, AssembleError> {
    if sys.dim() != grid.dim() {
        return Err(AssembleError::DimensionMismatch {
            expected: grid.dim(),
            found: sys.dim(),
        });
    }
    let mut triplets = Vec::new();
    for f in sys.fields() {
        let g = discretize_field(f, grid);
        let mut start = 0;
        while start < g.triplets.len() {
            let r = g.triplets[start].0;
            let end = start + g.triplets[start..].iter().take_while(|t| t.0 == r).count();
            let row = &g.triplets[start..end];
            for a in row {
                for b in row {
                    triplets.push((a.1, b.1, a.2 * b.2));
                }
            }
            start = end;
        }
    }
    Ok(DiscreteOperator::from_triplets(grid.len(), triplets, grid.volume_element()))
}
