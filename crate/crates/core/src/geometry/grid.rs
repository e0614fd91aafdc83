use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{DomainSpec, GeometryError};
use crate::fields::rational_to_f64;

const MISSING: u32 = u32::MAX;

/// Uniform lattice over the domain's box; the interior nodes are the
/// unknowns of the discrete problem, numbered with the last axis fastest.
#[derive(Clone, Debug)]
pub struct Grid {
    resolution: Vec<usize>,
    lo: Vec<BigRational>,
    h: Vec<BigRational>,
    lo_f: Vec<f64>,
    h_f: Vec<f64>,
    /// Lattice indices of interior nodes, flattened with stride `n`.
    nodes: Vec<u32>,
    /// Row of each lattice point, or `MISSING`.
    index: Vec<u32>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.resolution.len()
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> &[f64] {
        &self.h_f
    }

    pub fn origin(&self) -> &[f64] {
        &self.lo_f
    }

    pub fn volume_element(&self) -> f64 {
        self.h_f.iter().product()
    }

    /// Lattice indices of interior node `i`.
    pub fn node(&self, i: usize) -> &[u32] {
        let n = self.dim();
        &self.nodes[i * n..(i + 1) * n]
    }

    pub fn coords(&self, i: usize) -> Vec<f64> {
        self.lattice_coords(&self.node(i).iter().map(|&v| v as f64).collect::<Vec<_>>())
    }

    /// Coordinates of a (possibly fractional) lattice position.
    pub fn lattice_coords(&self, idx: &[f64]) -> Vec<f64> {
        idx.iter().enumerate().map(|(k, &v)| self.lo_f[k] + v * self.h_f[k]).collect()
    }

    pub fn coords_exact(&self, i: usize) -> Vec<BigRational> {
        self.node(i)
            .iter()
            .enumerate()
            .map(|(k, &v)| &self.lo[k] + &self.h[k] * BigRational::from_integer(v.into()))
            .collect()
    }

    /// Row of the lattice point `idx`, if it is an interior node.
    pub fn index_of(&self, idx: &[i64]) -> Option<usize> {
        let mut lin = 0usize;
        for (k, &v) in idx.iter().enumerate() {
            if v < 0 || v as usize > self.resolution[k] {
                return None;
            }
            lin += v as usize * self.strides[k];
        }
        match self.index[lin] {
            MISSING => None,
            r => Some(r as usize),
        }
    }

    /// Interior node nearest to the point `x`.
    pub fn nearest_node(&self, x: &[f64]) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| {
            let da: f64 = self.coords(a).iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum();
            let db: f64 = self.coords(b).iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum();
            da.total_cmp(&db)
        })
    }
}

/// Lattice with `resolution[k]` intervals along axis `k`. Interior nodes are
/// those strictly inside the box where the mask is strictly negative, decided
/// in exact arithmetic.
pub fn build_grid(spec: &DomainSpec, resolution: &[usize]) -> Result<Grid, GeometryError> {
    let n = spec.dim();
    if resolution.len() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: resolution.len(),
        });
    }
    if let Some(&r) = resolution.iter().find(|&&r| r < 4) {
        return Err(GeometryError::EmptyInterior(format!(
            "resolution {r} is below the minimum of 4 intervals per axis"
        )));
    }
    let bounds = spec.bounds_exact();
    let lo: Vec<BigRational> = bounds.iter().map(|(l, _)| l.clone()).collect();
    let h: Vec<BigRational> = bounds
        .iter()
        .zip(resolution)
        .map(|((l, u), &r)| (u - l) / BigRational::from_integer(r.into()))
        .collect();
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * (resolution[k + 1] + 1);
    }
    let total = strides[0] * (resolution[0] + 1);
    let mut index = vec![MISSING; total];
    let mut nodes = Vec::new();
    let mut count = 0u32;
    let mut idx = vec![1usize; n];
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    'outer: loop {
        for k in 0..n {
            x[k] = &lo[k] + &h[k] * BigRational::from_integer(idx[k].into());
        }
        let inside = spec.mask().is_none_or(|g| g.eval(&x).is_negative());
        if inside {
            let lin: usize = idx.iter().zip(&strides).map(|(a, s)| a * s).sum();
            index[lin] = count;
            count += 1;
            nodes.extend(idx.iter().map(|&v| v as u32));
        }
        // odometer over 1..r-1 with the last axis fastest
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < resolution[k] {
                break;
            }
            idx[k] = 1;
        }
    }
    if count == 0 {
        return Err(GeometryError::EmptyInterior("no lattice node lies inside the domain".into()));
    }
    Ok(Grid {
        resolution: resolution.to_vec(),
        lo_f: lo.iter().map(rational_to_f64).collect(),
        h_f: h.iter().map(rational_to_f64).collect(),
        lo,
        h,
        nodes,
        index,
        strides,
    })
}
