//! Lowest Dirichlet eigenpairs of a discrete operator, and the counting
//! function of the computed spectrum.

mod dense;
mod lanczos;
mod lobpcg;
mod skyline;
mod slicing;

pub use skyline::SkylineLdl;

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assemble::DiscreteOperator;
use crate::geometry::Grid;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("K = {k} is outside 1..=N/4 for N = {n}")]
    InvalidK { k: usize, n: usize },
    #[error("solver did not converge; worst residual {}", residuals.iter().cloned().fold(0.0, f64::max))]
    NotConverged { residuals: Vec<f64> },
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("lambda = {lambda} is beyond the computed spectrum (max {max})")]
    BeyondSpectrum { lambda: f64, max: f64 },
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub resolution: Vec<usize>,
    pub spacing: Vec<f64>,
    pub volume_element: f64,
    pub size: usize,
}

impl From<&Grid> for GridMeta {
    fn from(g: &Grid) -> Self {
        Self {
            resolution: g.resolution().to_vec(),
            spacing: g.spacing().to_vec(),
            volume_element: g.volume_element(),
            size: g.len(),
        }
    }
}

/// Sorted eigenvalues with residuals and, optionally, unit eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
    pub residuals: Vec<f64>,
    pub grid: Option<GridMeta>,
}

impl Spectrum {
    /// Spectrum without vectors, e.g. a synthetic sequence.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let residuals = vec![0.0; values.len()];
        Self {
            values,
            vectors: None,
            residuals,
            grid: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// The lowest `k` pairs.
    pub fn truncated(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self {
            values: self.values[..k].to_vec(),
            vectors: self.vectors.as_ref().map(|v| v[..k].to_vec()),
            residuals: self.residuals[..k].to_vec(),
            grid: self.grid.clone(),
        }
    }

    pub fn with_grid(mut self, grid: &Grid) -> Self {
        self.grid = Some(grid.into());
        self
    }

    /// Eigenvalues multiplied by `s`, vectors unchanged.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        for r in &mut out.residuals {
            *r *= s.abs();
        }
        out
    }

    /// Largest `|⟨v_i, v_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let v = self.vectors.as_ref()?;
        let mut worst = 0.0f64;
        for i in 0..v.len() {
            for j in i..v.len() {
                let d: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        Some(worst)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k,lambda,residual")?;
        for (i, (v, r)) in self.values.iter().zip(&self.residuals).enumerate() {
            writeln!(w, "{},{:.17e},{:.6e}", i + 1, v, r)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, EigenError> {
        let mut lines = r.lines();
        let header = lines.next().transpose().map_err(|e| EigenError::Csv(e.to_string()))?;
        if header.as_deref().map(str::trim) != Some("k,lambda,residual") {
            return Err(EigenError::Csv("expected header k,lambda,residual".into()));
        }
        let mut values = Vec::new();
        let mut residuals = Vec::new();
        for line in lines {
            let line = line.map_err(|e| EigenError::Csv(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(EigenError::Csv(format!("bad row: {line}")));
            }
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| EigenError::Csv(e.to_string()));
            values.push(parse(parts[1])?);
            residuals.push(parse(parts[2])?);
        }
        Ok(Self {
            values,
            vectors: None,
            residuals,
            grid: None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Spectrum slicing with shift-invert block Lanczos.
    ShiftInvert,
    /// Jacobi-preconditioned LOBPCG.
    Lobpcg,
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub method: Method,
    pub keep_vectors: bool,
    pub block: usize,
    pub slice_size: usize,
    pub max_iter: usize,
}

impl EigenOptions {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            tol: 1e-8,
            seed: 0,
            method: Method::ShiftInvert,
            keep_vectors: true,
            block: 8,
            slice_size: 160,
            max_iter: 500,
        }
    }
}

/// The `k` smallest eigenpairs with default settings.
pub fn smallest_k(a: &DiscreteOperator, k: usize, tol: f64, seed: u64) -> Result<Spectrum, EigenError> {
    smallest_k_with(
        a,
        &EigenOptions {
            tol,
            seed,
            ..EigenOptions::new(k)
        },
    )
}

pub fn smallest_k_with(a: &DiscreteOperator, opts: &EigenOptions) -> Result<Spectrum, EigenError> {
    let n = a.size();
    let k = opts.k;
    if k == 0 || k > n / 4 {
        return Err(EigenError::InvalidK { k, n });
    }
    let (values, vectors) = match opts.method {
        Method::ShiftInvert => slicing::lowest(
            a,
            k,
            opts.seed,
            &slicing::SliceOptions {
                block: opts.block,
                slice_size: opts.slice_size,
            },
        )?,
        Method::Lobpcg => lobpcg::lobpcg(a, k, opts.tol, opts.seed, opts.max_iter)?,
    };
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut buf = vec![0.0; n];
    for (j, &lam) in values.iter().enumerate() {
        let mut v: Vec<f64> = vectors.column(j).iter().copied().collect();
        // fix the sign so that the largest-magnitude entry is positive
        let (_, big) = v
            .iter()
            .fold((0.0f64, 0.0f64), |(m, s), &x| if x.abs() > m { (x.abs(), x) } else { (m, s) });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        a.apply(&v, &mut buf);
        residuals.push(buf.iter().zip(&v).map(|(av, x)| (av - lam * x).powi(2)).sum::<f64>().sqrt());
        vecs.push(v);
    }
    let bound = opts.tol * values[k - 1].abs().max(1.0);
    if residuals.iter().any(|&r| r > bound) {
        return Err(EigenError::NotConverged { residuals });
    }
    Ok(Spectrum {
        values,
        vectors: opts.keep_vectors.then_some(vecs),
        residuals,
        grid: None,
    })
}

/// `#{j : λ_j ≤ λ}` over the computed eigenvalues.
pub fn counting_function(spec: &Spectrum, lambda: f64) -> Result<usize, EigenError> {
    if lambda > spec.max_value() {
        return Err(EigenError::BeyondSpectrum {
            lambda,
            max: spec.max_value(),
        });
    }
    Ok(spec.values.partition_point(|&v| v <= lambda))
}
