//! Lowest eigenpairs by spectrum slicing: each slice factors `A − σI`, reads
//! the eigenvalue count below `σ` from the inertia and runs shift-invert
//! block Lanczos until exactly that many new Ritz pairs have converged.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dense::{orthonormalize, rayleigh_ritz, sorted_eigen};
use super::lanczos::{BlockLanczos, Ritz};
use super::skyline::SkylineLdl;
use super::EigenError;
use crate::assemble::DiscreteOperator;

/// Relative shift-invert residual at which a Ritz pair counts as converged.
const RITZ_TOL: f64 = 1e-10;

pub struct SliceOptions {
    pub block: usize,
    pub slice_size: usize,
}

struct Found {
    values: Vec<f64>,
    vectors: Vec<DVector<f64>>,
    slice: Vec<usize>,
}

fn factor_near(a: &DiscreteOperator, mut sigma: f64) -> Result<SkylineLdl, EigenError> {
    for _ in 0..8 {
        if let Some(f) = SkylineLdl::factor(a, sigma) {
            return Ok(f);
        }
        sigma += 1e-7 * sigma.abs().max(1.0);
    }
    Err(EigenError::Factorization(format!("singular shifted matrix near {sigma}")))
}

/// Steps the Lanczos process until `done` accepts the Ritz data.
fn run_until<F>(lz: &mut BlockLanczos, min_dim: usize, every: usize, mut done: F) -> Result<Ritz, EigenError>
where
    F: FnMut(&Ritz) -> bool,
{
    let mut next = min_dim;
    loop {
        lz.step();
        let ready = lz.dim() >= next;
        if ready || lz.exhausted() {
            next = (lz.dim() + every * lz.block()).max(lz.dim() * 9 / 8);
            let ritz = lz.ritz();
            if done(&ritz) {
                return Ok(ritz);
            }
            if lz.exhausted() {
                return Err(EigenError::NotConverged {
                    residuals: ritz.rel_residual.clone(),
                });
            }
        }
    }
}

/// One shift-invert step followed by Rayleigh-Ritz with `A`, sharpening
/// vectors whose Lanczos residual is small only in the inverted norm.
fn polish(a: &DiscreteOperator, ldl: &SkylineLdl, mut y: DMatrix<f64>, rng: &mut ChaCha8Rng) -> (Vec<f64>, DMatrix<f64>) {
    ldl.solve_block(&mut y);
    orthonormalize(&mut y, None, rng);
    rayleigh_ritz(a, &y)
}

fn converged_in(ritz: &Ritz, lo: f64, hi: f64) -> Vec<usize> {
    (0..ritz.lambda.len())
        .filter(|&i| ritz.lambda[i] >= lo && ritz.lambda[i] < hi && ritz.rel_residual[i] <= RITZ_TOL)
        .collect()
}

fn accept(
    found: &mut Found,
    a: &DiscreteOperator,
    ldl: &SkylineLdl,
    lz: &BlockLanczos,
    ritz: &Ritz,
    lo: f64,
    hi: f64,
    slice: usize,
    rng: &mut ChaCha8Rng,
) {
    let keep = converged_in(ritz, lo, hi);
    let all: Vec<usize> = (0..ritz.lambda.len()).filter(|&i| ritz.rel_residual[i] <= RITZ_TOL).collect();
    let (vals, vecs) = polish(a, ldl, lz.ritz_vectors(ritz, &all), rng);
    let inside: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] >= lo && vals[i] < hi).collect();
    if inside.len() == keep.len() {
        for i in inside {
            found.values.push(vals[i]);
            found.vectors.push(vecs.column(i).clone_owned());
            found.slice.push(slice);
        }
    } else {
        let y = lz.ritz_vectors(ritz, &keep);
        for (j, &i) in keep.iter().enumerate() {
            found.values.push(ritz.lambda[i]);
            found.vectors.push(y.column(j).clone_owned());
            found.slice.push(slice);
        }
    }
}

pub fn lowest(a: &DiscreteOperator, k: usize, seed: u64, opts: &SliceOptions) -> Result<(Vec<f64>, DMatrix<f64>), EigenError> {
    let n = a.size();
    let b = opts.block.clamp(1, n);
    let chunk = opts.slice_size.max(b);
    let every = (chunk / (4 * b)).max(1);
    if 8 * k.min(chunk) + 20 * b >= n {
        // the Krylov space would fill the whole space anyway
        let mut dense = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            a.apply(&e, &mut col);
            dense.column_mut(j).copy_from_slice(&col);
            e[j] = 0.0;
        }
        let (vals, vecs) = sorted_eigen(dense);
        return Ok((vals.as_slice()[..k].to_vec(), vecs.columns(0, k).clone_owned()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Found {
        values: Vec::new(),
        vectors: Vec::new(),
        slice: Vec::new(),
    };

    // first slice: shift at zero, fence placed in the first gap above c values
    let ldl0 = factor_near(a, 0.0)?;
    if ldl0.inertia() != 0 {
        return Err(EigenError::Factorization("operator is not positive definite".into()));
    }
    let c = k.min(chunk);
    let cap = (8 * c + 20 * b).min(n);
    let mut lz = BlockLanczos::new(&ldl0, n, b, cap, ChaCha8Rng::seed_from_u64(seed));
    let mut ritz = run_until(&mut lz, c + 2 * b, every, |r| {
        r.lambda.len() > c && r.rel_residual[..c].iter().all(|&x| x <= RITZ_TOL)
    })?;
    let mut fence = 0.5 * (ritz.lambda[c - 1] + ritz.lambda[c]);
    let ldl_f = factor_near(a, fence)?;
    fence = ldl_f.shift();
    let below = ldl_f.inertia();
    drop(ldl_f);
    if converged_in(&ritz, f64::NEG_INFINITY, fence).len() != below {
        ritz = run_until(&mut lz, 0, every, |r| converged_in(r, f64::NEG_INFINITY, fence).len() == below)?;
    }
    accept(&mut found, a, &ldl0, &lz, &ritz, f64::NEG_INFINITY, fence, 0, &mut rng);
    drop(lz);
    drop(ldl0);

    let mut lower = fence;
    let mut slice = 1;
    let mut density = {
        let v = &found.values;
        let q = v.len().min(chunk);
        if q >= 2 {
            (q - 1) as f64 / (v[v.len() - 1] - v[v.len() - q]).max(f64::MIN_POSITIVE)
        } else {
            v.len().max(1) as f64 / fence
        }
    };
    while found.values.len() < k {
        let remaining = k - found.values.len();
        let target = remaining.min(chunk) + (remaining.min(chunk) / 8).max(4);
        let mut width = target as f64 / density;
        let (upper, need) = loop {
            let ldl = factor_near(a, lower + width)?;
            let need = ldl.inertia().saturating_sub(found.values.len());
            if need > 3 * chunk {
                width *= 0.5;
            } else if need == 0 {
                width *= 2.0;
            } else {
                break (ldl.shift(), need);
            }
        };
        // shift at the slice centre so both ends converge at similar rates
        let ldl = factor_near(a, 0.5 * (lower + upper))?;
        let cap = (8 * need + 20 * b).min(n);
        let mut lz = BlockLanczos::new(&ldl, n, b, cap, ChaCha8Rng::seed_from_u64(seed.wrapping_add(slice as u64)));
        let ritz = run_until(&mut lz, need + 2 * b, every, |r| converged_in(r, lower, upper).len() == need)?;
        accept(&mut found, a, &ldl, &lz, &ritz, lower, upper, slice, &mut rng);
        density = need as f64 / (upper - lower);
        lower = upper;
        slice += 1;
    }

    let mut order: Vec<usize> = (0..found.values.len()).collect();
    order.sort_by(|&i, &j| found.values[i].total_cmp(&found.values[j]));
    order.truncate(k);
    let mut values: Vec<f64> = order.iter().map(|&i| found.values[i]).collect();
    let mut vectors = DMatrix::from_columns(&order.iter().map(|&i| found.vectors[i].clone()).collect::<Vec<_>>());
    let slices: Vec<usize> = order.iter().map(|&i| found.slice[i]).collect();

    // near-degenerate groups split between slices are re-diagonalized together
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end] - values[end - 1]).abs() <= 1e-8 * values[end].abs().max(1.0) {
            end += 1;
        }
        if end - start > 1 && slices[start..end].iter().any(|&s| s != slices[start]) {
            let mut y = vectors.columns(start, end - start).clone_owned();
            orthonormalize(&mut y, None, &mut rng);
            let (v, z) = rayleigh_ritz(a, &y);
            values[start..end].copy_from_slice(&v);
            vectors.columns_mut(start, end - start).copy_from(&z);
        }
        start = end;
    }
    Ok((values, vectors))
}
