//! Configuration, the analysis pass and the full run: analyze, assemble,
//! solve, verify, write artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assemble::{assemble_operator, DiscreteOperator};
use crate::bundled;
use crate::eigen::{smallest_k_with, EigenError, EigenOptions, Spectrum};
use crate::fields::{
    enumerate_commutators, metivier_condition_check, point_indices, CommutatorBasis, FieldSystem, FieldSystemJson, PointIndices,
};
use crate::geometry::{
    build_grid, characteristic_check, condition_a_integral, measure_h, CharacteristicReport, ConditionAOptions, DomainJson, DomainSpec,
    GeometryError, Grid, HMeasure, HVerdict, Verdict,
};
use crate::spectral::{self, CheckRecord, SpectralError, VerificationReport, WEYL_RANGE};

pub const CHECK_NAMES: [&str; 19] = [
    "nu_tilde",
    "metivier",
    "h_measure",
    "condition_a",
    "characteristic",
    "weyl_exponent",
    "trace_exponent",
    "growth_exponent",
    "partial_sum_lower_bound",
    "gap_upper_bound",
    "euclidean_partial_sum_bound",
    "heisenberg_pointwise_bound",
    "heisenberg_explicit_sum_bound",
    "diagonal_kernel",
    "uniform_kernel_bound",
    "supnorm_growth",
    "grushin_log_bound",
    "tauberian_consistency",
    "kernel_trace_identity",
];

const VECTOR_CHECKS: [&str; 4] = ["diagonal_kernel", "uniform_kernel_bound", "supnorm_growth", "kernel_trace_identity"];

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Schema(String),
    #[error("characteristic boundary: {0}")]
    Characteristic(String),
    #[error("eigensolver: {0}")]
    NotConverged(String),
    #[error("{0}")]
    Failed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Schema(_) => 2,
            PipelineError::Characteristic(_) => 3,
            PipelineError::NotConverged(_) => 4,
            _ => 1,
        }
    }
}

impl From<EigenError> for PipelineError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::NotConverged { .. } => PipelineError::NotConverged(e.to_string()),
            EigenError::InvalidK { .. } => PipelineError::Schema(e.to_string()),
            other => PipelineError::Failed(other.to_string()),
        }
    }
}

impl From<GeometryError> for PipelineError {
    fn from(e: GeometryError) -> Self {
        PipelineError::Schema(e.to_string())
    }
}

/// A bundled name or an explicit polynomial system.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Bundled(String),
    Explicit(FieldSystemJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field_system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<usize>>,
    #[serde(default, rename = "K", alias = "k", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Fail with a distinct status when the boundary is characteristic.
    #[serde(default)]
    pub strict: bool,
    /// Number of lowest eigenvalues used by the counting fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_tilde: Option<usize>,
}

impl RunConfig {
    pub fn bundled(name: &str) -> Self {
        Self {
            field_system: SystemSpec::Bundled(name.into()),
            domain: None,
            resolution: None,
            k: None,
            tol: None,
            seed: None,
            checks: None,
            output_dir: None,
            strict: false,
            weyl_k: None,
            kernel_points: None,
            nu_tilde: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Schema(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, PipelineError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// A configuration with every default filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: Option<String>,
    pub system: FieldSystem,
    pub domain: DomainSpec,
    pub resolution: Vec<usize>,
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub checks: Vec<String>,
    pub output_dir: PathBuf,
    pub strict: bool,
    pub weyl_k: usize,
    pub kernel_points: Vec<Vec<f64>>,
    pub nu_tilde_asserted: Option<usize>,
    pub condition_a_known: Option<Verdict>,
    pub h_region: DomainSpec,
    pub designated: Vec<Vec<BigRational>>,
}

fn default_checks(name: Option<&str>) -> Vec<&'static str> {
    match name {
        Some("laplacian2d") => vec![
            "nu_tilde",
            "metivier",
            "condition_a",
            "weyl_exponent",
            "trace_exponent",
            "partial_sum_lower_bound",
            "gap_upper_bound",
            "euclidean_partial_sum_bound",
            "tauberian_consistency",
            "supnorm_growth",
            "diagonal_kernel",
        ],
        Some("grushin2d") => vec![
            "nu_tilde",
            "metivier",
            "h_measure",
            "condition_a",
            "characteristic",
            "partial_sum_lower_bound",
            "gap_upper_bound",
            "euclidean_partial_sum_bound",
            "grushin_log_bound",
            "diagonal_kernel",
            "uniform_kernel_bound",
        ],
        Some("grushin3d") => vec![
            "nu_tilde",
            "h_measure",
            "condition_a",
            "characteristic",
            "partial_sum_lower_bound",
            "gap_upper_bound",
            "euclidean_partial_sum_bound",
            "growth_exponent",
        ],
        Some("heisenberg1") => vec![
            "nu_tilde",
            "metivier",
            "h_measure",
            "weyl_exponent",
            "trace_exponent",
            "partial_sum_lower_bound",
            "heisenberg_pointwise_bound",
            "heisenberg_explicit_sum_bound",
            "tauberian_consistency",
            "supnorm_growth",
            "uniform_kernel_bound",
        ],
        Some("example82") => vec![
            "nu_tilde",
            "metivier",
            "h_measure",
            "characteristic",
            "partial_sum_lower_bound",
            "gap_upper_bound",
        ],
        _ => vec![
            "nu_tilde",
            "metivier",
            "h_measure",
            "condition_a",
            "partial_sum_lower_bound",
            "gap_upper_bound",
        ],
    }
}

fn default_resolution_for(dim: usize) -> usize {
    match dim {
        1 => 200,
        2 => 64,
        _ => 16,
    }
}

pub fn resolve(cfg: &RunConfig) -> Result<Resolved, PipelineError> {
    let (name, bundle) = match &cfg.field_system {
        SystemSpec::Bundled(n) => {
            let b = bundled::get(n).ok_or_else(|| {
                PipelineError::Schema(format!(
                    "unknown bundled system {n:?}; expected one of {}",
                    bundled::NAMES.join(", ")
                ))
            })?;
            (Some(n.clone()), Some(b))
        }
        SystemSpec::Explicit(_) => (None, None),
    };
    let system = match (&cfg.field_system, &bundle) {
        (_, Some(b)) => b.system.clone(),
        (SystemSpec::Explicit(j), None) => j.clone().into_system().map_err(|e| PipelineError::Schema(e.to_string()))?,
        _ => unreachable!(),
    };
    let domain = match (&cfg.domain, &bundle) {
        (Some(d), _) => d.to_spec()?,
        (None, Some(b)) => b.domain.clone(),
        (None, None) => return Err(PipelineError::Schema("an explicit field system needs a domain".into())),
    };
    if domain.dim() != system.dim() {
        return Err(PipelineError::Schema(format!(
            "domain has {} axes, field system has dimension {}",
            domain.dim(),
            system.dim()
        )));
    }
    let n = system.dim();
    let resolution = match cfg
        .resolution
        .clone()
        .or_else(|| cfg.domain.as_ref().and_then(|d| d.resolution.clone()))
    {
        Some(r) if r.len() == 1 => vec![r[0]; n],
        Some(r) if r.len() == n => r,
        Some(r) => {
            return Err(PipelineError::Schema(format!(
                "resolution has {} entries for dimension {n}",
                r.len()
            )))
        }
        None => vec![bundle.as_ref().map_or(default_resolution_for(n), |b| b.resolution); n],
    };
    let k = cfg.k.unwrap_or(bundle.as_ref().map_or(50, |b| b.k));
    let tol = cfg.tol.unwrap_or(1e-8);
    if !(tol > 0.0) {
        return Err(PipelineError::Schema(format!("tol must be positive, got {tol}")));
    }
    let checks: Vec<String> = match &cfg.checks {
        Some(c) => c.clone(),
        None => default_checks(name.as_deref()).into_iter().map(String::from).collect(),
    };
    if let Some(bad) = checks.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
        return Err(PipelineError::Schema(format!("unknown check {bad:?}")));
    }
    let weyl_k = cfg.weyl_k.unwrap_or(match name.as_deref() {
        Some("heisenberg1") => 300.min(k),
        _ => k,
    });
    if weyl_k == 0 || weyl_k > k {
        return Err(PipelineError::Schema(format!("weyl_k = {weyl_k} must lie in 1..=K")));
    }
    let kernel_points = match &cfg.kernel_points {
        Some(p) => p.clone(),
        None => match name.as_deref() {
            Some("grushin2d") => vec![vec![0.0, 0.0], vec![0.5, 0.0]],
            Some("laplacian2d") => vec![vec![0.5, 0.5]],
            _ => vec![domain.bounds().iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()],
        },
    };
    if kernel_points.iter().any(|p| p.len() != n) {
        return Err(PipelineError::Schema("kernel point of the wrong dimension".into()));
    }
    let designated = name
        .as_deref()
        .and_then(bundled::designated_points)
        .map(|(a, b)| a.into_iter().chain(b).collect())
        .unwrap_or_default();
    Ok(Resolved {
        h_region: bundle.as_ref().and_then(|b| b.h_region.clone()).unwrap_or_else(|| domain.clone()),
        nu_tilde_asserted: cfg.nu_tilde.or(bundle.as_ref().map(|b| b.nu_tilde)),
        condition_a_known: bundle.as_ref().and_then(|b| b.condition_a),
        output_dir: cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
        strict: cfg.strict,
        name,
        system,
        domain,
        resolution,
        k,
        tol,
        seed: cfg.seed.unwrap_or(0),
        checks,
        weyl_k,
        kernel_points,
        designated,
    })
}

impl Resolved {
    /// The configuration as it was actually run, re-loadable as a `RunConfig`.
    pub fn to_config(&self) -> RunConfig {
        let field_system = match &self.name {
            Some(n) => SystemSpec::Bundled(n.clone()),
            None => SystemSpec::Explicit(FieldSystemJson::from_system(&self.system).expect("explicit systems are polynomial")),
        };
        RunConfig {
            field_system,
            domain: Some(DomainJson::from_spec(&self.domain, None)),
            resolution: Some(self.resolution.clone()),
            k: Some(self.k),
            tol: Some(self.tol),
            seed: Some(self.seed),
            checks: Some(self.checks.clone()),
            output_dir: Some(self.output_dir.clone()),
            strict: self.strict,
            weyl_k: Some(self.weyl_k),
            kernel_points: Some(self.kernel_points.clone()),
            nu_tilde: self.nu_tilde_asserted,
        }
    }

    fn wants(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }

    fn needs_vectors(&self) -> bool {
        VECTOR_CHECKS.iter().any(|c| self.wants(c))
    }

    /// Domain volume: the box when unmasked, the node count times the cell otherwise.
    pub fn volume(&self, grid: &Grid) -> f64 {
        if self.domain.mask().is_none() {
            self.domain.box_volume()
        } else {
            grid.len() as f64 * grid.volume_element()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionAReport {
    pub verdict: Verdict,
    pub numeric: Verdict,
    pub from_table: bool,
    pub estimate: f64,
    pub decay_exponent: Option<f64>,
    pub null_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub system: Option<String>,
    pub dim: usize,
    pub hormander_bound: usize,
    pub basis_size: usize,
    pub active_entries: usize,
    pub samples: usize,
    pub nu_tilde: usize,
    pub nu_tilde_sampled: usize,
    pub nu_tilde_asserted: Option<usize>,
    pub designated: Vec<PointIndices>,
    pub metivier_layers: Vec<bool>,
    pub metivier_holds: bool,
    pub h_measure: HMeasure,
    pub condition_a: ConditionAReport,
    pub characteristic: Option<CharacteristicReport>,
}

/// Interior rational lattice `lo + (hi − lo) i / 8`, `i = 1..7`, inside the domain.
fn sample_lattice(domain: &DomainSpec) -> Vec<Vec<BigRational>> {
    let n = domain.dim();
    let bounds = domain.bounds_exact();
    let mut out = Vec::new();
    let mut idx = vec![1usize; n];
    loop {
        let x: Vec<BigRational> = (0..n)
            .map(|k| {
                let (lo, hi) = &bounds[k];
                lo + (hi - lo) * BigRational::new((idx[k] as i64).into(), 8.into())
            })
            .collect();
        if domain.mask().is_none_or(|g| g.eval(&x).is_negative()) {
            out.push(x);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] <= 7 {
                break;
            }
            idx[k] = 1;
        }
    }
}

fn h_resolution(dim: usize) -> usize {
    if dim <= 2 {
        16
    } else {
        8
    }
}

/// Index computations and geometry classifiers; no assembly.
pub fn fields_analyze(r: &Resolved) -> Result<(Analysis, CommutatorBasis), PipelineError> {
    let q = r.system.hormander_bound();
    let basis = enumerate_commutators(&r.system, q);
    let mut samples = sample_lattice(&r.domain);
    samples.extend(r.designated.iter().cloned());
    let mut sampled = 0;
    for x in &samples {
        let p = point_indices(&basis, x);
        if !p.hormander_ok {
            return Err(PipelineError::Failed(format!(
                "Hörmander condition fails within {q} brackets at {:?}",
                p.point
            )));
        }
        sampled = sampled.max(p.nu);
    }
    let nu_tilde = r.nu_tilde_asserted.unwrap_or(sampled);
    let designated: Vec<PointIndices> = r.designated.iter().map(|x| point_indices(&basis, x)).collect();
    let layers = metivier_condition_check(&basis, &samples);
    let h = measure_h(&basis, &r.h_region, h_resolution(r.system.dim()), nu_tilde);
    let ca = condition_a_integral(&r.system, &r.domain, &ConditionAOptions::default());
    let condition_a = ConditionAReport {
        verdict: r.condition_a_known.unwrap_or(ca.verdict),
        numeric: ca.verdict,
        from_table: r.condition_a_known.is_some(),
        estimate: ca.estimate,
        decay_exponent: ca.decay_exponent,
        null_fraction: ca.null_fraction,
    };
    let characteristic = match characteristic_check(&r.domain, &r.system, 400) {
        Ok(rep) => Some(rep),
        Err(GeometryError::MissingMask) => None,
        Err(e) => return Err(e.into()),
    };
    if r.strict {
        if let Some(c) = characteristic.as_ref().filter(|c| c.characteristic) {
            return Err(PipelineError::Characteristic(format!(
                "min normal component {:.3e} at {:?}",
                c.min_normal_component, c.argmin
            )));
        }
    }
    Ok((
        Analysis {
            system: r.name.clone(),
            dim: r.system.dim(),
            hormander_bound: q,
            basis_size: basis.len(),
            active_entries: basis.active().count(),
            samples: samples.len(),
            nu_tilde,
            nu_tilde_sampled: sampled,
            nu_tilde_asserted: r.nu_tilde_asserted,
            designated,
            metivier_holds: layers.iter().all(|&b| b),
            metivier_layers: layers,
            h_measure: h,
            condition_a,
            characteristic,
        },
        basis,
    ))
}

pub fn assemble(r: &Resolved) -> Result<(Grid, DiscreteOperator), PipelineError> {
    let grid = build_grid(&r.domain, &r.resolution)?;
    let a = assemble_operator(&r.system, &grid).map_err(|e| PipelineError::Schema(e.to_string()))?;
    Ok((grid, a))
}

pub fn solve(r: &Resolved, grid: &Grid, a: &DiscreteOperator) -> Result<Spectrum, PipelineError> {
    let opts = EigenOptions {
        tol: r.tol,
        seed: r.seed,
        keep_vectors: r.needs_vectors(),
        ..EigenOptions::new(r.k)
    };
    Ok(smallest_k_with(a, &opts)?.with_grid(grid))
}

fn error_record(name: &str, anchor: &str, e: &SpectralError) -> CheckRecord {
    CheckRecord::new(name, anchor, false).with_note(&format!("not evaluated: {e}"))
}

/// Expected counting exponent: `ν̃/2` when `H` has positive measure, `n/2`
/// when the reciprocal-determinant integral converges.
fn expected_weyl(a: &Analysis) -> Option<f64> {
    if a.h_measure.verdict == HVerdict::Positive {
        Some(a.nu_tilde as f64 / 2.0)
    } else if a.condition_a.verdict == Verdict::Convergent {
        Some(a.dim as f64 / 2.0)
    } else {
        None
    }
}

fn exponent_tolerance(a: &Analysis) -> f64 {
    if a.nu_tilde == a.dim {
        0.1
    } else {
        0.3
    }
}

fn exact_point(grid: &Grid, node: usize) -> Vec<BigRational> {
    grid.coords_exact(node)
}

/// Runs the requested checks on a computed spectrum.
pub fn verify(r: &Resolved, analysis: &Analysis, basis: &CommutatorBasis, grid: &Grid, spec: &Spectrum) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let n = analysis.dim;
    let nu = analysis.nu_tilde;
    for check in &r.checks {
        match check.as_str() {
            "nu_tilde" => rep.push(
                CheckRecord::new(
                    "nu_tilde",
                    "generalized index from sampled pointwise dimensions",
                    r.nu_tilde_asserted.is_none_or(|v| v == analysis.nu_tilde_sampled),
                )
                .input("samples", analysis.samples as f64)
                .fitted("sampled", analysis.nu_tilde_sampled as f64)
                .fitted("used", nu as f64),
            ),
            "metivier" => rep.push(
                CheckRecord::new("metivier", "constant layer dimensions", true).fitted("holds", analysis.metivier_holds as u8 as f64),
            ),
            "h_measure" => {
                let h = &analysis.h_measure;
                let consistent = !(analysis.condition_a.verdict == Verdict::Convergent && h.verdict == HVerdict::Positive);
                let mut rec = CheckRecord::new(
                    "h_measure",
                    "measure of the maximal-index set",
                    h.verdict != HVerdict::Inconclusive && consistent,
                )
                .fitted("positive", (h.verdict == HVerdict::Positive) as u8 as f64);
                for (res, f) in h.resolutions.iter().zip(&h.fractions) {
                    rec = rec.fitted(&format!("fraction_r{res}"), *f);
                }
                rep.push(rec);
            }
            "condition_a" => {
                let c = &analysis.condition_a;
                let mut rec = CheckRecord::new("condition_a", "integrability of the reciprocal determinant sum", true)
                    .fitted("convergent", (c.verdict == Verdict::Convergent) as u8 as f64)
                    .fitted("numeric_convergent", (c.numeric == Verdict::Convergent) as u8 as f64)
                    .fitted("from_table", c.from_table as u8 as f64)
                    .fitted("null_fraction", c.null_fraction);
                if let Some(k) = c.decay_exponent {
                    rec = rec.fitted("decay_exponent", k);
                }
                rep.push(rec);
            }
            "characteristic" => {
                let rec = match &analysis.characteristic {
                    Some(c) => CheckRecord::new("characteristic", "non-characteristic boundary", !c.characteristic)
                        .input("samples", c.samples as f64)
                        .fitted("min_normal_component", c.min_normal_component)
                        .tolerance(crate::geometry::CHARACTERISTIC_TOL),
                    None => CheckRecord::new("characteristic", "non-characteristic boundary (box domain, not sampled)", true),
                };
                rep.push(rec);
            }
            "weyl_exponent" => {
                let sub = spec.truncated(r.weyl_k);
                match spectral::weyl_fit(&sub, WEYL_RANGE) {
                    Ok(f) => {
                        let target = expected_weyl(analysis);
                        let tol = exponent_tolerance(analysis);
                        let pass = target.is_none_or(|t| (f.exponent - t).abs() <= tol);
                        let mut rec = CheckRecord::new("weyl_exponent", "counting function power law", pass)
                            .input("K_fit", r.weyl_k as f64)
                            .fitted("exponent", f.exponent)
                            .fitted("coefficient", f.coefficient)
                            .tolerance(tol);
                        if let Some(t) = target {
                            rec = rec.fitted("expected", t);
                        }
                        for ((a, b), e) in &f.sensitivity {
                            rec = rec.fitted(&format!("exponent_window_{a:.1}_{b:.1}"), *e);
                        }
                        rep.push(rec);
                    }
                    Err(e) => rep.push(error_record("weyl_exponent", "counting function power law", &e)),
                }
            }
            "trace_exponent" => {
                match spectral::heat_trace_default(spec, 200).and_then(|t| spectral::trace_exponent_fit(&t).map(|f| (t, f))) {
                    Ok((t, f)) => {
                        let target = expected_weyl(analysis).map(|e| -e);
                        let tol = exponent_tolerance(analysis);
                        let pass = target.is_none_or(|x| (f.exponent - x).abs() <= tol) && t.is_monotone_log_convex();
                        let mut rec = CheckRecord::new("trace_exponent", "heat trace power law", pass)
                            .input("t_min", t.valid_window.0)
                            .input("t_max", t.valid_window.1)
                            .fitted("exponent", f.exponent)
                            .fitted("amplitude", f.amplitude)
                            .tolerance(tol);
                        if let Some(x) = target {
                            rec = rec.fitted("expected", x);
                        }
                        rep.push(rec);
                    }
                    Err(e) => rep.push(error_record("trace_exponent", "heat trace power law", &e)),
                }
            }
            "growth_exponent" => match spectral::growth_exponent(spec, WEYL_RANGE) {
                Ok(g) => {
                    let target = expected_weyl(analysis).map(|e| 1.0 / e);
                    let pass = target.is_none_or(|t| (g - t).abs() <= 0.15);
                    let mut rec = CheckRecord::new("growth_exponent", "eigenvalue growth order", pass)
                        .fitted("exponent", g)
                        .tolerance(0.15);
                    if let Some(t) = target {
                        rec = rec.fitted("expected", t);
                    }
                    rep.push(rec);
                }
                Err(e) => rep.push(error_record("growth_exponent", "eigenvalue growth order", &e)),
            },
            "partial_sum_lower_bound" => rep.push(spectral::check_thm2(spec, nu)),
            "gap_upper_bound" => match spectral::check_thm4(spec, n) {
                Ok(rec) => rep.push(rec),
                Err(e) => rep.push(error_record("gap_upper_bound", "upper bound in the ambient dimension", &e)),
            },
            "euclidean_partial_sum_bound" => match spectral::check_thm5(spec, n, analysis.condition_a.verdict) {
                Ok(rec) => rep.push(rec),
                Err(SpectralError::Refused(why)) => rep.push(
                    CheckRecord::new(
                        "euclidean_partial_sum_bound",
                        "partial-sum lower bound in the ambient dimension",
                        true,
                    )
                    .fitted("refused", 1.0)
                    .input("condition_a_convergent", 0.0)
                    .with_note(&why),
                ),
                Err(e) => rep.push(error_record(
                    "euclidean_partial_sum_bound",
                    "partial-sum lower bound in the ambient dimension",
                    &e,
                )),
            },
            "heisenberg_pointwise_bound" | "heisenberg_explicit_sum_bound" => {
                let hn = ((n.max(1) - 1) / 2) as u32;
                let vol = r.volume(grid);
                let res = if check == "heisenberg_pointwise_bound" {
                    spectral::hansson_laptev_bound(spec, hn.max(1), vol)
                } else {
                    spectral::heisenberg_explicit_lower(spec, hn.max(1), vol)
                };
                match res {
                    Ok(rec) => rep.push(rec),
                    Err(e) => rep.push(error_record(check, "Heisenberg explicit bound", &e)),
                }
            }
            "diagonal_kernel" => {
                for (i, p) in r.kernel_points.iter().enumerate() {
                    let name = format!("diagonal_kernel[{i}]");
                    let Some(node) = grid.nearest_node(p) else {
                        rep.push(CheckRecord::new(
                            &name,
                            "diagonal heat kernel short-time power (point outside the grid)",
                            false,
                        ));
                        continue;
                    };
                    let nu_x = point_indices(basis, &exact_point(grid, node)).nu;
                    let expected = -(nu_x as f64) / 2.0;
                    let tol = if nu_x > n { 0.25 } else { 0.2 };
                    let mut rec = match spectral::diagonal_kernel(spec, node, 100).and_then(|k| k.exponent_fit()) {
                        Ok((slope, amp)) => {
                            CheckRecord::new(&name, "diagonal heat kernel short-time power", (slope - expected).abs() <= tol)
                                .fitted("exponent", slope)
                                .fitted("amplitude", amp)
                                .fitted("expected", expected)
                                .tolerance(tol)
                        }
                        Err(e) => error_record(&name, "diagonal heat kernel short-time power", &e),
                    };
                    for (k, c) in grid.coords(node).iter().enumerate() {
                        rec = rec.input(&format!("x{k}"), *c);
                    }
                    rep.push(rec.input("nu_x", nu_x as f64));
                }
            }
            "uniform_kernel_bound" => {
                let total = grid.len();
                let count = 24.min(total);
                let kernels: Result<Vec<_>, _> = (0..count)
                    .map(|i| spectral::diagonal_kernel(spec, (2 * i + 1) * total / (2 * count), 40))
                    .collect();
                match kernels {
                    Ok(k) => rep.push(spectral::check_thm1_uniform_bound(&k, nu)),
                    Err(e) => rep.push(error_record("uniform_kernel_bound", "uniform diagonal heat kernel bound", &e)),
                }
            }
            "supnorm_growth" => match spectral::supnorm_growth(spec, nu) {
                Ok(rec) => rep.push(rec),
                Err(e) => rep.push(error_record("supnorm_growth", "eigenfunction sup-norm growth", &e)),
            },
            "grushin_log_bound" => match spectral::grushin_log_bound(spec) {
                Ok(rec) => rep.push(rec),
                Err(e) => rep.push(error_record(
                    "grushin_log_bound",
                    "logarithmic lower bound without integrability",
                    &e,
                )),
            },
            "tauberian_consistency" => match spectral::tauberian_consistency_split(spec, &spec.truncated(r.weyl_k), nu, WEYL_RANGE) {
                Ok(rec) => rep.push(rec),
                Err(e) => rep.push(error_record(
                    "tauberian_consistency",
                    "trace and counting asymptotics equivalence",
                    &e,
                )),
            },
            "kernel_trace_identity" => {
                let res =
                    spectral::trace_window(spec).and_then(|(lo, hi)| spectral::kernel_trace_defect(spec, &spectral::log_grid(lo, hi, 20)));
                match res {
                    Ok(d) => rep.push(
                        CheckRecord::new("kernel_trace_identity", "kernel diagonal integrates to the trace", d <= 1e-10)
                            .fitted("max_relative_defect", d)
                            .tolerance(1e-10),
                    ),
                    Err(e) => rep.push(error_record("kernel_trace_identity", "kernel diagonal integrates to the trace", &e)),
                }
            }
            _ => unreachable!("validated in resolve"),
        }
    }
    rep
}

/// Everything written by a full run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub analysis: Analysis,
    pub grid_nodes: usize,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Analyze, assemble, solve and verify without touching the disk.
pub fn execute(r: &Resolved) -> Result<(RunReport, Spectrum), PipelineError> {
    let (analysis, basis) = fields_analyze(r)?;
    let (grid, a) = assemble(r)?;
    let spec = solve(r, &grid, &a)?;
    let rep = verify(r, &analysis, &basis, &grid, &spec);
    let report = RunReport {
        config: r.to_config(),
        analysis,
        grid_nodes: grid.len(),
        pass: rep.all_pass(),
        checks: rep.checks,
    };
    Ok((report, spec))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, PipelineError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| PipelineError::Failed(e.to_string()))
}

/// Writes `spectrum.csv`, `trace.csv`, `analysis.json` and `report.json`.
pub fn write_artifacts(out: &Path, report: &RunReport, spec: &Spectrum) -> Result<(), PipelineError> {
    fs::create_dir_all(out)?;
    spec.write_csv(fs::File::create(out.join("spectrum.csv"))?)?;
    let t = spectral::heat_trace_span(spec, 200).map_err(|e| PipelineError::Failed(e.to_string()))?;
    t.write_csv(fs::File::create(out.join("trace.csv"))?)?;
    fs::write(out.join("analysis.json"), to_json(&report.analysis)?)?;
    fs::write(out.join("report.json"), to_json(report)?)?;
    Ok(())
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    let r = resolve(cfg)?;
    let (report, spec) = execute(&r)?;
    write_artifacts(&r.output_dir, &report, &spec)?;
    Ok(report)
}
