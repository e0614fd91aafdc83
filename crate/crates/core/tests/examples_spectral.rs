mod common;

use std::f64::consts::PI;

use common::approx_eq;
use subelliptic::assemble::assemble_operator;
use subelliptic::bundled;
use subelliptic::eigen::{counting_function, smallest_k, Spectrum};
use subelliptic::fields::{FieldSystem, VectorField};
use subelliptic::geometry::{build_grid, DomainSpec, Verdict};
use subelliptic::spectral::quadrature::{alpha, lattice_constant};
use subelliptic::spectral::{
    alpha_n, check_thm1_uniform_bound, check_thm4, check_thm5, diagonal_kernel, grushin_log_bound, hansson_laptev_bound,
    hansson_laptev_constant, heat_trace, heisenberg_explicit_lower, lattice_sum, sup_norms, supnorm_growth, tauberian_consistency,
    trace_amplitude, weyl_coefficient_at, weyl_fit, DiagonalKernel, SpectralError, WEYL_RANGE,
};

/// `π²(p² + q²)` for `p, q ≥ 1`, sorted, first `k`.
fn square_spectrum(k: usize) -> Vec<f64> {
    let m = (2.0 * (k as f64).sqrt()) as i64 + 10;
    let mut v: Vec<f64> = (1..=m)
        .flat_map(|p| (1..=m).map(move |q| PI * PI * (p * p + q * q) as f64))
        .collect();
    v.sort_by(f64::total_cmp);
    v.truncate(k);
    v
}

fn unit_square(r: usize) -> (subelliptic::geometry::Grid, subelliptic::assemble::DiscreteOperator) {
    let grid = build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[r, r]).unwrap();
    let a = assemble_operator(&bundled::laplacian2d(), &grid).unwrap();
    (grid, a)
}

#[test]
fn square_laplacian_lowest_ten() {
    let (_, a) = unit_square(64);
    let s = smallest_k(&a, 10, 1e-8, 0).unwrap();
    let want = [2, 5, 5, 8, 10, 10, 13, 13, 17, 17];
    for (l, w) in s.values.iter().zip(want) {
        assert!(approx_eq(*l, PI * PI * w as f64, 0.01), "{l} vs π²·{w}");
    }
    assert!(s.values[0] > 0.0);
}

#[test]
fn one_dimensional_dirichlet_modes() {
    let grid = build_grid(&DomainSpec::cube(1, 0.0, 1.0), &[100]).unwrap();
    let sys = FieldSystem::new(1, vec![VectorField::coordinate(1, 0)], 1).unwrap();
    let s = smallest_k(&assemble_operator(&sys, &grid).unwrap(), 3, 1e-10, 0).unwrap();
    let h = 0.01;
    for (p, l) in s.values.iter().enumerate() {
        let p = (p + 1) as f64;
        assert!(approx_eq(*l, (p * PI).powi(2), 1e-3));
        let discrete = 4.0 * (p * PI * h / 2.0).sin().powi(2) / (h * h);
        assert!(approx_eq(*l, discrete, 1e-9), "{l} vs {discrete}");
    }
}

#[test]
fn counting_function_examples() {
    let s = Spectrum::from_values(square_spectrum(10));
    assert_eq!(counting_function(&s, 5.0 * PI * PI + 0.1).unwrap(), 3);
    assert_eq!(counting_function(&s, s.values[0] * 0.5).unwrap(), 0);
    assert_eq!(counting_function(&s, s.max_value()).unwrap(), 10);
    assert!(counting_function(&s, s.max_value() * 2.0).is_err());
}

#[test]
fn closed_form_trace_samples() {
    let s = Spectrum::from_values(vec![1.0, 2.0, 3.0]);
    let t = heat_trace(&s, &[1.0]);
    let z = (-1.0f64).exp() + (-2.0f64).exp() + (-3.0f64).exp();
    match t {
        Ok(t) => assert!((t.samples[0].1 - z).abs() < 1e-15),
        Err(e) => assert!(matches!(e, SpectralError::EmptyWindow(_))),
    }
    assert!((z - 0.5530).abs() < 1e-4);
}

#[test]
fn square_counting_law_from_closed_form() {
    let s = Spectrum::from_values(square_spectrum(20_000));
    let w = weyl_fit(&s, WEYL_RANGE).unwrap();
    assert!((w.exponent - 1.0).abs() < 0.02, "{}", w.exponent);
    let c = weyl_coefficient_at(&s, WEYL_RANGE, 1.0).unwrap();
    assert!(approx_eq(c, 1.0 / (4.0 * PI), 0.05), "{c}");
    let amp = trace_amplitude(&s, 2).unwrap();
    assert!(approx_eq(amp, 1.0 / (4.0 * PI), 0.05), "{amp}");
    assert!(tauberian_consistency(&s, 2, WEYL_RANGE).unwrap().pass);
}

#[test]
fn square_gap_ratio_tends_to_four_pi() {
    let s = Spectrum::from_values(square_spectrum(20_000));
    let rec = check_thm4(&s, 2).unwrap();
    assert!(rec.pass);
    assert!(approx_eq(rec.fitted["c_tilde"], 4.0 * PI, 0.05), "{}", rec.fitted["c_tilde"]);
    let rec5 = check_thm5(&s, 2, Verdict::Convergent).unwrap();
    assert!(rec5.pass);
    assert!(matches!(check_thm5(&s, 2, Verdict::Divergent), Err(SpectralError::Refused(_))));
}

#[test]
fn square_root_spectrum_trace_amplitude() {
    let s = Spectrum::from_values((1..=200_000).map(|j| (j as f64).sqrt()).collect());
    let a = trace_amplitude(&s, 4).unwrap();
    assert!(approx_eq(a, 2.0, 0.01), "{a}");
    assert!(tauberian_consistency(&s, 4, WEYL_RANGE).unwrap().pass);
}

#[test]
fn heisenberg_constants() {
    let (c1, err) = lattice_sum(1).unwrap();
    assert!((c1 - PI * PI / 8.0).abs() < 1e-8 && err <= 1e-10);
    let (c, _) = lattice_constant(1, 1e-10, 10_000_000).unwrap();
    assert!((c - 1.2337).abs() < 1e-4);
    let hl = hansson_laptev_constant(1, 8.0).unwrap();
    assert!((hl - 4.0 / 3.0).abs() < 1e-8, "{hl}");
    assert!((alpha_n(1).unwrap() - PI * PI / 4.0).abs() < 1e-6);
    let (gk, rb) = alpha(2).unwrap();
    assert!((gk - rb).abs() < 1e-8);
}

#[test]
fn lower_bounds_hold_on_small_heisenberg_box() {
    let b = bundled::get("heisenberg1").unwrap();
    let grid = build_grid(&b.domain, &[12, 12, 12]).unwrap();
    let s = smallest_k(&assemble_operator(&b.system, &grid).unwrap(), 100, 1e-8, 0).unwrap();
    let vol = b.domain.box_volume();
    let hl = hansson_laptev_bound(&s, 1, vol).unwrap();
    assert!(hl.pass && hl.fitted["min_ratio"] >= 1.0);
    let first = hansson_laptev_bound(&s.truncated(1), 1, vol).unwrap();
    assert!(first.pass);
    assert!(heisenberg_explicit_lower(&s, 1, vol).unwrap().pass);
}

#[test]
fn kernel_normalization_and_centre_slope() {
    let (grid, a) = unit_square(48);
    let s = smallest_k(&a, 300, 1e-9, 0).unwrap().with_grid(&grid);
    let vecs = s.vectors.as_ref().unwrap();
    let dv = grid.volume_element();
    let integral: f64 = vecs[0].iter().map(|v| v * v / dv).sum::<f64>() * dv;
    assert!((integral - 1.0).abs() < 1e-12);

    let sups = sup_norms(&s).unwrap();
    assert!((sups[0] - 2.0).abs() < 1e-9, "{}", sups[0]);
    let rec = supnorm_growth(&s, 2).unwrap();
    assert!(rec.pass);
    assert!(sups.iter().all(|&x| x >= 1.0 - 1e-12));

    let centre = grid.nearest_node(&[0.5, 0.5]).unwrap();
    let (slope, _) = diagonal_kernel(&s, centre, 60).unwrap().exponent_fit().unwrap();
    assert!((slope + 1.0).abs() < 0.1, "{slope}");
}

#[test]
fn single_mode_uniform_bound_closed_form() {
    let (l1, phi2_max, nu) = (3.5, 2.25, 4usize);
    let t_star = nu as f64 / (2.0 * l1);
    let samples: Vec<(f64, f64)> = (1..=2001)
        .map(|i| t_star * i as f64 / 1000.0)
        .map(|t| (t, phi2_max * (-l1 * t).exp()))
        .collect();
    let kernels: Vec<DiagonalKernel> = (0..20)
        .map(|n| DiagonalKernel {
            node: n,
            samples: samples.iter().map(|&(t, h)| (t, h * (n + 1) as f64 / 20.0)).collect(),
            valid_window: (samples[0].0, samples[2000].0),
        })
        .collect();
    let rec = check_thm1_uniform_bound(&kernels, nu);
    let closed = phi2_max * t_star.powf(nu as f64 / 2.0) * (-l1 * t_star).exp();
    assert!(rec.pass);
    assert!((rec.fitted["sup"] - closed).abs() < 1e-12 * closed);
    assert_eq!(rec.fitted["argmax_node"], 19.0);
}

#[test]
fn log_bound_synthetic() {
    let s = Spectrum::from_values((1..=2000).map(|k| if k == 1 { 0.5 } else { k as f64 / (k as f64).ln() }).collect());
    let rec = grushin_log_bound(&s).unwrap();
    assert_eq!(rec.fitted["log_ratio_stable"], 1.0);
    let s = Spectrum::from_values((1..=2000).map(|k| (k as f64).powf(2.0 / 3.0)).collect());
    let rec = grushin_log_bound(&s).unwrap();
    assert_eq!(rec.fitted["log_ratio_stable"], 0.0);
    assert!(!rec.pass);
}
