//! Acceptance criteria 1 to 8. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stdout (bypassing capture) plus one line per sub-check.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use common::{bundled_system, q};
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use subelliptic::assemble::assemble_operator;
use subelliptic::bundled;
use subelliptic::eigen::{smallest_k, smallest_k_with, EigenOptions, Method, Spectrum};
use subelliptic::fields::{bracket, capital_lambda_exact, enumerate_commutators, nu_via_determinants, point_indices, VectorField};
use subelliptic::geometry::{build_grid, DomainSpec, HVerdict, Verdict};
use subelliptic::pipeline::{execute, fields_analyze, resolve, RunConfig, RunReport};
use subelliptic::spectral::{
    alpha_n, heat_trace_default, kernel_trace_defect, lattice_sum, log_grid, tauberian_consistency, trace_amplitude, trace_exponent_fit,
    weyl_coefficient_at, weyl_fit, CheckRecord, WEYL_RANGE,
};

struct Criterion {
    number: usize,
    title: &'static str,
    started: Instant,
    limit: Duration,
    parts: Vec<(String, bool)>,
}

impl Criterion {
    fn new(number: usize, title: &'static str, limit_secs: u64) -> Self {
        Self {
            number,
            title,
            started: Instant::now(),
            limit: Duration::from_secs(limit_secs),
            parts: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        emit(&format!("    [{}] {name}: {detail}", if pass { "ok" } else { "FAIL" }));
        self.parts.push((name.to_string(), pass));
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed();
        self.check(
            "runtime",
            elapsed <= self.limit,
            format!("{:.1} s (limit {} s)", elapsed.as_secs_f64(), self.limit.as_secs()),
        );
        let failed: Vec<&str> = self.parts.iter().filter(|p| !p.1).map(|p| p.0.as_str()).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        emit(&format!("criterion {}: {verdict} ({})", self.number, self.title));
        assert!(failed.is_empty(), "criterion {} failed: {}", self.number, failed.join(", "));
    }
}

fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn record<'a>(report: &'a RunReport, name: &str) -> &'a CheckRecord {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no {name} record"))
}

#[test]
fn criterion_1_exact_indices() {
    let mut c = Criterion::new(1, "symbolic indices, exact", 1);
    for (name, on, off) in [("grushin2d", 3, Some(2)), ("heisenberg1", 4, None), ("example82", 4, Some(3))] {
        let sys = bundled_system(name);
        let basis = enumerate_commutators(&sys, sys.hormander_bound());
        let (on_set, off_set) = bundled::designated_points(name).unwrap();
        assert_eq!(on_set.len(), 10);
        let on_nu: Vec<usize> = on_set.iter().map(|x| point_indices(&basis, x).nu).collect();
        c.check(
            &format!("{name} on the maximal set"),
            on_nu.iter().all(|&v| v == on),
            format!("ν = {on_nu:?}, expected {on}"),
        );
        if let Some(off) = off {
            assert_eq!(off_set.len(), 10);
            let off_nu: Vec<usize> = off_set.iter().map(|x| point_indices(&basis, x).nu).collect();
            c.check(
                &format!("{name} off the maximal set"),
                off_nu.iter().all(|&v| v == off),
                format!("ν = {off_nu:?}, expected {off}"),
            );
        }
        let nu_tilde = on_nu.iter().chain(&[0]).max().copied().unwrap();
        c.check(&format!("{name} ν̃"), nu_tilde == on, format!("{nu_tilde}"));
    }
    let heis = bundled_system("heisenberg1");
    let basis = enumerate_commutators(&heis, heis.hormander_bound());
    let steps: Vec<usize> = bundled::designated_points("heisenberg1")
        .unwrap()
        .0
        .iter()
        .map(|x| point_indices(&basis, x).layer_dims.iter().position(|&d| d == 3).unwrap() + 1)
        .collect();
    c.check("heisenberg1 step Q", steps.iter().all(|&s| s == 2), format!("{steps:?}"));
    // the third Heisenberg direction is the bracket of the two generators
    let t = bracket(&heis.fields()[0], &heis.fields()[1]).unwrap();
    c.check(
        "heisenberg1 [X, Y]",
        !t.is_zero() && t.components()[..2].iter().all(|p| p.is_zero()),
        "vertical".into(),
    );
    c.finish();
}

fn random_point(rng: &mut ChaCha8Rng, domain: &DomainSpec) -> Vec<BigRational> {
    domain
        .bounds()
        .iter()
        .map(|&(lo, hi)| {
            let d: i64 = rng.gen_range(1..=16);
            let (lo, hi) = ((lo * d as f64).ceil() as i64, (hi * d as f64).floor() as i64);
            q(rng.gen_range(lo..=hi), d)
        })
        .collect()
}

#[test]
fn criterion_2_nu_cross_check() {
    let mut c = Criterion::new(2, "ν from ranks equals ν from determinants", 30);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = Vec::new();
    let mut per_system = Vec::new();
    for name in bundled::NAMES {
        let b = bundled::get(name).unwrap();
        let basis = enumerate_commutators(&b.system, b.system.hormander_bound());
        let region = b.h_region.clone().unwrap_or(b.domain.clone());
        let count = 100;
        for _ in 0..count {
            let x = random_point(&mut rng, &region);
            let (a, d) = (point_indices(&basis, &x).nu, nu_via_determinants(&basis, &x).unwrap());
            if a != d {
                mismatches.push((name.to_string(), x, a, d));
            }
        }
        per_system.push(format!("{name}: {count}"));
    }
    let total = per_system.len() * 100;
    c.check(
        "500 random rational points",
        total == 500 && mismatches.is_empty(),
        format!("{} ({} mismatches)", per_system.join(", "), mismatches.len()),
    );
    c.finish();
}

#[test]
fn criterion_3_lambda_formula() {
    let mut c = Criterion::new(3, "Grushin Λ(x, r) = 2(|x₁| r² + r³)", 30);
    let sys = bundled_system("grushin2d");
    let basis = enumerate_commutators(&sys, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    let n = 400;
    for _ in 0..n {
        let x = [
            q(rng.gen_range(-40..=40), rng.gen_range(1..=13)),
            q(rng.gen_range(-40..=40), rng.gen_range(1..=13)),
        ];
        let r = q(rng.gen_range(1..=60), rng.gen_range(1..=17));
        let closed = q(2, 1) * (x[0].abs() * &r * &r + &r * &r * &r);
        if capital_lambda_exact(&basis, &x, &r) != Some(closed) {
            bad += 1;
        }
    }
    c.check(
        "exact equality at random rational (x, r)",
        bad == 0,
        format!("{n} points, {bad} mismatches"),
    );
    c.finish();
}

/// `π²(p² + q²)`, sorted, first `k`.
fn square_spectrum(k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=60)
        .flat_map(|p| (1..=60).map(move |q| PI * PI * (p * p + q * q) as f64))
        .collect();
    v.sort_by(f64::total_cmp);
    v.truncate(k);
    v
}

#[test]
fn criterion_4_classical_oracle() {
    let mut c = Criterion::new(4, "unit-square Laplacian at resolution 128", 120);
    let sys = bundled_system("laplacian2d");
    let grid = build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[128, 128]).unwrap();
    let a = assemble_operator(&sys, &grid).unwrap();

    let low = smallest_k(&a, 20, 1e-8, 0).unwrap();
    let exact = square_spectrum(20);
    let worst = low.values.iter().zip(&exact).map(|(l, e)| (l - e).abs() / e).fold(0.0, f64::max);
    c.check(
        "first 20 eigenvalues within 1% of π²(p² + q²)",
        worst <= 0.01,
        format!("max relative error {worst:.2e}"),
    );

    // K = 20 leaves no counting range and no trace window; the fits use K = 400
    let s = smallest_k(&a, 400, 1e-8, 0).unwrap();
    let w = weyl_fit(&s, WEYL_RANGE).unwrap();
    c.check(
        "Weyl exponent 1.0 ± 0.1",
        (w.exponent - 1.0).abs() <= 0.1,
        format!("{:.4} (K = 400)", w.exponent),
    );
    let t = trace_exponent_fit(&heat_trace_default(&s, 200).unwrap()).unwrap();
    c.check(
        "trace exponent −1.0 ± 0.1",
        (t.exponent + 1.0).abs() <= 0.1,
        format!("{:.4} (K = 400)", t.exponent),
    );

    let oracle = 1.0 / (4.0 * PI);
    let amp = trace_amplitude(&s, 2).unwrap();
    let coef = weyl_coefficient_at(&s, WEYL_RANGE, 1.0).unwrap();
    let rec = tauberian_consistency(&s, 2, WEYL_RANGE).unwrap();
    c.check(
        "trace amplitude vs |Ω|/(4π) within 25%",
        (amp - oracle).abs() <= 0.25 * oracle,
        format!("{amp:.5} vs {oracle:.5}"),
    );
    c.check(
        "Γ(2)·counting coefficient vs |Ω|/(4π) within 25%",
        (gamma(2.0) * coef - oracle).abs() <= 0.25 * oracle,
        format!("{:.5} vs {oracle:.5}", gamma(2.0) * coef),
    );
    c.check(
        "tauberian_consistency record",
        rec.pass,
        format!("relative gap {:.4}", rec.fitted["relative_gap"]),
    );
    c.finish();
}

#[test]
fn criterion_5_heisenberg() {
    let mut c = Criterion::new(5, "Heisenberg n = 1 on a box at 24³", 900);
    let r = resolve(&RunConfig::bundled("heisenberg1")).unwrap();
    assert_eq!(r.resolution, vec![24, 24, 24]);
    assert!(r.k >= 200);
    let (report, _) = execute(&r).unwrap();
    let w = record(&report, "weyl_exponent");
    let e = w.fitted["exponent"];
    c.check(
        "Weyl exponent 2.0 ± 0.3",
        (e - 2.0).abs() <= 0.3,
        format!("{e:.4} (lowest {})", r.weyl_k),
    );
    let t = record(&report, "trace_exponent").fitted["exponent"];
    c.check("trace exponent −2.0 ± 0.3", (t + 2.0).abs() <= 0.3, format!("{t:.4} (K = {})", r.k));
    let thm2 = record(&report, "partial_sum_lower_bound");
    c.check(
        "partial-sum stabilization",
        thm2.pass,
        format!("tail median {:.4}", thm2.fitted["tail_median"]),
    );
    for name in ["heisenberg_pointwise_bound", "heisenberg_explicit_sum_bound"] {
        let rec = record(&report, name);
        let min = rec.fitted["min_ratio"];
        c.check(
            &format!("{name} for every k"),
            rec.pass && min >= 1.0,
            format!("min ratio {min:.4}"),
        );
    }
    let alpha = alpha_n(1).unwrap();
    c.check("α₁ = π²/4 to 1e-6", (alpha - PI * PI / 4.0).abs() <= 1e-6, format!("{alpha:.12}"));
    let (c1, _) = lattice_sum(1).unwrap();
    c.check("C₁ = π²/8 to 1e-8", (c1 - PI * PI / 8.0).abs() <= 1e-8, format!("{c1:.12}"));
    c.check(
        "ν̃ = 4 and |H| > 0",
        report.analysis.nu_tilde == 4 && report.analysis.h_measure.verdict == HVerdict::Positive,
        String::new(),
    );
    c.finish();
}

#[test]
fn criterion_6_grushin_2d() {
    let mut c = Criterion::new(6, "Grushin 2-D on the off-centre disc at 192²", 600);
    let r = resolve(&RunConfig::bundled("grushin2d")).unwrap();
    assert_eq!(r.resolution, vec![192, 192]);
    assert!(r.k >= 300);
    let (report, _) = execute(&r).unwrap();
    let a = &report.analysis;
    c.check(
        "condition (A) divergent",
        a.condition_a.verdict == Verdict::Divergent,
        format!("numeric {:?}", a.condition_a.numeric),
    );
    c.check(
        "|H| = 0",
        a.h_measure.verdict == HVerdict::Zero,
        format!("fractions {:?}", a.h_measure.fractions),
    );
    for (i, (x, expected, tol)) in [(0.0, -1.5, 0.25), (0.5, -1.0, 0.2)].into_iter().enumerate() {
        let rec = record(&report, &format!("diagonal_kernel[{i}]"));
        let slope = rec.fitted["exponent"];
        let node_x = rec.inputs["x0"];
        c.check(
            &format!("kernel slope at x₁ = {x}"),
            (slope - expected).abs() <= tol && (node_x - x).abs() < 0.01,
            format!("{slope:.4} at node x₁ = {node_x:.4}, expected {expected} ± {tol}"),
        );
    }
    let log = record(&report, "grushin_log_bound");
    c.check(
        "logarithmic bound",
        log.pass,
        format!("median {:.4}", log.fitted["log_ratio_median"]),
    );
    c.check(
        "k^{2/3}/λ_k decreasing",
        log.fitted["power_ratio_decreasing"] == 1.0,
        format!("slope {:.4}", log.fitted["power_ratio_slope"]),
    );
    let refused = record(&report, "euclidean_partial_sum_bound");
    c.check(
        "Euclidean partial-sum bound refused",
        refused.fitted.get("refused") == Some(&1.0),
        String::new(),
    );
    c.finish();
}

#[test]
fn criterion_7_grushin_3d() {
    let mut c = Criterion::new(7, "Grushin 3-D on a ball at 32³", 1200);
    let r = resolve(&RunConfig::bundled("grushin3d")).unwrap();
    assert_eq!(r.resolution, vec![32, 32, 32]);
    assert!(r.k >= 150);
    let (report, _) = execute(&r).unwrap();
    let ca = &report.analysis.condition_a;
    c.check(
        "condition (A) convergent",
        ca.verdict == Verdict::Convergent && ca.numeric == Verdict::Convergent,
        format!("estimate {:.4}", ca.estimate),
    );
    let thm5 = record(&report, "euclidean_partial_sum_bound");
    c.check(
        "partial-sum bound in the ambient dimension",
        thm5.pass && !thm5.fitted.contains_key("refused"),
        String::new(),
    );
    let thm4 = record(&report, "gap_upper_bound");
    c.check("upper bound in the ambient dimension", thm4.pass, String::new());
    let g = record(&report, "growth_exponent").fitted["exponent"];
    c.check("growth exponent 2/3 ± 0.15", (g - 2.0 / 3.0).abs() <= 0.15, format!("{g:.4}"));
    c.finish();
}

#[test]
fn criterion_8_property_suite() {
    let mut c = Criterion::new(8, "property suite", 300);
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let mut fields: Vec<VectorField> = ["grushin3d", "heisenberg1", "example82"]
        .iter()
        .flat_map(|n| bundled_system(n).fields().to_vec())
        .filter(VectorField::is_polynomial)
        .collect();
    let first = fields.len();
    for i in 0..first {
        for j in i + 1..first {
            fields.push(bracket(&fields[i], &fields[j]).unwrap());
        }
    }
    let mut anti = true;
    let mut jacobi = true;
    for x in &fields {
        for y in &fields {
            anti &= bracket(x, y).unwrap().add(&bracket(y, x).unwrap()).is_zero();
            for z in &fields {
                let t = [(x, y, z), (y, z, x), (z, x, y)].map(|(a, b, c)| bracket(a, &bracket(b, c).unwrap()).unwrap());
                jacobi &= t[0].add(&t[1]).add(&t[2]).is_zero();
            }
        }
    }
    c.check(
        "bracket antisymmetry and Jacobi, exact",
        anti && jacobi,
        format!("{} polynomial fields", fields.len()),
    );

    // the bump coefficients have no canonical form, so their identities are checked pointwise
    let bump = bundled_system("example82");
    let f = bump.fields();
    let mut worst = 0.0f64;
    for p in [
        [1.6, 0.3, -0.5],
        [0.2, 0.1, 0.4],
        [0.3, -0.2, -1.3],
        [1.2, 1.1, 0.2],
        [-1.0, 1.3, -0.7],
    ] {
        for (a, b) in (0..3).flat_map(|i| (0..3).map(move |j| (i, j))) {
            let (ab, ba) = (
                bracket(&f[a], &f[b]).unwrap().eval_f64(&p),
                bracket(&f[b], &f[a]).unwrap().eval_f64(&p),
            );
            let scale = ab.iter().map(|v| v.abs()).fold(1e-300, f64::max);
            worst = worst.max(ab.iter().zip(&ba).map(|(u, v)| (u + v).abs()).fold(0.0, f64::max) / scale);
        }
        let t: Vec<Vec<f64>> = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
            .iter()
            .map(|&(a, b, c)| bracket(&f[a], &bracket(&f[b], &f[c]).unwrap()).unwrap().eval_f64(&p))
            .collect();
        let scale = t.iter().flatten().map(|v| v.abs()).fold(1e-300, f64::max);
        worst = worst.max((0..3).map(|k| (t[0][k] + t[1][k] + t[2][k]).abs()).fold(0.0, f64::max) / scale);
    }
    c.check(
        "bump-coefficient brackets, pointwise",
        worst <= 1e-9,
        format!("max relative defect {worst:.2e}"),
    );

    let b = bundled::get("heisenberg1").unwrap();
    let grid = build_grid(&b.domain, &[14, 14, 14]).unwrap();
    let a = assemble_operator(&b.system, &grid).unwrap();
    let sym = a.asymmetry() == 0.0;
    let probe: Vec<f64> = (0..a.size()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut ap = vec![0.0; a.size()];
    a.apply(&probe, &mut ap);
    let quad: f64 = probe.iter().zip(&ap).map(|(x, y)| x * y).sum();
    c.check(
        "operator exactly symmetric and PSD",
        sym && quad >= 0.0,
        format!("xᵀAx = {quad:.4e}"),
    );

    let opts = EigenOptions {
        tol: 1e-9,
        seed: 11,
        ..EigenOptions::new(60)
    };
    let s1 = smallest_k_with(&a, &opts).unwrap();
    let s2 = smallest_k_with(&a, &opts).unwrap();
    let bits = s1.values.iter().zip(&s2.values).all(|(x, y)| x.to_bits() == y.to_bits());
    c.check("solver bit-identical reruns", bits, String::new());
    let lob = smallest_k_with(
        &a,
        &EigenOptions {
            method: Method::Lobpcg,
            ..opts.clone()
        },
    )
    .unwrap();
    let agree = s1
        .values
        .iter()
        .zip(&lob.values)
        .map(|(x, y)| (x - y).abs() / x)
        .fold(0.0, f64::max);
    c.check("Lanczos and LOBPCG agree", agree <= 1e-6, format!("{agree:.2e}"));

    let v = s1.vectors.as_ref().unwrap();
    let mut worst = 0.0f64;
    for i in 0..v.len() {
        for j in 0..=i {
            let d: f64 = v[i].iter().zip(&v[j]).map(|(x, y)| x * y).sum();
            worst = worst.max((d - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    c.check("eigenvector orthonormality ≤ 1e-6", worst <= 1e-6, format!("{worst:.2e}"));

    let sg = s1.clone().with_grid(&grid);
    let defect = kernel_trace_defect(&sg, &log_grid(1e-3, 1.0, 30)).unwrap();
    c.check("trace/kernel identity ≤ 1e-10", defect <= 1e-10, format!("{defect:.2e}"));

    let scale = 2.5f64;
    let scaled = b.system.with_scaled_field(0, &q(5, 2)).with_scaled_field(1, &q(5, 2));
    let sa = smallest_k_with(&assemble_operator(&scaled, &grid).unwrap(), &opts).unwrap();
    let cov = s1
        .values
        .iter()
        .zip(&sa.values)
        .map(|(x, y)| (y / (scale * scale * x) - 1.0).abs())
        .fold(0.0, f64::max);
    c.check("c²-scaling of eigenvalues", cov <= 1e-6, format!("{cov:.2e}"));

    let lap = bundled_system("laplacian2d");
    let g2 = build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[48, 48]).unwrap();
    let base = smallest_k(&assemble_operator(&lap, &g2).unwrap(), 300, 1e-9, 0).unwrap();
    let big = Spectrum::from_values(base.values.iter().map(|x| 9.0 * x).collect());
    let (w0, w1) = (weyl_fit(&base, WEYL_RANGE).unwrap(), weyl_fit(&big, WEYL_RANGE).unwrap());
    let (t0, t1) = (
        trace_exponent_fit(&heat_trace_default(&base, 200).unwrap()).unwrap(),
        trace_exponent_fit(&heat_trace_default(&big, 200).unwrap()).unwrap(),
    );
    let drift = (w0.exponent - w1.exponent).abs().max((t0.exponent - t1.exponent).abs());
    c.check("fitted exponents scale invariant to 1e-6", drift <= 1e-6, format!("{drift:.2e}"));

    let mut worst_gap = 0.0f64;
    for nu in 2..=6usize {
        let s = Spectrum::from_values((1..=100_000).map(|j| (j as f64 / 1.7).powf(2.0 / nu as f64)).collect());
        worst_gap = worst_gap.max(tauberian_consistency(&s, nu, WEYL_RANGE).unwrap().fitted["relative_gap"]);
    }
    c.check(
        "synthetic power-law Tauberian duality within 3%",
        worst_gap <= 0.03,
        format!("worst gap {worst_gap:.4}"),
    );

    let (an, _) = fields_analyze(&resolve(&RunConfig::bundled("laplacian2d")).unwrap()).unwrap();
    c.check("laplacian2d ν̃ = n", an.nu_tilde == 2 && an.metivier_holds, String::new());
    c.finish();
}
