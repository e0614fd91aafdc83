//! Adaptive Gauss-Kronrod and Romberg integration, and the lattice series
//! behind the Heisenberg counting constant.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (estimate, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let s = f(c - h * x) + f(c + h * x);
        k += w * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive G7-K15 on `[a, b]`. Returns `None` if the error estimate is not
/// below `rel · |I|` within `max_panels` subdivisions.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64, max_panels: usize) -> Option<f64> {
    let mut panels = vec![(a, b, gk15(&f, a, b))];
    loop {
        let total: f64 = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= rel * total.abs() || err < 1e-300 {
            return Some(total);
        }
        if panels.len() >= max_panels {
            return None;
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gk15(&f, lo, mid)));
        panels.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// Romberg extrapolation of the trapezoid rule.
pub fn romberg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64, max_levels: usize) -> Option<f64> {
    let mut prev = vec![0.5 * (b - a) * (f(a) + f(b))];
    let mut n = 1usize;
    for level in 1..=max_levels {
        let h = (b - a) / (2 * n) as f64;
        let mid: f64 = (0..n).map(|i| f(a + (2 * i + 1) as f64 * h)).sum();
        let mut row = vec![0.5 * prev[0] + h * mid];
        let mut p4 = 1.0;
        for j in 1..=level {
            p4 *= 4.0;
            row.push(row[j - 1] + (row[j - 1] - prev[j - 1]) / (p4 - 1.0));
        }
        n *= 2;
        let best = row[level];
        if level >= 4 && (best - prev[level - 1]).abs() <= rel * best.abs() {
            return Some(best);
        }
        prev = row;
    }
    None
}

/// `(θ / sinh θ)^n`, continuous at zero.
pub fn theta_over_sinh(theta: f64, n: u32) -> f64 {
    let q = if theta.abs() < 1e-4 {
        1.0 - theta * theta / 6.0
    } else {
        theta / theta.sinh()
    };
    q.powi(n as i32)
}

/// `∫₀^∞ (θ/sinh θ)^n dθ` by both rules. The range is cut at 60, where the
/// integrand is below `(120 e^{-60})^n`.
pub fn alpha(n: u32) -> Option<(f64, f64)> {
    let f = |t: f64| theta_over_sinh(t, n);
    let gk = gauss_kronrod(f, 0.0, 60.0, 1e-12, 4096)?;
    let rb = romberg(f, 0.0, 60.0, 1e-12, 22)?;
    Some((gk, rb))
}

/// Summand of `Σ_s C(s+n−1, n−1) (2s+n)^{-(n+1)}`, the lattice sum over
/// `j₁..j_n ≥ 0` grouped by `s = Σ j`.
fn lattice_term(s: f64, n: u32) -> f64 {
    let mut binom = 1.0;
    for i in 1..n {
        binom *= (s + i as f64) / i as f64;
    }
    binom * (2.0 * s + n as f64).powi(-(n as i32 + 1))
}

/// `∫_S^∞` of the summand, via `s = S/u`.
fn lattice_tail_integral(from: f64, n: u32) -> Option<f64> {
    gauss_kronrod(|u: f64| lattice_term(from / u, n) * from / (u * u), 0.0, 1.0, 1e-13, 2048)
}

/// The lattice series with a certified truncation error: the summand is
/// decreasing past the cut `S`, so the tail lies between the integrals from
/// `S + 1` and from `S`. Returns (value, error bound).
pub fn lattice_constant(n: u32, max_error: f64, max_terms: u64) -> Option<(f64, f64)> {
    let mut cut: u64 = 1024;
    let mut partial = 0.0;
    let mut next = 0u64;
    loop {
        // Kahan-summed partial sum up to and including `cut`
        let mut comp = 0.0;
        while next <= cut {
            let y = lattice_term(next as f64, n) - comp;
            let t = partial + y;
            comp = (t - partial) - y;
            partial = t;
            next += 1;
        }
        let upper = lattice_tail_integral(cut as f64, n)?;
        let lower = lattice_tail_integral(cut as f64 + 1.0, n)?;
        let half = 0.5 * (upper - lower).abs();
        if half <= max_error {
            return Some((partial + 0.5 * (upper + lower), half));
        }
        if cut >= max_terms {
            return None;
        }
        cut = (cut * 2).min(max_terms);
    }
}
