//! Heat trace, counting function and their power-law fits for a closed-form
//! spectrum and for the planar Heisenberg-type box at a small size.

use subelliptic::eigen::Spectrum;
use subelliptic::pipeline::{self, RunConfig};
use subelliptic::spectral::{heat_trace_default, trace_exponent_fit, weyl_fit, WEYL_RANGE};

fn report(label: &str, s: &Spectrum) {
    let w = weyl_fit(s, WEYL_RANGE).expect("enough eigenvalues");
    print!("{label}: counting exponent {:.3}", w.exponent);
    match heat_trace_default(s, 200).and_then(|t| trace_exponent_fit(&t)) {
        Ok(f) => println!(", trace exponent {:.3}", f.exponent),
        Err(e) => println!(", trace fit unavailable ({e})"),
    }
}

fn main() {
    let synthetic = Spectrum::from_values((1..=100_000).map(|j| (j as f64).powf(2.0 / 3.0)).collect());
    report("lambda_j = j^(2/3)", &synthetic);

    let mut cfg = RunConfig::bundled("heisenberg1");
    cfg.resolution = Some(vec![16]);
    cfg.k = Some(200);
    let r = pipeline::resolve(&cfg).expect("config");
    let (grid, a) = pipeline::assemble(&r).expect("operator");
    let s = pipeline::solve(&r, &grid, &a).expect("converged");
    report("heisenberg1 at 16^3", &s);
}
