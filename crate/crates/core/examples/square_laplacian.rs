//! Lowest Dirichlet eigenvalues of the unit square against pi^2 (p^2 + q^2),
//! computed by both solvers.

use std::time::Instant;

use subelliptic::assemble::assemble_operator;
use subelliptic::bundled;
use subelliptic::eigen::{smallest_k_with, EigenOptions, Method};
use subelliptic::geometry::build_grid;

fn main() {
    let b = bundled::get("laplacian2d").expect("bundled");
    let grid = build_grid(&b.domain, &[128, 128]).expect("grid");
    let a = assemble_operator(&b.system, &grid).expect("operator");

    let mut exact: Vec<f64> = (1..12)
        .flat_map(|p| (1..12).map(move |q| std::f64::consts::PI.powi(2) * (p * p + q * q) as f64))
        .collect();
    exact.sort_by(f64::total_cmp);

    for method in [Method::ShiftInvert, Method::Lobpcg] {
        let t = Instant::now();
        let opts = EigenOptions {
            method,
            keep_vectors: false,
            ..EigenOptions::new(20)
        };
        let s = smallest_k_with(&a, &opts).expect("converged");
        let worst = s.values.iter().zip(&exact).map(|(l, e)| (l - e).abs() / e).fold(0.0, f64::max);
        println!("{method:?}: {:.3?}, max relative deviation {worst:.2e}", t.elapsed());
        for (k, (l, e)) in s.values.iter().zip(&exact).take(6).enumerate() {
            println!("  {:2}  {l:10.4}  {e:10.4}", k + 1);
        }
    }
}
