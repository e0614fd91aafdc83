//! Short-time diagonal heat kernel on and off the degenerate line x1 = 0,
//! and the logarithmic lower bound on the Grushin spectrum.

use subelliptic::pipeline::{self, RunConfig};
use subelliptic::spectral::{diagonal_kernel, grushin_log_bound};

fn main() {
    let mut cfg = RunConfig::bundled("grushin2d");
    cfg.resolution = Some(vec![96]);
    cfg.k = Some(150);
    let r = pipeline::resolve(&cfg).expect("config");
    let (grid, a) = pipeline::assemble(&r).expect("operator");
    let s = pipeline::solve(&r, &grid, &a).expect("converged");
    println!("lambda_1 = {:.4}, lambda_150 = {:.4}", s.values[0], s.values[149]);

    for p in [[0.0, 0.0], [0.5, 0.0]] {
        let node = grid.nearest_node(&p).expect("inside");
        match diagonal_kernel(&s, node, 60).and_then(|k| k.exponent_fit()) {
            Ok((slope, _)) => println!("h(t, x, x) at {:?}: slope {slope:.3}", grid.coords(node)),
            Err(e) => println!("at {p:?}: {e}"),
        }
    }
    let rec = grushin_log_bound(&s).expect("enough eigenvalues");
    println!("log bound pass = {} {:?}", rec.pass, rec.fitted);
}
