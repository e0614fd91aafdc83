//! Lattice and theta/sinh constants entering the explicit Heisenberg lower
//! bounds, with the bounds evaluated for a unit-volume domain.

use subelliptic::spectral::quadrature::{alpha, lattice_constant};
use subelliptic::spectral::{hansson_laptev_constant, heisenberg_explicit_constant};

fn main() {
    let pi2 = std::f64::consts::PI.powi(2);
    let (gk, romberg) = alpha(1).expect("quadrature converged");
    println!(
        "alpha_1: {gk:.12} (Gauss-Kronrod), {romberg:.12} (Romberg), pi^2/4 = {:.12}",
        pi2 / 4.0
    );
    for n in 1..=3 {
        let (c, err) = lattice_constant(n, 1e-10, 10_000_000).expect("tail certified");
        println!("C_{n} = {c:.12} +- {err:.1e}");
    }
    println!("pi^2/8 = {:.12}", pi2 / 8.0);
    for n in 1..=2 {
        let hl = hansson_laptev_constant(n, 1.0).expect("constant");
        let ex = heisenberg_explicit_constant(n, 1.0).expect("constant");
        println!("n = {n}: lambda_k >= {hl:.4} k^(1/(n+1)) ; sum_(j<=k) lambda_j >= {ex:.4} k^(1+1/(n+1))");
    }
}
