//! Brackets, pointwise homogeneous dimension and the volume polynomial for
//! the Grushin and Heisenberg systems, all in exact arithmetic.

use num_rational::BigRational;
use subelliptic::bundled;
use subelliptic::fields::{
    bracket, capital_lambda_exact, enumerate_commutators, format_rational, nu_via_determinants, point_indices, Value,
};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn main() {
    let grushin = bundled::grushin2d();
    let [x1, x2] = [&grushin.fields()[0], &grushin.fields()[1]];
    let b = bracket(x1, x2).expect("polynomial fields");
    let comps: Vec<String> = b
        .eval(&[q(1, 3), q(2, 1)])
        .iter()
        .map(|v| match v {
            Value::Exact(r) => format_rational(r),
            Value::Approx(f) => format!("{f}"),
        })
        .collect();
    println!("[X1, X2] at (1/3, 2) = ({})", comps.join(", "));

    let basis = enumerate_commutators(&grushin, grushin.hormander_bound());
    for x in [[q(0, 1), q(1, 2)], [q(1, 2), q(0, 1)]] {
        let p = point_indices(&basis, &x);
        let alt = nu_via_determinants(&basis, &x).expect("spans");
        println!(
            "grushin2d x = ({}, {}): layers {:?}, nu = {} (determinants: {alt})",
            format_rational(&x[0]),
            format_rational(&x[1]),
            p.layer_dims,
            p.nu
        );
    }

    let x = [q(-1, 3), q(5, 7)];
    let r = q(1, 4);
    let lambda = capital_lambda_exact(&basis, &x, &r).expect("polynomial system");
    let closed = q(2, 1) * (q(1, 3) * &r * &r + &r * &r * &r);
    println!(
        "Lambda(x, 1/4) = {} ; 2(|x1| r^2 + r^3) = {}",
        format_rational(&lambda),
        format_rational(&closed)
    );

    let heis = bundled::heisenberg1();
    let hb = enumerate_commutators(&heis, heis.hormander_bound());
    let p = point_indices(&hb, &[q(1, 5), q(-2, 3), q(7, 2)]);
    println!(
        "heisenberg1: layers {:?}, nu = {}, Q = {}",
        p.layer_dims,
        p.nu,
        heis.hormander_bound()
    );
}
