#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use subelliptic::fields::{FieldSystem, Polynomial, VectorField};

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Rational in `[-2, 2]` with denominator at most 12.
pub fn rational() -> impl Strategy<Value = BigRational> {
    (-24i64..=24, 1i64..=12).prop_map(|(p, d)| q(p, d.max(1)) / BigRational::from_integer(2.into()))
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec(rational(), n)
}

/// Polynomial with up to four terms of degree at most two per variable.
pub fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(((-5i64..=5), proptest::collection::vec(0u32..=2, n)), 0..=4)
        .prop_map(move |terms| Polynomial::from_terms(n, terms.into_iter().map(|(c, e)| (q(c, 1), e))).expect("well formed"))
}

pub fn field(n: usize) -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(polynomial(n), n).prop_map(VectorField::from_polys)
}

pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

pub fn bundled_system(name: &str) -> FieldSystem {
    subelliptic::bundled::get(name).expect("bundled").system
}
