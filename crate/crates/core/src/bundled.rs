//! The five built-in field systems with their default domains and run sizes.

use num_rational::BigRational;
use num_traits::One;

use crate::fields::{Coefficient, FieldSystem, Polynomial, VectorField};
use crate::geometry::{DomainSpec, Verdict};

pub const NAMES: [&str; 5] = ["laplacian2d", "grushin2d", "grushin3d", "heisenberg1", "example82"];

/// A named system with the values it is known to have.
#[derive(Clone, Debug)]
pub struct Bundled {
    pub name: &'static str,
    pub system: FieldSystem,
    pub domain: DomainSpec,
    pub resolution: usize,
    pub k: usize,
    pub nu_tilde: usize,
    /// Known answer for the reciprocal-determinant integrability test.
    pub condition_a: Option<Verdict>,
    /// Box on which the positive-measure test for H is run, if not the domain itself.
    pub h_region: Option<DomainSpec>,
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn c(n: usize, v: BigRational) -> Polynomial {
    Polynomial::constant(n, v)
}

fn x(n: usize, k: usize) -> Polynomial {
    Polynomial::var(n, k)
}

pub fn laplacian2d() -> FieldSystem {
    FieldSystem::new(2, vec![VectorField::coordinate(2, 0), VectorField::coordinate(2, 1)], 1).expect("valid")
}

/// `∂₁`, `x₁∂₂`.
pub fn grushin2d() -> FieldSystem {
    let f2 = VectorField::from_polys(vec![Polynomial::zero(2), x(2, 0)]);
    FieldSystem::new(2, vec![VectorField::coordinate(2, 0), f2], 2).expect("valid")
}

/// `∂_j`, `x_j ∂_n` for `j < n`.
pub fn grushin(n: usize) -> FieldSystem {
    let mut fields: Vec<VectorField> = (0..n - 1).map(|j| VectorField::coordinate(n, j)).collect();
    for j in 0..n - 1 {
        let mut comps = vec![Polynomial::zero(n); n];
        comps[n - 1] = x(n, j);
        fields.push(VectorField::from_polys(comps));
    }
    FieldSystem::new(n, fields, 2).expect("valid")
}

/// `∂_x + 2y∂_z`, `∂_y − 2x∂_z` on the first Heisenberg group.
pub fn heisenberg1() -> FieldSystem {
    let two = c(3, rat(2, 1));
    let a = VectorField::from_polys(vec![Polynomial::one(3), Polynomial::zero(3), &two * &x(3, 1)]);
    let b = VectorField::from_polys(vec![Polynomial::zero(3), Polynomial::one(3), -&(&two * &x(3, 0))]);
    FieldSystem::new(3, vec![a, b], 2).expect("valid")
}

/// Contact fields plus a third field `(φ₁+φ₂+φ₃)∂₃` built from flat bumps that
/// vanish exactly on the cylinder `r ≤ 3/2, −1 ≤ x₃ ≤ 0`.
pub fn example82() -> FieldSystem {
    let n = 3;
    let half = c(n, rat(1, 2));
    let x1 = VectorField::from_polys(vec![Polynomial::one(n), Polynomial::zero(n), -&(&half * &x(n, 1))]);
    let x2 = VectorField::from_polys(vec![Polynomial::zero(n), Polynomial::one(n), &half * &x(n, 0)]);
    let r2 = &(&x(n, 0) * &x(n, 0)) + &(&x(n, 1) * &x(n, 1));
    let phi1 = Coefficient::log_bump_of(
        &r2 - &c(n, rat(9, 4)),
        Coefficient::sum(
            Coefficient::Sqrt(Box::new(Coefficient::Poly(r2.clone()))),
            Coefficient::Poly(c(n, rat(-3, 2))),
        ),
    );
    let phi2 = Coefficient::log_bump(&x(n, 2));
    let phi3 = Coefficient::log_bump(&(&(-&x(n, 2)) - &Polynomial::one(n)));
    let phi = Coefficient::sum(Coefficient::sum(phi1, phi2), phi3);
    let x3 = VectorField::new(vec![Coefficient::zero(n), Coefficient::zero(n), phi]);
    FieldSystem::new(n, vec![x1, x2, x3], 2).expect("valid")
}

/// Disc of radius 1 about (0.3, 0), in a box whose 192-lattice contains the
/// line `x₁ = 0` and the axis `x₂ = 0`.
pub fn grushin2d_domain() -> DomainSpec {
    let ball = DomainSpec::ball(&[0.3, 0.0], 1.0);
    DomainSpec::new(vec![(-0.748, 1.364), (-1.056, 1.056)], ball.mask().cloned()).expect("valid")
}

pub fn grushin3d_domain() -> DomainSpec {
    DomainSpec::ball(&[0.3, 0.2, 0.0], 1.0)
}

/// `Σ (x_i / 2.2)^16 < 1` inside `[−2.3, 2.3]³`: a rounded cube containing `[−2, 2]³`.
pub fn example82_domain() -> DomainSpec {
    let n = 3;
    let mut g = c(n, -BigRational::one());
    let s = c(n, rat(5, 11));
    for k in 0..n {
        let t = &s * &x(n, k);
        let t2 = &t * &t;
        let t4 = &t2 * &t2;
        let t8 = &t4 * &t4;
        g = &g + &(&t8 * &t8);
    }
    DomainSpec::new(vec![(-2.3, 2.3); n], Some(g)).expect("valid")
}

pub fn get(name: &str) -> Option<Bundled> {
    let b = match name {
        "laplacian2d" => Bundled {
            name: "laplacian2d",
            system: laplacian2d(),
            domain: DomainSpec::cube(2, 0.0, 1.0),
            resolution: 128,
            k: 400,
            nu_tilde: 2,
            condition_a: Some(Verdict::Convergent),
            h_region: None,
        },
        "grushin2d" => Bundled {
            name: "grushin2d",
            system: grushin2d(),
            domain: grushin2d_domain(),
            resolution: 192,
            k: 300,
            nu_tilde: 3,
            condition_a: Some(Verdict::Divergent),
            h_region: None,
        },
        "grushin3d" => Bundled {
            name: "grushin3d",
            system: grushin(3),
            domain: grushin3d_domain(),
            resolution: 32,
            k: 200,
            nu_tilde: 4,
            condition_a: Some(Verdict::Convergent),
            h_region: None,
        },
        "heisenberg1" => Bundled {
            name: "heisenberg1",
            system: heisenberg1(),
            domain: DomainSpec::cube(3, -1.0, 1.0),
            resolution: 24,
            k: 1200,
            nu_tilde: 4,
            condition_a: None,
            h_region: None,
        },
        "example82" => Bundled {
            name: "example82",
            system: example82(),
            domain: example82_domain(),
            resolution: 24,
            k: 120,
            nu_tilde: 4,
            condition_a: None,
            h_region: Some(DomainSpec::cube(3, -2.0, 2.0)),
        },
        _ => return None,
    };
    Some(b)
}

fn pts(raw: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
    raw.iter().map(|p| p.iter().map(|&(a, b)| rat(a, b)).collect()).collect()
}

/// Rational points on and off the set where `ν` attains `ν̃`, ten of each
/// (no off-set points for the constant-index systems).
pub fn designated_points(name: &str) -> Option<(Vec<Vec<BigRational>>, Vec<Vec<BigRational>>)> {
    let r = match name {
        "laplacian2d" => (
            pts(&[
                &[(1, 2), (1, 2)],
                &[(1, 10), (9, 10)],
                &[(1, 3), (2, 3)],
                &[(3, 4), (1, 8)],
                &[(1, 100), (1, 100)],
                &[(99, 100), (1, 2)],
                &[(2, 5), (3, 5)],
                &[(1, 7), (5, 7)],
                &[(5, 6), (5, 6)],
                &[(1, 9), (4, 9)],
            ]),
            vec![],
        ),
        "grushin2d" => (
            pts(&[
                &[(0, 1), (0, 1)],
                &[(0, 1), (5, 1)],
                &[(0, 1), (1, 2)],
                &[(0, 1), (-1, 2)],
                &[(0, 1), (9, 10)],
                &[(0, 1), (-9, 10)],
                &[(0, 1), (1, 3)],
                &[(0, 1), (-2, 7)],
                &[(0, 1), (1, 100)],
                &[(0, 1), (-3, 4)],
            ]),
            pts(&[
                &[(1, 1), (0, 1)],
                &[(2, 1), (0, 1)],
                &[(1, 2), (0, 1)],
                &[(-1, 2), (1, 3)],
                &[(1, 100), (1, 2)],
                &[(-1, 100), (-1, 2)],
                &[(13, 10), (0, 1)],
                &[(3, 5), (-3, 5)],
                &[(1, 1000), (0, 1)],
                &[(-7, 10), (1, 10)],
            ]),
        ),
        "grushin3d" => (
            pts(&[
                &[(0, 1), (0, 1), (0, 1)],
                &[(0, 1), (0, 1), (1, 2)],
                &[(0, 1), (0, 1), (-1, 2)],
                &[(0, 1), (0, 1), (9, 10)],
                &[(0, 1), (0, 1), (-9, 10)],
                &[(0, 1), (0, 1), (1, 3)],
                &[(0, 1), (0, 1), (-1, 7)],
                &[(0, 1), (0, 1), (3, 4)],
                &[(0, 1), (0, 1), (-3, 4)],
                &[(0, 1), (0, 1), (1, 100)],
            ]),
            pts(&[
                &[(1, 2), (0, 1), (0, 1)],
                &[(0, 1), (1, 2), (0, 1)],
                &[(1, 100), (0, 1), (1, 2)],
                &[(0, 1), (-1, 100), (-1, 2)],
                &[(1, 3), (1, 3), (1, 3)],
                &[(-1, 2), (1, 5), (0, 1)],
                &[(1, 1), (1, 1), (0, 1)],
                &[(3, 4), (-1, 4), (1, 4)],
                &[(1, 1000), (1, 1000), (0, 1)],
                &[(-1, 5), (0, 1), (-9, 10)],
            ]),
        ),
        "heisenberg1" => (
            pts(&[
                &[(0, 1), (0, 1), (0, 1)],
                &[(1, 2), (0, 1), (0, 1)],
                &[(0, 1), (1, 2), (0, 1)],
                &[(0, 1), (0, 1), (1, 2)],
                &[(-1, 3), (2, 3), (1, 4)],
                &[(9, 10), (-9, 10), (9, 10)],
                &[(1, 7), (1, 7), (-5, 7)],
                &[(-1, 2), (-1, 2), (-1, 2)],
                &[(1, 100), (-1, 100), (0, 1)],
                &[(3, 4), (1, 8), (-1, 8)],
            ]),
            vec![],
        ),
        "example82" => (
            pts(&[
                &[(0, 1), (0, 1), (-1, 2)],
                &[(0, 1), (0, 1), (0, 1)],
                &[(0, 1), (0, 1), (-1, 1)],
                &[(1, 1), (1, 2), (-1, 4)],
                &[(3, 2), (0, 1), (-1, 2)],
                &[(0, 1), (-3, 2), (-3, 4)],
                &[(-1, 1), (-1, 1), (-1, 10)],
                &[(9, 10), (6, 5), (-9, 10)],
                &[(1, 2), (-1, 3), (-1, 3)],
                &[(-6, 5), (1, 2), (-1, 2)],
            ]),
            pts(&[
                &[(0, 1), (0, 1), (1, 2)],
                &[(0, 1), (0, 1), (-3, 2)],
                &[(2, 1), (0, 1), (-1, 2)],
                &[(1, 1), (3, 2), (-1, 2)],
                &[(0, 1), (0, 1), (1, 1)],
                &[(0, 1), (0, 1), (-19, 10)],
                &[(-7, 4), (0, 1), (0, 1)],
                &[(1, 2), (1, 2), (1, 10)],
                &[(1, 1), (-1, 1), (3, 2)],
                &[(0, 1), (19, 10), (-1, 1)],
            ]),
        ),
        _ => return None,
    };
    Some(r)
}
