mod common;

use common::{bundled_system, q};
use num_rational::BigRational;
use subelliptic::assemble::{assemble_operator, discretize_field};
use subelliptic::bundled;
use subelliptic::fields::{
    bracket, capital_lambda, capital_lambda_exact, enumerate_commutators, lambda_i, metivier_condition_check, metivier_index,
    nu_via_determinants, point_indices, FieldSystem, Polynomial, Value, VectorField,
};
use subelliptic::geometry::{
    build_grid, characteristic_check, condition_a_integral, measure_h, ConditionAOptions, DomainSpec, HVerdict, Verdict,
};

fn exact(v: &[Value]) -> Vec<BigRational> {
    v.iter()
        .map(|x| match x {
            Value::Exact(r) => r.clone(),
            Value::Approx(f) => panic!("inexact {f}"),
        })
        .collect()
}

fn z() -> BigRational {
    q(0, 1)
}

#[test]
fn bracket_examples() {
    let dx = VectorField::coordinate(2, 0);
    let dy = VectorField::coordinate(2, 1);
    assert!(bracket(&dx, &dy).unwrap().is_zero());

    let g = bundled_system("grushin2d");
    let b = bracket(&g.fields()[0], &g.fields()[1]).unwrap();
    assert_eq!(b, dy);

    let h = bundled_system("heisenberg1");
    let b = bracket(&h.fields()[0], &h.fields()[1]).unwrap();
    assert_eq!(exact(&b.eval(&[q(3, 7), q(-1, 2), q(5, 1)])), vec![z(), z(), q(-4, 1)]);
}

#[test]
fn enumeration_examples() {
    let g = bundled_system("grushin2d");
    let basis = enumerate_commutators(&g, 2);
    let deg1: Vec<_> = basis.of_degree(1).map(|e| e.field.clone()).collect();
    assert_eq!(deg1, g.fields().to_vec());
    let x = [q(2, 3), q(1, 5)];
    let mut seen_up = false;
    let mut seen_down = false;
    for e in basis.of_degree(2) {
        if e.zero {
            assert_eq!(e.word[0], e.word[1]);
            continue;
        }
        let v = exact(&e.field.eval(&x));
        seen_up |= v == vec![z(), q(1, 1)];
        seen_down |= v == vec![z(), q(-1, 1)];
    }
    assert!(seen_up && seen_down);

    let single = FieldSystem::new(1, vec![VectorField::coordinate(1, 0)], 3).unwrap();
    let b = enumerate_commutators(&single, 3);
    assert!(b.entries().iter().filter(|e| e.degree >= 2).all(|e| e.zero));
    assert!(b.max_degree() <= 3);

    let h = bundled_system("heisenberg1");
    let hb = enumerate_commutators(&h, 2);
    assert!(hb
        .of_degree(2)
        .any(|e| exact(&e.field.eval(&[z(), z(), z()])) == vec![z(), z(), q(-4, 1)]));
}

#[test]
fn determinant_and_volume_examples() {
    let g = bundled_system("grushin2d");
    let basis = enumerate_commutators(&g, 2);
    let y1 = basis.find(&[0]).unwrap();
    let y2 = basis.find(&[1]).unwrap();
    let y3 = basis.find(&[0, 1]).unwrap();
    assert_eq!(lambda_i(&basis, &[y1, y2], &[q(2, 1), z()]), Value::Exact(q(2, 1)));
    assert_eq!(lambda_i(&basis, &[y1, y1], &[q(2, 1), q(3, 1)]), Value::Exact(z()));
    for x in [[z(), z()], [q(-5, 3), q(7, 2)]] {
        assert_eq!(lambda_i(&basis, &[y1, y3], &x), Value::Exact(q(1, 1)));
    }
    assert_eq!(capital_lambda_exact(&basis, &[z(), z()], &q(1, 2)).unwrap(), q(1, 4));
    let lam = capital_lambda(&basis, &[q(1, 2), z()], 0.3);
    assert!((lam - 2.0 * (0.5 * 0.09 + 0.027)).abs() < 1e-12);

    let single = FieldSystem::new(1, vec![VectorField::coordinate(1, 0)], 1).unwrap();
    let sb = enumerate_commutators(&single, 1);
    assert_eq!(capital_lambda_exact(&sb, &[q(1, 3)], &q(2, 7)).unwrap(), q(2, 7));
}

#[test]
fn pointwise_index_examples() {
    let g = bundled_system("grushin2d");
    let basis = enumerate_commutators(&g, 2);
    let p = point_indices(&basis, &[q(1, 1), z()]);
    assert_eq!((p.layer_dims.clone(), p.nu), (vec![2, 2], 2));
    let p = point_indices(&basis, &[z(), q(5, 1)]);
    assert_eq!((p.layer_dims.clone(), p.nu), (vec![1, 2], 3));
    assert_eq!(nu_via_determinants(&basis, &[q(1, 1), z()]).unwrap(), 2);
    assert_eq!(nu_via_determinants(&basis, &[z(), z()]).unwrap(), 3);

    let h = bundled_system("heisenberg1");
    let hb = enumerate_commutators(&h, 2);
    for x in [[z(), z(), z()], [q(9, 4), q(-1, 3), q(2, 1)]] {
        let p = point_indices(&hb, &x);
        assert_eq!((p.layer_dims.clone(), p.nu), (vec![2, 3], 4));
        assert_eq!(nu_via_determinants(&hb, &x).unwrap(), 4);
    }

    let e = bundled_system("example82");
    let eb = enumerate_commutators(&e, 2);
    assert_eq!(point_indices(&eb, &[z(), z(), q(-1, 2)]).nu, 4);
    assert_eq!(point_indices(&eb, &[z(), z(), q(1, 2)]).nu, 3);
}

#[test]
fn metivier_examples() {
    let g = bundled_system("grushin2d");
    let basis = enumerate_commutators(&g, 2);
    let samples: Vec<Vec<BigRational>> = (-3..=3).flat_map(|a| (-2..=2).map(move |b| vec![q(a, 4), q(b, 3)])).collect();
    let m = metivier_index(&basis, &samples).unwrap();
    assert_eq!(m.nu_tilde, 3);
    for (x, &f) in samples.iter().zip(&m.h_flags) {
        assert_eq!(f, x[0] == z());
    }
    assert!(!metivier_condition_check(&basis, &samples).iter().all(|&b| b));

    let h = bundled_system("heisenberg1");
    let hb = enumerate_commutators(&h, 2);
    let hs: Vec<Vec<BigRational>> = (0..20).map(|i| vec![q(i, 7), q(3 - i, 5), q(i * i, 11)]).collect();
    let m = metivier_index(&hb, &hs).unwrap();
    assert_eq!(m.nu_tilde, 4);
    assert!(m.h_flags.iter().all(|&f| f));
    assert!(metivier_condition_check(&hb, &hs).iter().all(|&b| b));

    let lap = bundled_system("laplacian2d");
    let lb = enumerate_commutators(&lap, 1);
    assert!(
        metivier_condition_check(&lb, &hs.iter().map(|x| x[..2].to_vec()).collect::<Vec<_>>())
            .iter()
            .all(|&b| b)
    );

    let e = bundled_system("example82");
    let eb = enumerate_commutators(&e, 2);
    let (on, off) = bundled::designated_points("example82").unwrap();
    let all: Vec<_> = on.iter().chain(&off).cloned().collect();
    let m = metivier_index(&eb, &all).unwrap();
    assert_eq!(m.nu_tilde, 4);
    assert_eq!(m.h_flags, [vec![true; on.len()], vec![false; off.len()]].concat());
}

#[test]
fn grid_examples() {
    assert_eq!(build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[8, 8]).unwrap().len(), 49);
    assert!(build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[2, 2]).is_err());

    let mask = Polynomial::from_terms(
        2,
        [
            (q(1, 1), vec![2, 0]),
            (q(-3, 5), vec![1, 0]),
            (q(9, 100), vec![0, 0]),
            (q(1, 1), vec![0, 2]),
            (q(-1, 1), vec![0, 0]),
        ],
    )
    .unwrap();
    let spec = DomainSpec::new(vec![(-1.0, 2.0), (-1.5, 1.5)], Some(mask)).unwrap();
    let grid = build_grid(&spec, &[64, 64]).unwrap();
    let mut count = 0;
    for i in 1..64 {
        for j in 1..64 {
            let x = -1.0 + 3.0 * i as f64 / 64.0;
            let y = -1.5 + 3.0 * j as f64 / 64.0;
            count += ((x - 0.3).powi(2) + y * y - 1.0 < 0.0) as usize;
        }
    }
    assert_eq!(grid.len(), count);
}

#[test]
fn boundary_examples() {
    let g = bundled_system("grushin2d");
    let off = DomainSpec::ball(&[0.3, 0.0], 1.0);
    let rep = characteristic_check(&off, &g, 800).unwrap();
    assert!(!rep.characteristic && rep.min_normal_component > 0.1);

    let centred = DomainSpec::ball(&[0.0, 0.0], 1.0);
    let rep = characteristic_check(&centred, &g, 800).unwrap();
    assert!(rep.characteristic);
    assert!(rep.argmin[0].abs() < 1e-6 && (rep.argmin[1].abs() - 1.0).abs() < 1e-6);

    let lap = bundled_system("laplacian2d");
    let rep = characteristic_check(&off, &lap, 800).unwrap();
    assert!((rep.min_normal_component - 1.0).abs() < 1e-3);
}

#[test]
fn degeneracy_measure_examples() {
    let h = bundled::get("heisenberg1").unwrap();
    let hb = enumerate_commutators(&h.system, 2);
    let m = measure_h(&hb, &h.domain, 8, 4);
    assert_eq!(m.verdict, HVerdict::Positive);
    assert!(m.fractions.iter().all(|&f| f == 1.0));

    let g = bundled::get("grushin2d").unwrap();
    let gb = enumerate_commutators(&g.system, 2);
    assert_eq!(measure_h(&gb, &g.domain, 16, 3).verdict, HVerdict::Zero);

    let e = bundled::get("example82").unwrap();
    let eb = enumerate_commutators(&e.system, 2);
    let m = measure_h(&eb, &DomainSpec::cube(3, -2.0, 2.0), 8, 4);
    assert_eq!(m.verdict, HVerdict::Positive);
    let target = std::f64::consts::PI * 2.25 / 64.0;
    assert!((m.fractions.last().unwrap() - target).abs() < 0.01, "{:?}", m.fractions);
}

#[test]
fn integrability_examples() {
    let opts = ConditionAOptions::default();
    let g3 = bundled::get("grushin3d").unwrap();
    assert_eq!(condition_a_integral(&g3.system, &g3.domain, &opts).verdict, Verdict::Convergent);
    let g2 = bundled::get("grushin2d").unwrap();
    assert_eq!(condition_a_integral(&g2.system, &g2.domain, &opts).verdict, Verdict::Divergent);
    let lap = bundled_system("laplacian2d");
    let dom = DomainSpec::new(vec![(0.0, 2.0), (0.0, 1.5)], None).unwrap();
    let ca = condition_a_integral(&lap, &dom, &opts);
    assert_eq!(ca.verdict, Verdict::Convergent);
    assert_eq!(ca.estimate, 3.0);
}

#[test]
fn discretization_examples() {
    let grid = build_grid(&DomainSpec::cube(1, 0.0, 4.0), &[4]).unwrap();
    let g = discretize_field(&VectorField::coordinate(1, 0), &grid);
    let gtg = |r: usize, c: usize| -> f64 {
        let mut s = 0.0;
        for &(i, j, v) in &g.triplets {
            if j == r {
                for &(i2, j2, w) in &g.triplets {
                    if i2 == i && j2 == c {
                        s += v * w;
                    }
                }
            }
        }
        s
    };
    let expect = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
    for r in 0..3 {
        for c in 0..3 {
            assert_eq!(gtg(r, c), expect[r][c]);
        }
    }
    assert!(g.triplets.iter().all(|t| t.2.abs() == 1.0));

    let z = discretize_field(&VectorField::zero(1), &grid);
    assert!(z.triplets.iter().all(|t| t.2 == 0.0));
    let zs = FieldSystem::new(1, vec![VectorField::zero(1)], 1).unwrap();
    assert_eq!(assemble_operator(&zs, &grid).unwrap().norm_inf(), 0.0);

    let lap = bundled_system("laplacian2d");
    let grid = build_grid(&DomainSpec::cube(2, 0.0, 1.0), &[16, 16]).unwrap();
    let a = assemble_operator(&lap, &grid).unwrap();
    let h2 = 1.0 / 256.0;
    let c = grid.index_of(&[8, 8]).unwrap();
    assert!((a.get(c, c) * h2 - 4.0).abs() < 1e-12);
    for nb in [[7, 8], [9, 8], [8, 7], [8, 9]] {
        assert!((a.get(c, grid.index_of(&nb).unwrap()) * h2 + 1.0).abs() < 1e-12);
    }
    assert_eq!(a.row(c).count(), 5);
}
