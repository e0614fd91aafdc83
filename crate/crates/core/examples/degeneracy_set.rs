//! Where is the maximal index attained? Layer constancy, the measure of H
//! for the flat-bump system, and the boundary check.

use subelliptic::bundled;
use subelliptic::fields::{enumerate_commutators, metivier_condition_check, point_indices};
use subelliptic::geometry::{characteristic_check, measure_h, DomainSpec};

fn main() {
    let b = bundled::get("example82").expect("bundled");
    let basis = enumerate_commutators(&b.system, b.system.hormander_bound());
    let (on, off) = bundled::designated_points("example82").expect("designated");
    let nus = |pts: &[Vec<_>]| pts.iter().map(|x| point_indices(&basis, x).nu).collect::<Vec<_>>();
    println!("nu on H:  {:?}", nus(&on));
    println!("nu off H: {:?}", nus(&off));

    let samples: Vec<_> = on.iter().chain(&off).cloned().collect();
    println!(
        "layer dimensions constant per layer: {:?}",
        metivier_condition_check(&basis, &samples)
    );

    let cube = DomainSpec::cube(3, -2.0, 2.0);
    let h = measure_h(&basis, &cube, 8, b.nu_tilde);
    println!(
        "|H| / |D(2)| at resolutions {:?}: {:?} -> {:?}",
        h.resolutions, h.fractions, h.verdict
    );

    let c = characteristic_check(&b.domain, &b.system, 400).expect("masked domain");
    println!(
        "min |X nu| on the boundary = {:.3} (characteristic: {})",
        c.min_normal_component, c.characteristic
    );
}
