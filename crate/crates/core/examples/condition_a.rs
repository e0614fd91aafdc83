//! Integrability of the reciprocal determinant sum: divergent for the planar
//! Grushin fields, convergent in three dimensions.

use subelliptic::bundled;
use subelliptic::geometry::{condition_a_integral, ConditionAOptions};

fn main() {
    for name in ["grushin2d", "grushin3d"] {
        let b = bundled::get(name).expect("bundled");
        let ca = condition_a_integral(&b.system, &b.domain, &ConditionAOptions::default());
        println!("{name}: {:?}", ca.verdict);
        for (eps, integral) in &ca.estimates {
            println!("  eps = {eps:.5}  I = {integral:.5}");
        }
        if let Some(k) = ca.decay_exponent {
            println!("  increment decay exponent {k:.3}");
        }
    }
}
