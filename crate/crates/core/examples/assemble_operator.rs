//! The Dirichlet quadratic form sum G_i^T G_i on a masked grid: sizes, exact
//! symmetry and a positive quadratic form.

use subelliptic::assemble::assemble_operator;
use subelliptic::bundled;
use subelliptic::geometry::build_grid;

fn main() {
    let b = bundled::get("grushin2d").expect("bundled");
    for r in [32, 64, 128] {
        let grid = build_grid(&b.domain, &[r, r]).expect("grid");
        let a = assemble_operator(&b.system, &grid).expect("operator");
        let ones = vec![1.0; a.size()];
        println!(
            "R = {r:3}: N = {:6}, nnz = {:7}, bandwidth = {:4}, asymmetry = {}, <A1,1> = {:.4}",
            a.size(),
            a.nnz(),
            a.bandwidth(),
            a.asymmetry(),
            a.quadratic_form(&ones)
        );
    }
}
