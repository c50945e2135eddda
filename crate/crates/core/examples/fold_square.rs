//! Fold a planar tensegrity into a line along a lacking tree decomposition.
use nalgebra::DMatrix;
use superstab::params::{fold, fold_optimal, TreeDecomposition};
use superstab::tensegrity::{Sign, Tensegrity};
use superstab::Multigraph;

fn main() -> superstab::Result<()> {
    let p = DMatrix::from_row_slice(2, 4, &[0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
    let t = Tensegrity::new(Multigraph::cycle(4), vec![Sign::Cable; 4], p)?;
    let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
    let f = fold(&t, &td, 1e-9)?;
    println!("folded to dim {}: {:.4}", f.dim, f.points);
    println!("cables not longer, struts not shorter: {}", f.deformation.ok);

    let (best, g) = fold_optimal(&t, 1000, 1e-9)?;
    println!("best decomposition has width {} and folds to dim {}", best.width(), g.dim);
    Ok(())
}
