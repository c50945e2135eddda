//! The twisted triangular prism from first principles.
//!
//! Two unit triangles at heights 0 and 1, the top one turned by `θ`. Cables
//! run around both triangles and up the verticals `i -> i'`; struts join `i`
//! to `(i + 1)'`. Only the twist of π/6 balances the stress below.
use std::f64::consts::PI;

use nalgebra::DMatrix;
use superstab::certify::verify_super_stable;
use superstab::tensegrity::{equilibrium_residual, Sign, Stress, Tensegrity};
use superstab::Multigraph;

fn prism(theta: f64) -> superstab::Result<(Tensegrity, Stress)> {
    let p = DMatrix::from_fn(3, 6, |r, c| {
        let (angle, z) = if c < 3 { (2.0 * PI * c as f64 / 3.0, 0.0) } else { (2.0 * PI * (c - 3) as f64 / 3.0 + theta, 1.0) };
        [angle.cos(), angle.sin(), z][r]
    });
    let mut edges = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
    edges.extend([(0, 3), (1, 4), (2, 5)]);
    edges.extend([(0, 4), (1, 5), (2, 3)]);
    let ring = 1.0 / 3f64.sqrt();
    let omega: Vec<f64> = [[ring; 6].as_slice(), &[1.0; 3], &[-1.0; 3]].concat();
    let sigma = omega.iter().map(|&w| Sign::of(w)).collect();
    let t = Tensegrity::new(Multigraph::new(6, edges)?, sigma, p)?;
    Ok((t, Stress::new(omega)))
}

fn main() -> superstab::Result<()> {
    for deg in [0.0f64, 15.0, 30.0, 45.0] {
        let (t, w) = prism(deg.to_radians())?;
        let c = verify_super_stable(&t, &w, 1e-9);
        println!(
            "twist {deg:4.1} deg: residual {:.2e}, nullity {}, {:?}",
            equilibrium_residual(&t, &w)?,
            c.nullity,
            c.verdict
        );
    }
    Ok(())
}
