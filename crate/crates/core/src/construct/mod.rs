//! Certified realizations: the gallery of basic super stable tensegrities and
//! the operators that build new certificates from old ones.
//!
//! Every public constructor returns a [`Certificate`] that has been passed
//! through [`verify_super_stable`]; failures surface as errors rather than as
//! unverified output.

mod cone;
mod continuation;
mod gallery;
mod ops;
mod realize;

pub use cone::{cone_certificate, lift_adjacency, remove_coincident, slice, slide, ConedCertificate, Hyperplane};
pub use continuation::{
    continuation_solve, solve_at, ContinuationProblem, ContinuationSolution, Family, DEFAULT_EPS_SCHEDULE,
    DEFAULT_MAX_ITER,
};
pub use gallery::{gallery, GalleryName};
pub use ops::{
    add_edge, add_edge_with, attach_ear, split_vertex_certificate, subdivide_cable, subdivide_cable_at, SplitOutcome,
    SplitSpec,
};
pub use realize::realize_from_minor;

use nalgebra::DMatrix;

use crate::certify::{verify_super_stable, Certificate};
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::symmat::DEFAULT_TOL;
use crate::tensegrity::{Sign, Stress, Tensegrity};

/// Shared knobs for the numerical operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructOptions {
    pub tol: f64,
    /// Values of `ε` tried from the first (largest) on.
    pub eps_schedule: Vec<f64>,
    pub max_iter: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { tol: DEFAULT_TOL, eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(), max_iter: DEFAULT_MAX_ITER }
    }
}

/// Signs read off the stress; zero stresses are rejected.
pub(crate) fn signs_of(omega: &[f64]) -> Result<Vec<Sign>> {
    omega
        .iter()
        .enumerate()
        .map(|(e, &w)| {
            if w == 0.0 || !w.is_finite() {
                Err(Error::Verification(format!("edge {e} has stress {w}")))
            } else {
                Ok(Sign::of(w))
            }
        })
        .collect()
}

/// Build, verify and require a super stable certificate.
pub(crate) fn certify(g: Multigraph, omega: Vec<f64>, p: DMatrix<f64>, tol: f64, what: &str) -> Result<Certificate> {
    let sigma = signs_of(&omega)?;
    let t = Tensegrity::new(g, sigma, p)?;
    verify_super_stable(&t, &Stress::new(omega), tol).require(what)
}
