//! Damped Gauss-Newton continuation that keeps a Laplacian family at a
//! prescribed nullity while a perturbation parameter `ε` is switched on.
//!
//! The unknowns `θ` are edge weights. At each step `U` spans the `d`
//! eigenvectors of the compressed matrix `QᵀL(θ,ε)Q` (with `Q` a basis of
//! `1^⊥`) whose eigenvalues should vanish; the residual is `vech(UᵀQᵀLQU)` and
//! the Jacobian column `j` is `vech(UᵀQᵀ ∂_jL QU)`. Steps are minimum-norm
//! Levenberg steps, so `θ` moves as little as possible.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symmat::{orthonormal_columns, SymMatrix};

pub const DEFAULT_EPS_SCHEDULE: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
pub const DEFAULT_MAX_ITER: usize = 100;

/// Converged cluster eigenvalues must be this many times below `tol`.
const CLUSTER_SHRINK: f64 = 1e-4;

/// A smooth family `(θ, ε) ↦ L(θ, ε)` of Laplacians on a fixed vertex set.
pub trait Family {
    fn size(&self) -> usize;
    fn eval(&self, theta: &[f64], eps: f64) -> DMatrix<f64>;
    /// `∂L/∂θ_j` for every `j`.
    fn partials(&self, theta: &[f64], eps: f64) -> Vec<DMatrix<f64>>;
}

pub struct ContinuationProblem<'a> {
    pub family: &'a dyn Family,
    pub theta0: Vec<f64>,
    /// `d + 1`, counting the all-one vector.
    pub target_nullity: usize,
    pub eps_schedule: Vec<f64>,
    pub max_iter: usize,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct ContinuationSolution {
    pub theta: Vec<f64>,
    pub eps: f64,
    pub matrix: SymMatrix,
    pub iterations: usize,
    /// Largest cluster eigenvalue magnitude relative to the spectral radius.
    pub residual: f64,
}

fn centering_basis(n: usize) -> DMatrix<f64> {
    let c = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    orthonormal_columns(&c, 0.5)
}

fn vech(m: &DMatrix<f64>) -> Vec<f64> {
    let k = m.nrows();
    let mut out = Vec::with_capacity(k * (k + 1) / 2);
    for a in 0..k {
        out.push(m[(a, a)]);
        for b in a + 1..k {
            out.push(std::f64::consts::SQRT_2 * m[(a, b)]);
        }
    }
    out
}

struct State {
    /// Ascending eigenvalues of the compressed matrix.
    eig: DVector<f64>,
    /// Cluster eigenvectors in compressed coordinates.
    u: DMatrix<f64>,
    scale: f64,
}

impl State {
    fn new(l: &DMatrix<f64>, q: &DMatrix<f64>, d: usize) -> State {
        let m = q.transpose() * l * q;
        let m = (&m + m.transpose()) * 0.5;
        let k = m.nrows();
        let se = m.symmetric_eigen();
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eig = DVector::from_iterator(k, idx.iter().map(|&i| se.eigenvalues[i]));
        let u = DMatrix::from_fn(k, d, |r, c| se.eigenvectors[(r, idx[c])]);
        let scale = eig.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        State { eig, u, scale }
    }

    fn cluster_norm(&self, d: usize) -> f64 {
        self.eig.rows(0, d).norm()
    }

    /// Smallest eigenvalue outside the cluster, if any.
    fn outside(&self, d: usize) -> f64 {
        self.eig.get(d).copied().unwrap_or(f64::INFINITY)
    }
}

/// Run the solver at one value of `ε`.
pub fn solve_at(cp: &ContinuationProblem<'_>, eps: f64) -> Result<ContinuationSolution> {
    let n = cp.family.size();
    if cp.target_nullity == 0 || cp.target_nullity > n {
        return Err(Error::Precondition(format!("target nullity {} for size {n}", cp.target_nullity)));
    }
    let d = cp.target_nullity - 1;
    let q = centering_basis(n);
    let mut theta = cp.theta0.clone();
    let mut state = State::new(&cp.family.eval(&theta, eps), &q, d);
    let mut mu = 1e-12;
    let mut iterations = 0;
    loop {
        let res = state.cluster_norm(d);
        let converged = res <= cp.tol * CLUSTER_SHRINK * state.scale
            && state.outside(d) > cp.tol * state.scale
            && state.eig[0] >= -cp.tol * state.scale;
        if converged {
            let l = cp.family.eval(&theta, eps);
            return Ok(ContinuationSolution {
                theta,
                eps,
                matrix: SymMatrix::new((&l + l.transpose()) * 0.5)?,
                iterations,
                residual: res / state.scale,
            });
        }
        if d == 0 || iterations >= cp.max_iter {
            return Err(Error::Continuation(format!(
                "eps {eps:e}: residual {:e} after {iterations} iterations, next eigenvalue {:e}",
                res / state.scale,
                state.outside(d) / state.scale
            )));
        }
        iterations += 1;

        let qu = &q * &state.u;
        let r = DVector::from_vec(vech(&DMatrix::from_diagonal(&state.eig.rows(0, d).into_owned())));
        let partials = cp.family.partials(&theta, eps);
        let cols: Vec<DVector<f64>> =
            partials.iter().map(|f| DVector::from_vec(vech(&(qu.transpose() * f * &qu)))).collect();
        if cols.is_empty() {
            return Err(Error::Continuation("family has no free parameters".into()));
        }
        let j = DMatrix::from_columns(&cols);
        let jjt = &j * j.transpose();
        let jscale = jjt.diagonal().amax().max(f64::MIN_POSITIVE);

        let mut accepted = false;
        while mu <= 1e8 {
            let a = &jjt + DMatrix::identity(jjt.nrows(), jjt.nrows()) * (mu * jscale);
            let Some(y) = a.cholesky().map(|c| c.solve(&r)) else {
                mu *= 10.0;
                continue;
            };
            let step = -(j.transpose() * y);
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
            let next = State::new(&cp.family.eval(&trial, eps), &q, d);
            let floor = state.eig[0].min(0.0) - cp.tol * state.scale;
            let keeps_gap = next.outside(d) > 0.0 && next.eig[0] >= floor;
            if keeps_gap && next.cluster_norm(d) / next.scale < res / state.scale {
                theta = trial;
                state = next;
                mu = (mu * 0.1).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            return Err(Error::Continuation(format!(
                "eps {eps:e}: damping exhausted at residual {:e} after {iterations} iterations",
                res / state.scale
            )));
        }
    }
}

/// Solve at the largest `ε` of the schedule that converges.
pub fn continuation_solve(cp: &ContinuationProblem<'_>) -> Result<ContinuationSolution> {
    let mut last = None;
    for &eps in &cp.eps_schedule {
        match solve_at(cp, eps) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Continuation("empty ε schedule".into())))
}

/// `L(θ) + ε E` for a fixed matrix `E`, with `L(θ) = Σ θ_j F_j`.
pub(crate) struct LinearFamily {
    pub basis: Vec<DMatrix<f64>>,
    pub direction: DMatrix<f64>,
}

impl Family for LinearFamily {
    fn size(&self) -> usize {
        self.direction.nrows()
    }

    fn eval(&self, theta: &[f64], eps: f64) -> DMatrix<f64> {
        let mut m = &self.direction * eps;
        for (f, &t) in self.basis.iter().zip(theta) {
            m += f * t;
        }
        m
    }

    fn partials(&self, _theta: &[f64], _eps: f64) -> Vec<DMatrix<f64>> {
        self.basis.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::edge_matrix;

    fn square_family() -> (LinearFamily, Vec<f64>) {
        // C_4 as a 1-dimensional tensegrity at 0, 1, 2, 3 with a chord 02.
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let basis = edges.iter().map(|&(a, b)| edge_matrix(4, a, b).into_inner()).collect();
        let direction = edge_matrix(4, 0, 2).into_inner();
        (LinearFamily { basis, direction }, vec![3.0, 3.0, 3.0, -1.0])
    }

    #[test]
    fn constant_family_needs_no_iterations() {
        let (mut fam, theta0) = square_family();
        fam.direction = DMatrix::zeros(4, 4);
        let cp = ContinuationProblem {
            family: &fam,
            theta0,
            target_nullity: 2,
            eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(),
            max_iter: DEFAULT_MAX_ITER,
            tol: 1e-8,
        };
        let s = continuation_solve(&cp).unwrap();
        assert_eq!(s.iterations, 0);
        assert_eq!(s.eps, 1e-2);
    }

    #[test]
    fn chord_converges() {
        let (fam, theta0) = square_family();
        let cp = ContinuationProblem {
            family: &fam,
            theta0: theta0.clone(),
            target_nullity: 2,
            eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(),
            max_iter: DEFAULT_MAX_ITER,
            tol: 1e-8,
        };
        let s = continuation_solve(&cp).unwrap();
        let pn = s.matrix.psd_nullity(1e-8);
        assert!(pn.psd && pn.nullity == 2);
        assert!(s.theta.iter().zip(&theta0).all(|(a, b)| a.signum() == b.signum()));
        // The points 0,1,2,3 stay in the kernel up to an affine change.
        assert!(s.residual < 1e-11);
    }

    #[test]
    fn parallel_directions_stall() {
        // Three points on a line in R^2 cannot hold nullity 3: the target is
        // out of reach and the solver reports failure.
        let basis = vec![edge_matrix(3, 0, 1).into_inner(), edge_matrix(3, 1, 2).into_inner()];
        let fam = LinearFamily { basis, direction: edge_matrix(3, 0, 2).into_inner() };
        let cp = ContinuationProblem {
            family: &fam,
            theta0: vec![0.0, 0.0],
            target_nullity: 3,
            eps_schedule: vec![1e-2, 1e-4],
            max_iter: 50,
            tol: 1e-8,
        };
        assert!(matches!(continuation_solve(&cp), Err(Error::Continuation(_))));
    }
}
