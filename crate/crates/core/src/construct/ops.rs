//! Local operators on certificates: adding an edge, subdividing a cable,
//! attaching an ear and splitting a vertex.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::continuation::{solve_at, ContinuationProblem, Family, LinearFamily};
use super::{certify, ConstructOptions};
use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, VertexId};
use crate::symmat::{edge_matrix, SymMatrix, DEFAULT_TOL};
use crate::tensegrity::{is_splittable, min_point_distance, Sign, Stress};

/// Project the rows of `p` onto the span of the `k` lowest eigenvectors of `l`.
fn project_to_kernel(l: &SymMatrix, p: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let se = l.matrix().clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..l.n()).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let kb = DMatrix::from_fn(l.n(), k, |r, c| se.eigenvectors[(r, idx[c])]);
    p * &kb * kb.transpose()
}

fn spread(p: &DMatrix<f64>) -> f64 {
    crate::tensegrity::centered(p).amax().max(1.0)
}

fn attempts(errors: Vec<String>) -> Error {
    Error::Continuation(if errors.is_empty() { "empty ε schedule".into() } else { errors.join("; ") })
}

/// Add a cable `uv` with default options.
pub fn add_edge(cert: &Certificate, u: VertexId, v: VertexId) -> Result<Certificate> {
    add_edge_with(cert, u, v, None, &ConstructOptions::default())
}

/// Add an edge `uv`, appended as the last edge.
///
/// If `uv` already has a parallel class, the net stress of the class is kept
/// and redistributed, so the stress matrix and points are unchanged. The
/// default sign is then opposite to the first class member. Otherwise the new
/// edge gets stress `±ε` and the other stresses are corrected so the nullity
/// is kept; the points are projected onto the new kernel.
pub fn add_edge_with(
    cert: &Certificate,
    u: VertexId,
    v: VertexId,
    sign: Option<Sign>,
    opts: &ConstructOptions,
) -> Result<Certificate> {
    let t = &cert.tensegrity;
    let mut g = t.graph().clone();
    let existing: Vec<EdgeId> =
        (0..g.edge_count()).filter(|&f| g.edges()[f] == (u, v) || g.edges()[f] == (v, u)).collect();
    g.push_edge(u, v)?;
    let mut omega = cert.stress.omega.clone();

    if let Some(&first) = existing.first() {
        let w = omega[first];
        let s = sign.unwrap_or(Sign::of(w).flip());
        let delta = if s == Sign::of(w) { w.abs() / 2.0 } else { w.abs() };
        omega[first] -= s.value() * delta;
        omega.push(s.value() * delta);
        return certify(g, omega, t.points().clone(), opts.tol, "add_edge");
    }

    let s = sign.unwrap_or(Sign::Cable);
    let n = t.n();
    let old = t.graph();
    let family = LinearFamily {
        basis: old.edges().iter().map(|&(a, b)| edge_matrix(n, a, b).into_inner()).collect(),
        direction: edge_matrix(n, u, v).into_inner() * s.value(),
    };
    let cp = ContinuationProblem {
        family: &family,
        theta0: omega.clone(),
        target_nullity: cert.d + 1,
        eps_schedule: opts.eps_schedule.clone(),
        max_iter: opts.max_iter,
        tol: opts.tol,
    };
    let mut errors = Vec::new();
    for &eps in &opts.eps_schedule {
        let attempt = solve_at(&cp, eps).and_then(|sol| {
            let p = project_to_kernel(&sol.matrix, t.points(), cert.d + 1);
            let mut w = sol.theta;
            w.push(s.value() * eps);
            certify(g.clone(), w, p, opts.tol, "add_edge")
        });
        match attempt {
            Ok(c) => return Ok(c),
            Err(e) => errors.push(e.to_string()),
        }
    }
    Err(attempts(errors).at_stage("add_edge"))
}

/// Subdivide cable `e` at its midpoint.
pub fn subdivide_cable(cert: &Certificate, e: EdgeId) -> Result<Certificate> {
    subdivide_cable_at(cert, e, 0.5)
}

/// Subdivide cable `e = (u, v)` with a new vertex at `p_u + t (p_v - p_u)`.
/// Edge `e` becomes `(u, w)` with stress `ω/t` and the appended `(w, v)` gets
/// `ω/(1 - t)`, so both pieces exert the original force.
pub fn subdivide_cable_at(cert: &Certificate, e: EdgeId, t: f64) -> Result<Certificate> {
    let ten = &cert.tensegrity;
    let g = ten.graph();
    let (u, v) = g.endpoints(e)?;
    if ten.sigma()[e] != Sign::Cable {
        return Err(Error::Precondition(format!("edge {e} is a strut; only cables can be subdivided")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Precondition(format!("subdivision parameter {t} outside (0, 1)")));
    }
    let sub = g.subdivide(e)?;
    let (pu, pv) = (ten.point(u), ten.point(v));
    let pw: DVector<f64> = &pu + (&pv - &pu) * t;
    let mut p = ten.points().clone().insert_column(ten.n(), 0.0);
    p.set_column(sub.new_vertex, &pw);
    let mut omega = cert.stress.omega.clone();
    let w = omega[e];
    omega[e] = w / t;
    omega.push(w / (1.0 - t));
    certify(sub.graph, omega, p, DEFAULT_TOL, "subdivide")
}

/// Attach the open ear `path = [a, x_1, ..., x_k, b]`. The ends must be
/// vertices of the certificate and the interior must be the next free ids
/// `n, n + 1, ...` in order. A path with no interior adds the edge `ab`.
pub fn attach_ear(cert: &Certificate, path: &[VertexId], opts: &ConstructOptions) -> Result<Certificate> {
    let n = cert.tensegrity.n();
    if path.len() < 2 {
        return Err(Error::Precondition("an ear needs at least two vertices".into()));
    }
    let (a, b) = (path[0], path[path.len() - 1]);
    if a >= n || b >= n {
        return Err(Error::Precondition(format!("ear ends {a}, {b} must be existing vertices")));
    }
    let interior = &path[1..path.len() - 1];
    if interior.iter().enumerate().any(|(i, &x)| x != n + i) {
        return Err(Error::Precondition(format!("ear interior must be the new vertices {n}, {}, ...", n + 1)));
    }
    if interior.is_empty() {
        return add_edge_with(cert, a, b, None, opts);
    }
    let mut cur = add_edge_with(cert, a, b, Some(Sign::Cable), opts).map_err(|e| e.at_stage("ear edge"))?;
    let mut seg = cur.tensegrity.graph().edge_count() - 1;
    for k in (1..=interior.len()).rev() {
        // k interior points remain on `seg`; space them evenly unless the
        // new point would land on an existing one.
        let base = 1.0 / (k + 1) as f64;
        let mut done = None;
        for t in [base, base * 2.0 / 3.0, base * 4.0 / 3.0] {
            let c = subdivide_cable_at(&cur, seg, t)?;
            let sep = min_point_distance(c.tensegrity.points());
            if sep > opts.tol * spread(c.tensegrity.points()) || cert.d == 0 {
                done = Some(c);
                break;
            }
        }
        cur = done.ok_or_else(|| Error::Precondition("ear points collide for every subdivision ratio".into()))?;
        seg = cur.tensegrity.graph().edge_count() - 1;
    }
    Ok(cur)
}

/// A vertex split: the edges `block0` at `vertex` move to a new vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub vertex: VertexId,
    pub block0: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub certificate: Certificate,
    /// The new vertex, always the old `n`.
    pub v0: VertexId,
    pub v1: VertexId,
    /// The new edge `v0 v1`, appended last.
    pub bridge: EdgeId,
    pub eps: f64,
    /// Position of `v0` predicted by first-order expansion in `ε`.
    pub explicit_form: DVector<f64>,
}

/// `L(θ) - ε c cᵀ` with `c = Σ_{f ∈ E0} θ_f (e_{u_f} - e_{v1})`: the Schur
/// complement of the split Laplacian at `v0` when the bridge has stress
/// `1/ε - Σ_{f ∈ E0} θ_f`.
struct SplitFamily {
    n: usize,
    v1: VertexId,
    basis: Vec<DMatrix<f64>>,
    /// `(edge, far endpoint)` for the moved edges.
    moved: Vec<(EdgeId, VertexId)>,
}

impl SplitFamily {
    fn c(&self, theta: &[f64]) -> DVector<f64> {
        let mut c = DVector::zeros(self.n);
        for &(f, x) in &self.moved {
            c[x] += theta[f];
            c[self.v1] -= theta[f];
        }
        c
    }
}

impl Family for SplitFamily {
    fn size(&self) -> usize {
        self.n
    }

    fn eval(&self, theta: &[f64], eps: f64) -> DMatrix<f64> {
        let c = self.c(theta);
        let mut m = -(&c * c.transpose()) * eps;
        for (f, &t) in self.basis.iter().zip(theta) {
            m += f * t;
        }
        m
    }

    fn partials(&self, theta: &[f64], eps: f64) -> Vec<DMatrix<f64>> {
        let c = self.c(theta);
        let mut out = self.basis.clone();
        for &(f, x) in &self.moved {
            let mut dc = DVector::zeros(self.n);
            dc[x] = 1.0;
            dc[self.v1] = -1.0;
            out[f] -= (&dc * c.transpose() + &c * dc.transpose()) * eps;
        }
        out
    }
}

/// Split `spec.vertex` and certify the result. The bridge gets stress
/// `1/ε - s` where `s` is the stress moved to the new vertex, and the other
/// stresses are corrected by continuation. The first `ε` of the schedule
/// whose result verifies is used. With `injective`, the result must also be
/// injective with a non-splittable stress.
pub fn split_vertex_certificate(
    cert: &Certificate,
    spec: &SplitSpec,
    opts: &ConstructOptions,
    injective: bool,
) -> Result<SplitOutcome> {
    let t = &cert.tensegrity;
    let g = t.graph();
    let split = g.vertex_split(spec.vertex, &spec.block0, 1)?;
    let (v0, v1, bridge) = (split.v0, split.v1, split.bridges[0]);
    let n = t.n();
    let family = SplitFamily {
        n,
        v1,
        basis: g.edges().iter().map(|&(a, b)| edge_matrix(n, a, b).into_inner()).collect(),
        moved: spec.block0.iter().map(|&f| (f, g.other(f, v1))).collect(),
    };
    let cp = ContinuationProblem {
        family: &family,
        theta0: cert.stress.omega.clone(),
        target_nullity: cert.d + 1,
        eps_schedule: opts.eps_schedule.clone(),
        max_iter: opts.max_iter,
        tol: opts.tol,
    };
    let mut errors = Vec::new();
    for &eps in &opts.eps_schedule {
        let attempt = solve_at(&cp, eps).and_then(|sol| {
            let p = project_to_kernel(&sol.matrix, t.points(), cert.d + 1);
            let pv1 = p.column(v1).into_owned();
            let mut p0 = pv1.clone();
            let mut moved = 0.0;
            for &(f, x) in &family.moved {
                p0 += (p.column(x) - &pv1) * (eps * sol.theta[f]);
                moved += sol.theta[f];
            }
            let mut pts = p.insert_column(n, 0.0);
            pts.set_column(v0, &p0);
            let mut omega = sol.theta.clone();
            omega.push(1.0 / eps - moved);
            let c = certify(split.graph.clone(), omega, pts, opts.tol, "split")?;
            if injective {
                let sc = spread(c.tensegrity.points());
                if !c.tensegrity.is_injective(1e-3 * eps * sc) {
                    return Err(Error::Verification(format!("eps {eps:e}: split is not injective")));
                }
                let w = Stress::new(c.stress.omega.clone());
                let wmax = w.omega.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                if is_splittable(&c.tensegrity, &w, opts.tol * wmax * sc)? {
                    return Err(Error::Verification(format!("eps {eps:e}: stress is splittable")));
                }
            }
            Ok(SplitOutcome { certificate: c, v0, v1, bridge, eps, explicit_form: p0 })
        });
        match attempt {
            Ok(o) => return Ok(o),
            Err(e) => errors.push(format!("eps {eps:e}: {e}")),
        }
    }
    Err(attempts(errors).at_stage("split"))
}
