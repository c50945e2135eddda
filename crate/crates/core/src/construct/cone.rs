//! Coning, sliding along rays through the cone vertex, slicing by a
//! hyperplane, and removal of base points that coincide with the apex.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::certify;
use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};
use crate::symmat::{kernel_representation, SymMatrix, DEFAULT_TOL};

/// A certificate for a cone `∇G`: base vertices `0..n`, cone vertex `n`,
/// and a parallel pair (cable, strut) from the apex to every base vertex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConedCertificate {
    pub certificate: Certificate,
    pub cone_vertex: VertexId,
}

impl ConedCertificate {
    /// Read a certificate whose last vertex is the apex of a cone laid out as
    /// [`Multigraph::cone`] does.
    pub fn from_certificate(certificate: Certificate) -> Result<ConedCertificate> {
        let n = certificate.tensegrity.n();
        if n == 0 {
            return Err(Error::Precondition("empty graph is not a cone".into()));
        }
        let cc = ConedCertificate { certificate, cone_vertex: n - 1 };
        if cc.base_graph().cone().0 != *cc.certificate.tensegrity.graph() {
            return Err(Error::Precondition("graph is not a cone over its first n - 1 vertices".into()));
        }
        Ok(cc)
    }

    pub fn base_n(&self) -> usize {
        self.cone_vertex
    }

    /// The base graph: every edge not touching the cone vertex, in order.
    pub fn base_graph(&self) -> Multigraph {
        let g = self.certificate.tensegrity.graph();
        let c = self.cone_vertex;
        let edges = g.edges().iter().copied().filter(|&(u, v)| u != c && v != c).collect();
        Multigraph::new(c, edges).expect("base edges avoid the cone vertex")
    }
}

/// `{x : normal · x = offset}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Net weights of the parallel pair from the apex to each base vertex, read
/// from the matrix, split into a cable and a strut. Both are at least 1 in
/// magnitude.
fn cone_pair_weights(net: f64) -> (f64, f64) {
    let cable = net.max(0.0) + 1.0;
    (cable, net - cable)
}

/// Rebuild a coned certificate from a stress matrix on `∇G` (cone last)
/// and points; base edges take their weights from `base_omega`.
fn coned_from_matrix(
    base: &Multigraph,
    base_omega: Vec<f64>,
    l: &DMatrix<f64>,
    p: DMatrix<f64>,
    tol: f64,
    what: &str,
) -> Result<ConedCertificate> {
    let n = base.n();
    let (g, apex) = base.cone();
    let mut omega = base_omega;
    for v in 0..n {
        let (c, s) = cone_pair_weights(-l[(v, n)]);
        omega.push(c);
        omega.push(s);
    }
    let certificate = certify(g, omega, p, tol, what)?;
    Ok(ConedCertificate { certificate, cone_vertex: apex })
}

/// Cone a certificate: base points lifted to `(p, 1)`, apex at the origin,
/// stress matrix `blockdiag(L, 0)`.
pub fn cone_certificate(cert: &Certificate) -> Result<ConedCertificate> {
    let t = &cert.tensegrity;
    let n = t.n();
    let d = t.dim();
    let mut p = DMatrix::zeros(d + 1, n + 1);
    p.view_mut((0, 0), (d, n)).copy_from(t.points());
    for v in 0..n {
        p[(d, v)] = 1.0;
    }
    let mut omega = cert.stress.omega.clone();
    for _ in 0..n {
        omega.push(1.0);
        omega.push(-1.0);
    }
    let (g, apex) = t.graph().cone();
    let certificate = certify(g, omega, p, DEFAULT_TOL, "cone")?;
    Ok(ConedCertificate { certificate, cone_vertex: apex })
}

/// Certificate for `∇G` from a PSD matrix `A` supported on `G` (diagonal
/// free, off-diagonal entries nonzero exactly on the adjacent pairs). The
/// stress matrix is `[[A, -A1], [-1ᵀA, 1ᵀA1]]` with the apex last.
pub fn lift_adjacency(g: &Multigraph, a: &SymMatrix) -> Result<ConedCertificate> {
    let n = g.n();
    if a.n() != n {
        return Err(Error::Dimension(format!("{}x{} matrix for {n} vertices", a.n(), a.n())));
    }
    let tol = DEFAULT_TOL;
    let pn = a.psd_nullity(tol);
    if !pn.psd {
        return Err(Error::Precondition(format!("matrix is not PSD (min eigenvalue {:e})", pn.min_eig)));
    }
    let am = a.matrix();
    let scale = am.amax().max(1.0);
    let mult = g.multiplicity_matrix();
    let mut base_omega = vec![0.0; g.edge_count()];
    for u in 0..n {
        for v in u + 1..n {
            let x = am[(u, v)];
            if mult[u][v] == 0 && x.abs() > tol * scale {
                return Err(Error::Precondition(format!("entry ({u},{v}) is nonzero on a non-edge")));
            }
            if mult[u][v] == 1 && x.abs() <= tol * scale {
                return Err(Error::Precondition(format!("entry ({u},{v}) vanishes on a single edge")));
            }
        }
    }
    for class in g.parallel_classes() {
        let (u, v) = class.endpoints;
        let net = -am[(u, v)];
        if class.members.len() == 1 {
            base_omega[class.members[0]] = net;
        } else {
            let (c, s) = cone_pair_weights(net);
            base_omega[class.members[0]] = c;
            base_omega[class.members[1]] = s;
            for &e in &class.members[2..] {
                base_omega[e] = 1.0;
                base_omega[class.members[1]] -= 1.0;
            }
        }
    }
    let ones = DVector::from_element(n, 1.0);
    let a1 = am * &ones;
    let mut l = DMatrix::zeros(n + 1, n + 1);
    l.view_mut((0, 0), (n, n)).copy_from(am);
    for v in 0..n {
        l[(v, n)] = -a1[v];
        l[(n, v)] = -a1[v];
    }
    l[(n, n)] = a1.sum();
    let lm = SymMatrix::new(l.clone())?;
    let kr = kernel_representation(&lm, tol, true)?;
    coned_from_matrix(g, base_omega, &l, kr.p, tol, "lift_adjacency")
}

/// Translate so the apex sits at the origin.
fn apex_at_origin(cc: &ConedCertificate) -> DMatrix<f64> {
    let mut p = cc.certificate.tensegrity.points().clone();
    let apex = p.column(cc.cone_vertex).into_owned();
    for mut c in p.column_iter_mut() {
        c -= &apex;
    }
    p
}

/// Move every base point along its ray from the apex: `q(v) = s_v p(v)`.
/// Base edge stresses become `ω / (s_u s_v)`, so signs flip with
/// `sign(s_u) sign(s_v)`; the matrix changes by the congruence `CᵀLC` where
/// row `v` of `C` is `1/s_v` at `v` and `1 - 1/s_v` at the apex.
pub fn slide(cc: &ConedCertificate, s: &[f64]) -> Result<ConedCertificate> {
    let n = cc.base_n();
    if s.len() != n {
        return Err(Error::Dimension(format!("{} factors for {n} base vertices", s.len())));
    }
    if let Some(v) = s.iter().position(|&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::Precondition(format!("slide factor for vertex {v} is {}", s[v])));
    }
    let p = apex_at_origin(cc);
    let spread = p.amax().max(1.0);
    for v in 0..n {
        if p.column(v).norm() <= DEFAULT_TOL * spread {
            return Err(Error::Precondition(format!("base vertex {v} lies at the apex")));
        }
    }
    let mut q = p.clone();
    for v in 0..n {
        let c = p.column(v) * s[v];
        q.set_column(v, &c);
    }
    let mut cmat = DMatrix::zeros(n + 1, n + 1);
    for v in 0..n {
        cmat[(v, v)] = 1.0 / s[v];
        cmat[(v, n)] = 1.0 - 1.0 / s[v];
    }
    cmat[(n, n)] = 1.0;
    let l = cc.certificate.stress_matrix().congruence(&cmat)?;
    let base = cc.base_graph();
    let base_omega: Vec<f64> =
        base.edges().iter().zip(&cc.certificate.stress.omega).map(|(&(u, v), &w)| w / (s[u] * s[v])).collect();
    coned_from_matrix(&base, base_omega, l.matrix(), q, DEFAULT_TOL, "slide")
}

/// Slide all base points onto a hyperplane missing the apex, then drop the
/// apex. The result lives in the hyperplane's own coordinates.
pub fn slice(cc: &ConedCertificate, h: &Hyperplane) -> Result<Certificate> {
    let n = cc.base_n();
    let p = apex_at_origin(cc);
    let dim = p.nrows();
    if h.normal.len() != dim {
        return Err(Error::Dimension(format!("normal of length {} in dimension {dim}", h.normal.len())));
    }
    let a = DVector::from_column_slice(&h.normal);
    let an = a.norm();
    if an == 0.0 {
        return Err(Error::Precondition("zero normal".into()));
    }
    let apex = cc.certificate.tensegrity.point(cc.cone_vertex);
    // Offset relative to the translated apex.
    let c = h.offset - a.dot(&apex);
    let spread = p.amax().max(1.0);
    if c.abs() <= DEFAULT_TOL * an * spread {
        return Err(Error::Precondition("hyperplane passes through the apex".into()));
    }
    let mut s = Vec::with_capacity(n);
    for v in 0..n {
        let ap = a.dot(&p.column(v));
        if ap.abs() <= DEFAULT_TOL * an * p.column(v).norm().max(1.0) {
            return Err(Error::Precondition(format!("ray to base vertex {v} is parallel to the hyperplane")));
        }
        s.push(c / ap);
    }
    let slid = slide(cc, &s)?;
    let l = slid.certificate.stress_matrix();
    let lb = l.matrix().view((0, 0), (n, n)).into_owned();
    let q = apex_at_origin(&slid);
    // Orthonormal frame of the hyperplane direction space.
    let unit = &a / an;
    let mut frame: Vec<DVector<f64>> = Vec::new();
    for k in 0..dim {
        let mut e = DVector::zeros(dim);
        e[k] = 1.0;
        let mut w = &e - &unit * unit.dot(&e);
        for b in &frame {
            w -= b * b.dot(&w);
        }
        if w.norm() > 1e-6 {
            frame.push(w.normalize());
        }
        if frame.len() + 1 == dim {
            break;
        }
    }
    let fm = if frame.is_empty() { DMatrix::zeros(dim, 0) } else { DMatrix::from_columns(&frame) };
    let coords = fm.transpose() * q.columns(0, n);
    let base = slid.base_graph();
    let omega = slid.certificate.stress.omega[..base.edge_count()].to_vec();
    let cert = certify(base, omega, coords, DEFAULT_TOL, "slice")?;
    let expect = SymMatrix::new(lb)?;
    if (expect.matrix() - cert.stress_matrix().matrix()).amax() > 1e-6 * expect.norm().max(1.0) {
        return Err(Error::Verification("sliced matrix differs from the base block".into()));
    }
    Ok(cert)
}

/// Remove every base vertex at the apex position, folding its row and
/// column into the apex: `L_v = L/v + (1/a)(b + aχ)(b + aχ)ᵀ`.
pub fn remove_coincident(cc: &ConedCertificate) -> Result<ConedCertificate> {
    let tol = DEFAULT_TOL;
    let p = apex_at_origin(cc);
    let spread = p.amax().max(1.0);
    let n = cc.base_n();
    let x: Vec<VertexId> = (0..n).filter(|&v| p.column(v).norm() <= tol * spread).collect();
    if x.is_empty() {
        return Ok(cc.clone());
    }
    let mut l = cc.certificate.stress_matrix().into_inner();
    let target_nullity = cc.certificate.nullity;
    // Current labels of surviving rows; the apex stays last.
    let mut alive: Vec<VertexId> = (0..=n).collect();
    for &v in x.iter().rev() {
        let i = alive.iter().position(|&y| y == v).expect("present");
        let k = alive.len();
        let a = l[(i, i)];
        if a.abs() <= tol * l.amax().max(1.0) {
            return Err(Error::ZeroPivot { index: v, pivot: a });
        }
        let rest: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let b = l.column(i).select_rows(&rest);
        let t = l.select_rows(&rest).select_columns(&rest);
        let mut chi = DVector::zeros(k - 1);
        chi[k - 2] = 1.0;
        let w = &b + &chi * a;
        let next = t - &b * b.transpose() / a + &w * w.transpose() / a;
        l = (&next + next.transpose()) * 0.5;
        alive.remove(i);
        let nl = SymMatrix::new(l.clone())?.psd_nullity(tol).nullity;
        if nl != target_nullity {
            return Err(Error::Verification(format!("nullity changed from {target_nullity} to {nl} removing {v}")));
        }
    }
    let keep: Vec<VertexId> = alive[..alive.len() - 1].to_vec();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let old_base = cc.base_graph();
    let mut edges = Vec::new();
    let mut omega = Vec::new();
    for (e, &(u, v)) in old_base.edges().iter().enumerate() {
        if index[u] != usize::MAX && index[v] != usize::MAX {
            edges.push((index[u], index[v]));
            omega.push(cc.certificate.stress.omega[e]);
        }
    }
    let base = Multigraph::new(keep.len(), edges)?;
    let mut cols: Vec<usize> = keep.clone();
    cols.push(n);
    let q = cc.certificate.tensegrity.points().select_columns(&cols);
    coned_from_matrix(&base, omega, &l, q, tol, "remove_coincident")
}
