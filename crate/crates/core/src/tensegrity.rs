//! Tensegrities `(G, σ, p)`: cables (`+`) may shrink, struts (`-`) may
//! stretch. Configurations are `d × n` matrices whose column `i` is `p(i)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::symmat::{self, SymMatrix};

/// Highest degree at which [`splittable_at`] enumerates edge subsets.
pub const MAX_SPLIT_DEGREE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Cable,
    #[serde(rename = "-")]
    Strut,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Cable => 1.0,
            Sign::Strut => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Cable => Sign::Strut,
            Sign::Strut => Sign::Cable,
        }
    }

    /// Sign of a nonzero real.
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Cable
        } else {
            Sign::Strut
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensegrityJson", into = "TensegrityJson")]
pub struct Tensegrity {
    graph: Multigraph,
    sigma: Vec<Sign>,
    p: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct TensegrityJson {
    graph: Multigraph,
    sigma: Vec<Sign>,
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl TryFrom<TensegrityJson> for Tensegrity {
    type Error = Error;
    fn try_from(t: TensegrityJson) -> Result<Self> {
        if t.points.iter().any(|q| q.len() != t.dim) {
            return Err(Error::Dimension(format!("every point must have {} coordinates", t.dim)));
        }
        let n = t.points.len();
        let p = DMatrix::from_fn(t.dim, n, |r, c| t.points[c][r]);
        Tensegrity::new(t.graph, t.sigma, p)
    }
}

impl From<Tensegrity> for TensegrityJson {
    fn from(t: Tensegrity) -> Self {
        let points = (0..t.p.ncols()).map(|c| t.p.column(c).iter().copied().collect()).collect();
        TensegrityJson { dim: t.p.nrows(), graph: t.graph, sigma: t.sigma, points }
    }
}

impl Tensegrity {
    pub fn new(graph: Multigraph, sigma: Vec<Sign>, p: DMatrix<f64>) -> Result<Self> {
        if sigma.len() != graph.edge_count() {
            return Err(Error::Dimension(format!(
                "{} signs for {} edges",
                sigma.len(),
                graph.edge_count()
            )));
        }
        if p.ncols() != graph.n() {
            return Err(Error::Dimension(format!("{} points for {} vertices", p.ncols(), graph.n())));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("non-finite coordinate".into()));
        }
        Ok(Tensegrity { graph, sigma, p })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn sigma(&self) -> &[Sign] {
        &self.sigma
    }

    pub fn points(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn point(&self, v: VertexId) -> DVector<f64> {
        self.p.column(v).into_owned()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn with_points(&self, p: DMatrix<f64>) -> Result<Tensegrity> {
        Tensegrity::new(self.graph.clone(), self.sigma.clone(), p)
    }

    /// `p(v) - p(u)` for `e = (u, v)`.
    pub fn edge_vector(&self, e: EdgeId) -> DVector<f64> {
        let (u, v) = self.graph.edges()[e];
        self.p.column(v) - self.p.column(u)
    }

    pub fn edge_length(&self, e: EdgeId) -> f64 {
        self.edge_vector(e).norm()
    }

    /// True when all points are pairwise farther apart than `tol`.
    pub fn is_injective(&self, tol: f64) -> bool {
        min_point_distance(&self.p) > tol
    }
}

/// Smallest distance between two distinct columns (infinity if fewer than two).
pub fn min_point_distance(p: &DMatrix<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..p.ncols() {
        for j in i + 1..p.ncols() {
            best = best.min((p.column(i) - p.column(j)).norm());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stress {
    pub omega: Vec<f64>,
}

impl Stress {
    pub fn new(omega: Vec<f64>) -> Self {
        Stress { omega }
    }

    pub fn scaled(&self, c: f64) -> Stress {
        Stress { omega: self.omega.iter().map(|w| w * c).collect() }
    }

    pub fn check_len(&self, g: &Multigraph) -> Result<()> {
        if self.omega.len() == g.edge_count() {
            Ok(())
        } else {
            Err(Error::StressLength { expected: g.edge_count(), got: self.omega.len() })
        }
    }
}

pub fn stress_matrix(t: &Tensegrity, w: &Stress) -> Result<SymMatrix> {
    symmat::assemble_laplacian(&t.graph, &w.omega)
}

/// Subtract the centroid from every column.
pub fn centered(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.ncols();
    if n == 0 {
        return p.clone();
    }
    let c = p.column_mean();
    let mut q = p.clone();
    for mut col in q.column_iter_mut() {
        col -= &c;
    }
    q
}

/// Dimension of the affine span. Singular values of the centred
/// configuration count when they exceed `tol * max(σ_max, 1)`.
pub fn affine_dimension(p: &DMatrix<f64>, tol: f64) -> usize {
    let s = symmat::singular_values(&centered(p));
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > tol * smax.max(1.0)).count()
}

/// Coordinates of the points in an orthonormal frame of their affine span,
/// centred at the centroid; a `d × n` matrix with `d = affine_dimension`.
pub fn affine_coordinates(p: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let d = affine_dimension(p, tol);
    let c = centered(p);
    if d == 0 {
        return DMatrix::zeros(0, p.ncols());
    }
    let svd = c.clone().svd(true, false);
    let u = svd.u.unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let frame = u.select_columns(&idx[..d]);
    frame.transpose() * c
}

/// Gram matrix `PᵀP` of the centred configuration.
pub fn gram(p: &DMatrix<f64>) -> SymMatrix {
    let c = centered(p);
    SymMatrix::new(c.transpose() * c).expect("Gram matrices are symmetric")
}

/// Largest norm over vertices of the force sum `Σ ω(ij)(p(j) - p(i))`,
/// every parallel edge counted separately.
pub fn equilibrium_residual(t: &Tensegrity, w: &Stress) -> Result<f64> {
    w.check_len(&t.graph)?;
    let mut force = DMatrix::zeros(t.dim(), t.n());
    for (e, &(u, v)) in t.graph.edges().iter().enumerate() {
        let d = (t.p.column(v) - t.p.column(u)) * w.omega[e];
        let mut cu = force.column_mut(u);
        cu += &d;
        let mut cv = force.column_mut(v);
        cv -= &d;
    }
    Ok(force.column_iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// The `dn × m` equilibrium matrix: `E ω = 0` exactly for equilibrium stresses.
pub fn equilibrium_matrix(t: &Tensegrity) -> DMatrix<f64> {
    let d = t.dim();
    let mut e_mat = DMatrix::zeros(d * t.n(), t.graph.edge_count());
    for (e, &(u, v)) in t.graph.edges().iter().enumerate() {
        for k in 0..d {
            let diff = t.p[(k, v)] - t.p[(k, u)];
            e_mat[(u * d + k, e)] += diff;
            e_mat[(v * d + k, e)] -= diff;
        }
    }
    e_mat
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properness {
    pub strict: bool,
    pub proper: bool,
}

pub fn properness(t: &Tensegrity, w: &Stress) -> Result<Properness> {
    w.check_len(&t.graph)?;
    let prods = t.sigma.iter().zip(&w.omega).map(|(s, x)| s.value() * x);
    let (mut strict, mut proper) = (true, true);
    for x in prods {
        strict &= x > 0.0;
        proper &= x >= 0.0;
    }
    Ok(Properness { strict, proper })
}

/// A proper nonempty subset `F` of the edges at `v` whose force sum vanishes,
/// if one exists. Subsets are enumerated exhaustively.
pub fn splittable_at(t: &Tensegrity, w: &Stress, v: VertexId, tol: f64) -> Result<Option<Vec<EdgeId>>> {
    w.check_len(&t.graph)?;
    t.graph.check_vertex(v)?;
    let inc = t.graph.incident_edges(v);
    let k = inc.len();
    if k > MAX_SPLIT_DEGREE {
        return Err(Error::SizeCap { what: "vertex degree", got: k, limit: MAX_SPLIT_DEGREE });
    }
    if k < 2 {
        return Ok(None);
    }
    let pv = t.p.column(v);
    let forces: Vec<DVector<f64>> = inc
        .iter()
        .map(|&f| (t.p.column(t.graph.other(f, v)) - pv) * w.omega[f])
        .collect();
    // Subsets containing the first edge suffice: F and its complement both vanish.
    for mask in 1u32..(1u32 << (k - 1)) {
        let mask = (mask << 1) | 1;
        if mask == (1u32 << k) - 1 {
            continue;
        }
        let mut s = DVector::zeros(t.dim());
        for (i, f) in forces.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s += f;
            }
        }
        if s.norm() <= tol {
            return Ok(Some((0..k).filter(|i| mask & (1 << i) != 0).map(|i| inc[i]).collect()));
        }
    }
    // The subset {first edge} alone.
    if forces[0].norm() <= tol {
        return Ok(Some(vec![inc[0]]));
    }
    Ok(None)
}

/// Whether some vertex admits a splitting subset.
pub fn is_splittable(t: &Tensegrity, w: &Stress, tol: f64) -> Result<bool> {
    for v in 0..t.n() {
        if splittable_at(t, w, v, tol)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For every vertex `v`, the points at `v` and its neighbours span an affine
/// space of dimension at least `deg(v) - 1`. This forces every strictly
/// proper equilibrium stress to be non-splittable.
pub fn non_splittable_sufficient(t: &Tensegrity, tol: f64) -> bool {
    (0..t.n()).all(|v| {
        let deg = t.graph.degree(v);
        if deg == 0 {
            return true;
        }
        let mut cols = t.graph.neighbors(v);
        cols.push(v);
        let local = t.p.select_columns(&cols);
        affine_dimension(&local, tol) + 1 >= deg
    })
}

/// `C ω1 + ω2` for a generic large `C` such that the stress matrix is PSD of
/// nullity `d + 1` and the stress is non-splittable. `C` is drawn from
/// `10^k · u`, `k = 2..8`, `u ∈ [1, 2]`, and the result is verified.
pub fn combine_stresses<R: Rng + ?Sized>(
    t: &Tensegrity,
    w1: &Stress,
    w2: &Stress,
    tol: f64,
    rng: &mut R,
) -> Result<Stress> {
    let l1 = stress_matrix(t, w1)?;
    let pn = l1.psd_nullity(tol);
    let d = affine_dimension(&t.p, tol);
    if !pn.psd || pn.nullity != d + 1 {
        return Err(Error::Precondition("first stress is not PSD of nullity d+1".into()));
    }
    let scale = w1.omega.iter().chain(&w2.omega).fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    for k in 2..=8 {
        let c = 10f64.powi(k) * rng.random_range(1.0..2.0);
        let omega: Vec<f64> = w1.omega.iter().zip(&w2.omega).map(|(a, b)| c * a + b).collect();
        let w = Stress::new(omega);
        let l = stress_matrix(t, &w)?;
        let pn = l.psd_nullity(tol);
        if !(pn.psd && pn.determinate && pn.nullity == d + 1) {
            continue;
        }
        if !is_splittable(t, &w, tol * c * scale)? {
            return Ok(w);
        }
    }
    Err(Error::Verification("no generic multiplier produced a non-splittable stress".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// A cable may not become longer.
    CableMustNotLengthen,
    /// A strut may not become shorter.
    StrutMustNotShorten,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub edge: EdgeId,
    pub relation: Relation,
    pub original: f64,
    pub deformed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationVerdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Check the cable and strut inequalities for `q`, which may live in any
/// ambient dimension.
pub fn is_deformation(t: &Tensegrity, q: &DMatrix<f64>, tol: f64) -> Result<DeformationVerdict> {
    if q.ncols() != t.n() {
        return Err(Error::Dimension(format!("{} points for {} vertices", q.ncols(), t.n())));
    }
    let mut violations = Vec::new();
    for (e, &(u, v)) in t.graph.edges().iter().enumerate() {
        let original = (t.p.column(v) - t.p.column(u)).norm();
        let deformed = (q.column(v) - q.column(u)).norm();
        let bad = match t.sigma[e] {
            Sign::Cable => deformed > original + tol,
            Sign::Strut => deformed < original - tol,
        };
        if bad {
            let relation = match t.sigma[e] {
                Sign::Cable => Relation::CableMustNotLengthen,
                Sign::Strut => Relation::StrutMustNotShorten,
            };
            violations.push(Violation { edge: e, relation, original, deformed });
        }
    }
    Ok(DeformationVerdict { ok: violations.is_empty(), violations })
}

/// Congruence test via centred Gram matrices, entrywise within
/// `tol * max(1, max |Gram entry|)`.
pub fn is_congruent(p: &DMatrix<f64>, q: &DMatrix<f64>, tol: f64) -> bool {
    if p.ncols() != q.ncols() {
        return false;
    }
    let gp = gram(p);
    let gq = gram(q);
    let scale = gp.matrix().amax().max(gq.matrix().amax()).max(1.0);
    (gp.matrix() - gq.matrix()).amax() <= tol * scale
}
