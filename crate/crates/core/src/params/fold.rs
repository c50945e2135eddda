//! Folding a tensegrity into `w - 1` dimensions along a lacking tree
//! decomposition of width `w`.
//!
//! First every full bag is made flat by rotating one side of the tree about
//! the affine span of the bag minus its lacking pair. Then the bags are
//! placed one after another into a fixed `(w - 1)`-dimensional subspace by
//! isometries that fix the separator with the parent bag.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use crate::error::{Error, Result};
use crate::multigraph::VertexId;
use crate::params::treedec::{find_lacking_optimal, is_lacking, lacking_pair, TreeDecomposition};
use crate::tensegrity::{affine_coordinates, affine_dimension, is_deformation, DeformationVerdict, Sign, Tensegrity};

#[derive(Clone, Debug, PartialEq)]
pub struct FoldResult {
    /// `dim × n` coordinates of the folded configuration.
    pub points: DMatrix<f64>,
    pub dim: usize,
    /// True when the input already spanned at most `dim` dimensions.
    pub unchanged: bool,
    pub deformation: DeformationVerdict,
}

/// Orthonormal basis (columns) of the span of `vecs`, extended greedily.
fn extend_basis(basis: &mut Vec<DVector<f64>>, v: &DVector<f64>, tol: f64) -> bool {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            w -= b * b.dot(&w);
        }
    }
    let nrm = w.norm();
    if nrm > tol {
        basis.push(w / nrm);
        true
    } else {
        false
    }
}

fn span_basis(p: &DMatrix<f64>, verts: &[VertexId], origin: &DVector<f64>, tol: f64) -> Vec<DVector<f64>> {
    let mut basis = Vec::new();
    for &x in verts {
        extend_basis(&mut basis, &(p.column(x) - origin), tol);
    }
    basis
}

fn project_off(basis: &[DVector<f64>], v: &DVector<f64>) -> DVector<f64> {
    let mut w = v.clone();
    for b in basis {
        w -= b * b.dot(&w);
    }
    w
}

fn columns(basis: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    if basis.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(basis)
    }
}

/// Fold `t` along the lacking decomposition `td` into `td.width() - 1`
/// dimensions. Errors with [`Error::NotLacking`] when `td` is not lacking.
pub fn fold(t: &Tensegrity, td: &TreeDecomposition, tol: f64) -> Result<FoldResult> {
    let g = t.graph();
    let lack = is_lacking(g, td)?;
    if !lack.lacking {
        return Err(Error::NotLacking(format!("bags {:?} have no lacking pair", lack.non_lacking_bags)));
    }
    let w = td.width();
    if w < 2 {
        return Err(Error::Precondition("folding needs a decomposition of width at least 2".into()));
    }
    let d = w - 1;
    let big = t.dim();
    let p0 = t.points().clone();
    let scale = p0.amax().max(1.0);
    let geo_tol = tol * scale;

    if affine_dimension(&p0, tol) <= d {
        let mut points = DMatrix::zeros(d, t.n());
        let ac = affine_coordinates(&p0, tol);
        points.rows_mut(0, ac.nrows()).copy_from(&ac);
        let deformation = is_deformation(t, &points, geo_tol)?;
        return Ok(FoldResult { points, dim: d, unchanged: true, deformation });
    }

    let mut p = p0;
    // Phase 1: flatten the full bags.
    for (i, bag) in td.bags.iter().enumerate() {
        if bag.len() != w + 1 {
            continue;
        }
        let pts = p.select_columns(bag.iter());
        if affine_dimension(&pts, tol) <= d {
            continue;
        }
        let (u, v) = lacking_pair(g, td, i).expect("full bags of a lacking decomposition have a lacking pair");
        let axis: Vec<VertexId> = bag.iter().copied().filter(|&x| x != u && x != v).collect();
        let o: DVector<f64> = p.column(axis[0]).into();
        let k_basis = span_basis(&p, &axis, &o, geo_tol);
        let u_perp = project_off(&k_basis, &(p.column(u) - &o));
        let v_perp = project_off(&k_basis, &(p.column(v) - &o));
        let e1 = v_perp.normalize();
        let mut plane = vec![e1.clone()];
        if v_perp.norm() <= geo_tol || u_perp.norm() <= geo_tol || !extend_basis(&mut plane, &u_perp, geo_tol) {
            continue;
        }
        let e2 = plane[1].clone();
        let theta0 = u_perp.dot(&e2).atan2(u_perp.dot(&e1));
        // Shrink the pair for a cable or no edge, stretch it for a strut.
        let strut = g
            .edges()
            .iter()
            .enumerate()
            .any(|(e, &(a, b))| ((a, b) == (u, v) || (a, b) == (v, u)) && t.sigma()[e] == Sign::Strut);
        let theta = if strut { theta0 - std::f64::consts::PI } else { theta0 };
        let (s, c) = theta.sin_cos();
        let rot = DMatrix::identity(big, big) + (&e1 * e1.transpose() + &e2 * e2.transpose()) * (c - 1.0)
            + (&e2 * e1.transpose() - &e1 * e2.transpose()) * s;

        let mut moving = vec![false; t.n()];
        moving[v] = true;
        for nb in td.tree_neighbors(i) {
            let comp = td.component_without(nb, i);
            if comp.iter().any(|&j| td.bags[j].binary_search(&v).is_ok()) {
                for j in comp {
                    for &x in &td.bags[j] {
                        if bag.binary_search(&x).is_err() {
                            moving[x] = true;
                        }
                    }
                }
            }
        }
        for x in (0..t.n()).filter(|&x| moving[x]) {
            let q = &o + &rot * (p.column(x) - &o);
            p.set_column(x, &q);
        }
    }

    // Phase 2: place bags into a d-dimensional subspace H.
    let root = 0;
    let h_origin: DVector<f64> = p.column(td.bags[root][0]).into();
    let mut h_basis = span_basis(&p, &td.bags[root], &h_origin, geo_tol);
    if h_basis.len() > d {
        return Err(Error::Fold(format!("root bag spans {} dimensions after flattening", h_basis.len())));
    }
    for k in 0..big {
        if h_basis.len() == d {
            break;
        }
        let mut ek = DVector::zeros(big);
        ek[k] = 1.0;
        extend_basis(&mut h_basis, &ek, 1e-6);
    }

    let nb = td.bags.len();
    let mut parent = vec![usize::MAX; nb];
    let mut seen = vec![false; nb];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut order = Vec::new();
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for j in td.tree_neighbors(i) {
            if !seen[j] {
                seen[j] = true;
                parent[j] = i;
                queue.push_back(j);
            }
        }
    }

    for &i in &order[1..] {
        let par = parent[i];
        let bag = &td.bags[i];
        let sep: Vec<VertexId> = bag.iter().copied().filter(|x| td.bags[par].binary_search(x).is_ok()).collect();
        let subtree = td.component_without(i, par);
        let mut in_sub = vec![false; t.n()];
        for &j in &subtree {
            for &x in &td.bags[j] {
                if sep.binary_search(&x).is_err() {
                    in_sub[x] = true;
                }
            }
        }
        let (anchor, target): (DVector<f64>, DVector<f64>) = match sep.first() {
            Some(&s0) => (p.column(s0).into(), p.column(s0).into()),
            None => (p.column(bag[0]).into(), h_origin.clone()),
        };
        let fixed: Vec<VertexId> = if sep.is_empty() { vec![bag[0]] } else { sep.clone() };
        let u_s = span_basis(&p, &fixed, &anchor, geo_tol);
        let mut u_1 = u_s.clone();
        for &x in bag {
            extend_basis(&mut u_1, &(p.column(x) - &anchor), geo_tol);
        }
        let u_1: Vec<DVector<f64>> = u_1[u_s.len()..].to_vec();
        // Directions of H orthogonal to aff(S).
        let h_perp: Vec<DVector<f64>> = {
            let mut b = u_s.clone();
            for h in &h_basis {
                extend_basis(&mut b, h, 1e-6);
            }
            b[u_s.len()..].to_vec()
        };
        let h_proj = |v: &DVector<f64>| -> DVector<f64> {
            let mut w = DVector::zeros(big);
            for h in &h_perp {
                w += h * h.dot(v);
            }
            w
        };
        let mut u_2 = u_s.clone();
        for x in &u_1 {
            extend_basis(&mut u_2, &h_proj(x), 1e-6);
        }
        for h in &h_perp {
            if u_2.len() >= u_s.len() + u_1.len() {
                break;
            }
            extend_basis(&mut u_2, h, 1e-6);
        }
        if u_2.len() < u_s.len() + u_1.len() {
            return Err(Error::Fold(format!("bag {i} does not fit into {d} dimensions")));
        }
        let mut a = u_s.clone();
        a.extend(u_1.iter().cloned());
        let mut b = u_2;
        for k in 0..big {
            let mut ek = DVector::zeros(big);
            ek[k] = 1.0;
            if a.len() < big {
                extend_basis(&mut a, &ek, 1e-6);
            }
            if b.len() < big {
                extend_basis(&mut b, &ek, 1e-6);
            }
        }
        let q = columns(&b, big) * columns(&a, big).transpose();
        for x in (0..t.n()).filter(|&x| in_sub[x]) {
            let y = &target + &q * (p.column(x) - &anchor);
            p.set_column(x, &y);
        }
    }

    let hb = columns(&h_basis, big);
    let mut points = DMatrix::zeros(d, t.n());
    for x in 0..t.n() {
        let c = hb.transpose() * (p.column(x) - &h_origin);
        points.set_column(x, &c);
    }
    let deformation = is_deformation(t, &points, geo_tol.max(1e-9) * 10.0)?;
    Ok(FoldResult { points, dim: d, unchanged: false, deformation })
}

/// Search the optimal decompositions for a lacking one and fold along it.
pub fn fold_optimal(t: &Tensegrity, budget: usize, tol: f64) -> Result<(TreeDecomposition, FoldResult)> {
    let search = find_lacking_optimal(t.graph(), budget)?;
    let td = search.found.ok_or_else(|| {
        Error::NotLacking(if search.exhausted {
            "no optimal tree decomposition is lacking".into()
        } else {
            format!("no lacking decomposition among {} examined", search.examined)
        })
    })?;
    let res = fold(t, &td, tol)?;
    Ok((td, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Multigraph;
    use crate::tensegrity::is_congruent;

    fn square(sign: Sign) -> Tensegrity {
        let p = DMatrix::from_row_slice(2, 4, &[0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        Tensegrity::new(Multigraph::cycle(4), vec![sign; 4], p).unwrap()
    }

    #[test]
    fn square_folds_to_line() {
        let t = square(Sign::Cable);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
        let r = fold(&t, &td, 1e-9).unwrap();
        assert_eq!(r.dim, 1);
        assert!(r.deformation.ok, "{:?}", r.deformation.violations);
        assert!(!r.unchanged);
        // Edge lengths are preserved or shortened, and the shape changed.
        assert!(!is_congruent(t.points(), &r.points.clone().insert_row(1, 0.0), 1e-6));
    }

    #[test]
    fn struts_fold_too() {
        let t = square(Sign::Strut);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
        let r = fold(&t, &td, 1e-9).unwrap();
        assert!(r.deformation.ok, "{:?}", r.deformation.violations);
    }

    #[test]
    fn not_lacking_errors() {
        let g = Multigraph::complete_multi(3);
        let p = DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let t = Tensegrity::new(g.clone(), vec![Sign::Cable; g.edge_count()], p).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        assert!(matches!(fold(&t, &td, 1e-9), Err(Error::NotLacking(_))));
        assert!(matches!(fold_optimal(&t, 1000, 1e-9), Err(Error::NotLacking(_))));
    }

    #[test]
    fn flat_input_is_unchanged() {
        let p = DMatrix::from_row_slice(2, 4, &[0.0, 1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0]);
        let t = Tensegrity::new(Multigraph::cycle(4), vec![Sign::Cable; 4], p).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
        let r = fold(&t, &td, 1e-9).unwrap();
        assert!(r.unchanged);
        assert!(r.deformation.ok);
    }

    #[test]
    fn triangle_fan_in_space_folds_to_line() {
        // Three triangles sharing vertex 0, placed generically in R^3.
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (0, 2), (0, 3), (2, 3), (0, 4), (3, 4)]).unwrap();
        let p = DMatrix::from_row_slice(
            3,
            5,
            &[0.0, 1.0, 0.3, -0.5, 0.2, 0.0, 0.2, 1.0, 0.7, -0.9, 0.0, 0.1, 0.4, 1.1, 0.8],
        );
        let sigma = vec![Sign::Cable, Sign::Strut, Sign::Cable, Sign::Strut, Sign::Cable, Sign::Cable, Sign::Strut];
        let t = Tensegrity::new(g, sigma, p).unwrap();
        let (td, r) = fold_optimal(&t, 1000, 1e-9).unwrap();
        assert_eq!(td.width(), 2);
        assert_eq!(r.dim, 1);
        assert!(r.deformation.ok, "{:?}", r.deformation.violations);
    }
}
