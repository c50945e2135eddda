//! Realize a host graph from a certificate for one of its minors: expand each
//! branch set by vertex splits along a spanning tree, then attach the rest of
//! the host as ears.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::ops::{attach_ear, split_vertex_certificate, SplitSpec};
use super::{certify, ConstructOptions};
use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::minors::try_has_minor;
use crate::multigraph::{EdgeId, Multigraph, VertexId};

/// Spanning tree of `g[set]` with the leaves that carry no terminal pruned
/// away. Returns the kept vertices and the tree edges among them.
fn pruned_tree(g: &Multigraph, set: &[VertexId], terminal: &[bool]) -> (Vec<VertexId>, Vec<EdgeId>) {
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in set {
        inside[v] = true;
    }
    let adj = g.adjacency();
    let root = set.iter().copied().find(|&v| terminal[v]).unwrap_or(set[0]);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, f) in &adj[u] {
            if inside[w] && !seen[w] {
                seen[w] = true;
                tree.push(f);
                queue.push_back(w);
            }
        }
    }
    let mut keep: Vec<bool> = (0..n).map(|v| inside[v]).collect();
    loop {
        let mut deg = vec![0usize; n];
        for &f in &tree {
            let (a, b) = g.edges()[f];
            deg[a] += 1;
            deg[b] += 1;
        }
        let Some(leaf) = (0..n).find(|&v| keep[v] && deg[v] <= 1 && !terminal[v] && !tree.is_empty()) else {
            break;
        };
        keep[leaf] = false;
        tree.retain(|&f| {
            let (a, b) = g.edges()[f];
            a != leaf && b != leaf
        });
    }
    let verts = set.iter().copied().filter(|&v| keep[v]).collect::<Vec<_>>();
    let verts = if verts.is_empty() { vec![root] } else { verts };
    (verts, tree)
}

/// Vertices of `set` reachable from `start` along `tree` without using `cut`.
fn side(g: &Multigraph, tree: &[EdgeId], cut: EdgeId, start: VertexId, set: &[VertexId]) -> Vec<VertexId> {
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        i += 1;
        for &f in tree {
            if f == cut {
                continue;
            }
            let (a, b) = g.edges()[f];
            let w = if a == u { b } else if b == u { a } else { continue };
            if set.contains(&w) && !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// A certificate for `g` built from `cert_h`, a certificate for a minor `H`
/// of `g`. The dimension is kept. When `cert_h` is injective so is the
/// result; otherwise the error says which stage failed.
pub fn realize_from_minor(g: &Multigraph, cert_h: &Certificate, opts: &ConstructOptions) -> Result<Certificate> {
    let h = cert_h.tensegrity.graph().clone();
    let model = try_has_minor(g, &h)?.ok_or_else(|| Error::Precondition("H is not a minor of G".into()))?;

    // Pick one G-edge per H-edge.
    let mut used = vec![false; g.edge_count()];
    let mut edge_origin = Vec::with_capacity(h.edge_count());
    for &(x, y) in h.edges() {
        let f = model
            .cross_edges(g, x, y)
            .into_iter()
            .find(|&f| !used[f])
            .ok_or_else(|| Error::Precondition("minor model lacks a cross edge".into()))?;
        used[f] = true;
        edge_origin.push(f);
    }
    let mut terminal = vec![false; g.n()];
    for &f in &edge_origin {
        let (a, b) = g.edges()[f];
        terminal[a] = true;
        terminal[b] = true;
    }

    // Expand every branch set by splits along its pruned spanning tree.
    // `groups[c]` lists the G-vertices still merged into current vertex `c`.
    let mut cert = cert_h.clone();
    let injective = cert_h.tensegrity.is_injective(opts.tol);
    let mut groups: Vec<Vec<VertexId>> = Vec::new();
    let mut trees = Vec::new();
    for set in &model.branch_sets {
        let (verts, tree) = pruned_tree(g, set, &terminal);
        groups.push(verts);
        trees.push(tree);
    }
    let mut work: Vec<(VertexId, usize)> = (0..h.n()).map(|x| (x, x)).collect();
    while let Some((c, x)) = work.pop() {
        let set = groups[c].clone();
        let Some(&cut) = trees[x].iter().find(|&&f| {
            let (a, b) = g.edges()[f];
            set.contains(&a) && set.contains(&b)
        }) else {
            continue;
        };
        let (a, b) = g.edges()[cut];
        let far = side(g, &trees[x], cut, b, &set);
        let cg = cert.tensegrity.graph();
        let block0: Vec<EdgeId> = cg
            .incident_edges(c)
            .into_iter()
            .filter(|&f| {
                let (p, q) = g.edges()[edge_origin[f]];
                far.contains(&p) || far.contains(&q)
            })
            .collect();
        let out = split_vertex_certificate(&cert, &SplitSpec { vertex: c, block0 }, opts, injective)
            .map_err(|e| e.at_stage(format!("split of G-edge {a}-{b}")))?;
        cert = out.certificate;
        edge_origin.push(cut);
        used[cut] = true;
        groups[c] = set.iter().copied().filter(|v| !far.contains(v)).collect();
        groups.push(far);
        work.push((c, x));
        work.push((out.v0, x));
    }
    let mut vertex_origin: Vec<VertexId> = groups.iter().map(|s| s[0]).collect();

    // Attach the remaining edges and vertices of G as ears.
    let sub: Vec<EdgeId> = (0..g.edge_count()).filter(|&f| used[f]).collect();
    if sub.len() < g.edge_count() {
        let ears = g.ear_sequence(&sub).map_err(|e| e.at_stage("ear decomposition"))?;
        let mut current = vec![None; g.n()];
        for (c, &v) in vertex_origin.iter().enumerate() {
            current[v] = Some(c);
        }
        for (i, ear) in ears.iter().enumerate() {
            let n = cert.tensegrity.n();
            let mut path = Vec::with_capacity(ear.vertices.len());
            let last = ear.vertices.len() - 1;
            for (k, &v) in ear.vertices.iter().enumerate() {
                if k == 0 || k == last {
                    path.push(current[v].ok_or_else(|| Error::Precondition(format!("ear end {v} not placed")))?);
                } else {
                    current[v] = Some(n + k - 1);
                    vertex_origin.push(v);
                    path.push(n + k - 1);
                }
            }
            cert = attach_ear(&cert, &path, opts).map_err(|e| e.at_stage(format!("ear {i}")))?;
            edge_origin.extend(&ear.edges);
        }
    }

    // Relabel to the vertex and edge order of G.
    if vertex_origin.len() != g.n() || edge_origin.len() != g.edge_count() {
        return Err(Error::Precondition("construction did not reach every vertex and edge of G".into()));
    }
    let t = &cert.tensegrity;
    let mut p = DMatrix::zeros(t.dim(), g.n());
    for (c, &v) in vertex_origin.iter().enumerate() {
        p.set_column(v, &t.point(c));
    }
    let mut omega = vec![0.0; g.edge_count()];
    for (f, &e) in edge_origin.iter().enumerate() {
        omega[e] = cert.stress.omega[f];
    }
    let out = certify(g.clone(), omega, p, opts.tol, "realize_from_minor")?;
    if injective && !out.tensegrity.is_injective(opts.tol) {
        return Err(Error::Verification("realization is not injective".into()).at_stage("final check"));
    }
    Ok(out)
}
