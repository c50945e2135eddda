//! Chordality by maximum cardinality search, maximal cliques, clique trees
//! and the exact realizable dimension of chordal multigraphs.

use serde::{Deserialize, Serialize};

use crate::multigraph::{Multigraph, VertexId};
use crate::params::treedec::TreeDecomposition;

/// Maximum cardinality search order (first visited first).
pub fn mcs_order(g: &Multigraph) -> Vec<VertexId> {
    let n = g.n();
    let nb: Vec<Vec<VertexId>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !done[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
        done[v] = true;
        order.push(v);
        for &w in &nb[v] {
            if !done[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// A perfect elimination ordering of `si(G)`, if `G` is chordal.
pub fn perfect_elimination_order(g: &Multigraph) -> Option<Vec<VertexId>> {
    let mut peo = mcs_order(g);
    peo.reverse();
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    let adj = g.multiplicity_matrix();
    for &v in &peo {
        let later: Vec<VertexId> = g.neighbors(v).into_iter().filter(|&w| pos[w] > pos[v]).collect();
        if let Some(&p) = later.iter().min_by_key(|&&w| pos[w]) {
            if later.iter().any(|&w| w != p && adj[p][w] == 0) {
                return None;
            }
        }
    }
    Some(peo)
}

pub fn is_chordal(g: &Multigraph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Maximal cliques of a chordal graph, each sorted.
pub fn maximal_cliques(g: &Multigraph, peo: &[VertexId]) -> Vec<Vec<VertexId>> {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    let mut cands: Vec<Vec<VertexId>> = peo
        .iter()
        .map(|&v| {
            let mut c: Vec<VertexId> = g.neighbors(v).into_iter().filter(|&w| pos[w] > pos[v]).collect();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    cands.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for c in cands {
        if !out.iter().any(|m| c.iter().all(|v| m.binary_search(v).is_ok())) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// Clique tree: a maximum-weight spanning tree of the clique intersection
/// graph (weights = intersection sizes), joined into one tree.
pub fn clique_tree(cliques: &[Vec<VertexId>]) -> TreeDecomposition {
    let k = cliques.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = cliques[i].iter().filter(|v| cliques[j].binary_search(v).is_ok()).count();
            pairs.push((w, i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (_, i, j) in pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            edges.push((i, j));
        }
    }
    TreeDecomposition::new(cliques.to_vec(), edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalAnalysis {
    pub tw: usize,
    pub rd_exact: usize,
    pub lambda_exact: usize,
    /// Some maximum clique has every pair doubled or shared with another
    /// maximal clique.
    pub criterion_met: bool,
    pub clique_tree: TreeDecomposition,
}

/// Exact `rd` and `λ` for multigraphs whose simplification is chordal.
///
/// For treewidth at least 2, `rd = λ = tw` when the criterion holds and
/// `tw - 1` otherwise. For treewidth at most 1 the values are set directly:
/// a graph with an edge has `rd = 1` (a strut cannot shorten) and `λ` is 0
/// for forests and 1 otherwise.
pub fn chordal_analysis(g: &Multigraph) -> Option<ChordalAnalysis> {
    let peo = perfect_elimination_order(g)?;
    let cliques = maximal_cliques(g, &peo);
    let tree = clique_tree(&cliques);
    let max = cliques.iter().map(|c| c.len()).max().unwrap_or(0);
    let tw = max.saturating_sub(1);
    let criterion_met = cliques.iter().enumerate().any(|(i, c)| {
        c.len() == max
            && c.iter().enumerate().all(|(a, &u)| {
                c[a + 1..].iter().all(|&v| {
                    g.multiplicity(u, v) >= 2
                        || cliques.iter().enumerate().any(|(j, d)| {
                            j != i && d.binary_search(&u).is_ok() && d.binary_search(&v).is_ok()
                        })
                })
            })
    });
    let (rd_exact, lambda_exact) = if tw >= 2 {
        let r = if criterion_met { tw } else { tw - 1 };
        (r, r)
    } else if g.edge_count() == 0 {
        (0, 0)
    } else {
        (1, if g.is_forest() { 0 } else { 1 })
    };
    Some(ChordalAnalysis { tw, rd_exact, lambda_exact, criterion_met, clique_tree: tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::treedec::{treewidth_exact, validate_td};

    #[test]
    fn chordality() {
        assert!(is_chordal(&Multigraph::complete(5)));
        assert!(!is_chordal(&Multigraph::cycle(4)));
        assert!(!is_chordal(&Multigraph::cycle(6)));
        assert!(is_chordal(&Multigraph::cycle(3)));
        assert!(is_chordal(&Multigraph::path(5)));
        let mut c4 = Multigraph::cycle(4);
        c4.push_edge(0, 2).unwrap();
        assert!(is_chordal(&c4));
    }

    #[test]
    fn k4_and_k4_double() {
        let a = chordal_analysis(&Multigraph::complete(4)).unwrap();
        assert_eq!((a.tw, a.rd_exact, a.criterion_met), (3, 2, false));
        let b = chordal_analysis(&Multigraph::complete_multi(4)).unwrap();
        assert_eq!((b.tw, b.rd_exact, b.criterion_met), (3, 3, true));
        assert!(chordal_analysis(&Multigraph::cycle(4)).is_none());
    }

    #[test]
    fn clique_tree_is_decomposition() {
        let g = Multigraph::new(6, vec![(0, 1), (1, 2), (0, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let a = chordal_analysis(&g).unwrap();
        let v = validate_td(&g, &a.clique_tree);
        assert!(v.valid, "{:?}", v.violations);
        assert_eq!(a.tw, treewidth_exact(&g).unwrap().0);
    }

    #[test]
    fn shared_pairs_meet_criterion() {
        // Two triangles sharing edge 12, all single edges: the maximum
        // clique {0,1,2} has pair 01 only there, so the criterion fails.
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!chordal_analysis(&g).unwrap().criterion_met);
        // Doubling 01 and 02 makes {0,1,2} satisfy it.
        let g2 = Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (0, 2), (0, 2), (1, 3), (2, 3)]).unwrap();
        let a = chordal_analysis(&g2).unwrap();
        assert!(a.criterion_met);
        assert_eq!(a.rd_exact, 2);
    }

    #[test]
    fn low_treewidth() {
        let p = chordal_analysis(&Multigraph::path(4)).unwrap();
        assert_eq!((p.tw, p.rd_exact, p.lambda_exact), (1, 1, 0));
        let t = chordal_analysis(&Multigraph::theta(2)).unwrap();
        assert_eq!((t.tw, t.rd_exact, t.lambda_exact), (1, 1, 1));
        let e = chordal_analysis(&Multigraph::empty(3)).unwrap();
        assert_eq!((e.tw, e.rd_exact), (0, 0));
    }
}
