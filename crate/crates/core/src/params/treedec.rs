//! Tree decompositions, exact treewidth by dynamic programming over vertex
//! subsets, and the search for lacking optimal decompositions.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};

/// Largest vertex count for [`treewidth_exact`].
pub const MAX_TW_VERTICES: usize = 16;

/// Default number of elimination orderings examined by [`find_lacking_optimal`].
pub const DEFAULT_TD_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Sorted vertex sets.
    pub bags: Vec<Vec<VertexId>>,
    /// Pairs of bag indices.
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn tree_neighbors(&self, i: usize) -> Vec<usize> {
        self.tree_edges
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect()
    }

    /// Bags in the component of `start` after deleting bag `removed`.
    pub fn component_without(&self, start: usize, removed: usize) -> Vec<usize> {
        self.component(start, Some(removed))
    }

    fn component(&self, start: usize, removed: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.bags.len()];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = vec![start];
        while let Some(i) = stack.pop() {
            for j in self.tree_neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    out.push(j);
                    stack.push(j);
                }
            }
        }
        out
    }

    fn canonical(&self) -> (BTreeSet<Vec<VertexId>>, BTreeSet<(Vec<VertexId>, Vec<VertexId>)>) {
        let bags = self.bags.iter().cloned().collect();
        let edges = self
            .tree_edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.bags[a].clone(), self.bags[b].clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        (bags, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdValidation {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Check vertex coverage, edge coverage, the subtree property, that the
/// bag graph is a tree, and that no bag contains another.
pub fn validate_td(g: &Multigraph, td: &TreeDecomposition) -> TdValidation {
    let mut violations = Vec::new();
    let k = td.bags.len();
    for b in &td.bags {
        if let Some(&v) = b.iter().find(|&&v| v >= g.n()) {
            violations.push(format!("bag mentions unknown vertex {v}"));
        }
    }
    for &(a, b) in &td.tree_edges {
        if a >= k || b >= k || a == b {
            violations.push(format!("bad tree edge ({a}, {b})"));
        }
    }
    if !violations.is_empty() {
        return TdValidation { valid: false, violations };
    }
    // Tree: k - 1 edges and connected.
    if k > 0 && (td.tree_edges.len() != k - 1 || td.component(0, None).len() != k) {
        violations.push("bag graph is not a tree".into());
    }
    let contains = |b: &Vec<VertexId>, v: VertexId| b.binary_search(&v).is_ok();
    for v in 0..g.n() {
        let holding: Vec<usize> = (0..k).filter(|&i| contains(&td.bags[i], v)).collect();
        if holding.is_empty() {
            violations.push(format!("vertex {v} is in no bag"));
            continue;
        }
        // Connectedness of the bags holding v within the tree.
        let set: HashSet<usize> = holding.iter().copied().collect();
        let mut seen = HashSet::from([holding[0]]);
        let mut stack = vec![holding[0]];
        while let Some(i) = stack.pop() {
            for j in td.tree_neighbors(i) {
                if set.contains(&j) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        if seen.len() != holding.len() {
            violations.push(format!("bags containing vertex {v} do not form a subtree"));
        }
    }
    for &(u, v) in g.simplify().edges() {
        if !td.bags.iter().any(|b| contains(b, u) && contains(b, v)) {
            violations.push(format!("edge {{{u}, {v}}} is in no bag"));
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i != j && td.bags[i].iter().all(|&v| contains(&td.bags[j], v)) {
                violations.push(format!("bag {i} is contained in bag {j}"));
            }
        }
    }
    TdValidation { valid: violations.is_empty(), violations }
}

fn adjacency_masks(g: &Multigraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`: the neighbours
/// of `v` in the graph after eliminating `s`.
fn q_set(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut reached = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(u) = stack.pop() {
        let mut nb = adj[u] & !reached;
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            reached |= 1 << w;
            if s & (1 << w) != 0 {
                stack.push(w);
            } else {
                out |= 1 << w;
            }
        }
    }
    out
}

struct TwTables {
    adj: Vec<u32>,
    n: usize,
    /// `best[S]`: least width of an elimination of `S` first.
    best: Vec<u8>,
}

impl TwTables {
    fn build(g: &Multigraph) -> Result<TwTables> {
        let n = g.n();
        if n > MAX_TW_VERTICES {
            return Err(Error::SizeCap { what: "treewidth vertices", got: n, limit: MAX_TW_VERTICES });
        }
        let adj = adjacency_masks(g);
        let full = 1usize << n;
        let mut best = vec![u8::MAX; full];
        best[0] = 0;
        for s in 1..full {
            let mut b = u8::MAX;
            let mut rest = s as u32;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let prev = s & !(1 << v);
                let q = q_set(&adj, prev as u32, v).count_ones() as u8;
                b = b.min(best[prev].max(q));
            }
            best[s] = b;
        }
        Ok(TwTables { adj, n, best })
    }

    fn tw(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.best[(1 << self.n) - 1] as usize
        }
    }

    /// An optimal elimination ordering, recovered backwards.
    fn optimal_order(&self) -> Vec<usize> {
        let tw = self.tw() as u8;
        let mut s = (1usize << self.n) - 1;
        let mut rev = Vec::with_capacity(self.n);
        while s != 0 {
            let mut rest = s as u32;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let prev = s & !(1 << v);
                let q = q_set(&self.adj, prev as u32, v).count_ones() as u8;
                if self.best[prev] <= tw && q <= tw {
                    rev.push(v);
                    s = prev;
                    break;
                }
            }
        }
        rev.reverse();
        rev
    }
}

/// Tree decomposition from an elimination ordering; contained bags are
/// merged into a neighbour.
pub fn decomposition_from_order(g: &Multigraph, order: &[VertexId]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), Vec::new());
    }
    let adj = adjacency_masks(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut eliminated = 0u32;
    for (i, &v) in order.iter().enumerate() {
        let q = q_set(&adj, eliminated, v);
        let mut bag = vec![v];
        let mut first: Option<usize> = None;
        let mut rest = q;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bag.push(w);
            if first.is_none_or(|f| pos[w] < pos[order[f]]) {
                first = Some(pos[w]);
            }
        }
        parent[i] = first;
        bags.push(bag);
        eliminated |= 1 << v;
    }
    // Roots of the elimination forest are chained together.
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for i in 0..n {
        match parent[i] {
            Some(p) => edges.push((i, p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    contract_contained(TreeDecomposition::new(bags, edges))
}

/// Merge every bag contained in a tree neighbour into that neighbour.
pub fn contract_contained(mut td: TreeDecomposition) -> TreeDecomposition {
    loop {
        let mut merge = None;
        'find: for &(a, b) in &td.tree_edges {
            for (x, y) in [(a, b), (b, a)] {
                if td.bags[x].iter().all(|v| td.bags[y].binary_search(v).is_ok()) {
                    merge = Some((x, y));
                    break 'find;
                }
            }
        }
        let Some((gone, keep)) = merge else { return td };
        let mut edges: Vec<(usize, usize)> = td
            .tree_edges
            .iter()
            .filter(|&&(a, b)| !((a == gone && b == keep) || (a == keep && b == gone)))
            .map(|&(a, b)| (if a == gone { keep } else { a }, if b == gone { keep } else { b }))
            .collect();
        let remap = |i: usize| if i > gone { i - 1 } else { i };
        for e in edges.iter_mut() {
            *e = (remap(e.0), remap(e.1));
        }
        td.bags.remove(gone);
        td.tree_edges = edges;
    }
}

/// Exact treewidth of `si(G)` with an optimal decomposition.
pub fn treewidth_exact(g: &Multigraph) -> Result<(usize, TreeDecomposition)> {
    let t = TwTables::build(g)?;
    let order = t.optimal_order();
    let td = decomposition_from_order(g, &order);
    Ok((t.tw(), td))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lacking {
    pub lacking: bool,
    pub non_lacking_bags: Vec<usize>,
}

/// A pair in bag `i` that is not doubled and lies in no other bag.
pub fn lacking_pair(g: &Multigraph, td: &TreeDecomposition, i: usize) -> Option<(VertexId, VertexId)> {
    let bag = &td.bags[i];
    for (a, &u) in bag.iter().enumerate() {
        for &v in &bag[a + 1..] {
            if g.multiplicity(u, v) >= 2 {
                continue;
            }
            let elsewhere = td.bags.iter().enumerate().any(|(j, b)| {
                j != i && b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok()
            });
            if !elsewhere {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn is_lacking(g: &Multigraph, td: &TreeDecomposition) -> Result<Lacking> {
    let val = validate_td(g, td);
    if !val.valid {
        return Err(Error::Precondition(format!("invalid tree decomposition: {}", val.violations.join("; "))));
    }
    let w = td.width();
    let non_lacking_bags: Vec<usize> = (0..td.bags.len())
        .filter(|&i| td.bags[i].len() - 1 >= w && lacking_pair(g, td, i).is_none())
        .collect();
    Ok(Lacking { lacking: non_lacking_bags.is_empty(), non_lacking_bags })
}

/// Outcome of searching optimal decompositions for a lacking one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LackingSearch {
    pub treewidth: usize,
    pub found: Option<TreeDecomposition>,
    /// Distinct decompositions examined.
    pub examined: usize,
    /// True when every optimal elimination ordering was visited.
    pub exhausted: bool,
}

/// Enumerate optimal elimination orderings (at most `budget`) and return the
/// first induced decomposition that is lacking.
pub fn find_lacking_optimal(g: &Multigraph, budget: usize) -> Result<LackingSearch> {
    let t = TwTables::build(g)?;
    let tw = t.tw();
    let n = g.n();
    if n == 0 {
        return Ok(LackingSearch { treewidth: 0, found: None, examined: 0, exhausted: true });
    }
    let full = (1usize << n) - 1;
    // feasible[S]: the rest can be eliminated after S within width tw.
    let mut feasible = vec![false; full + 1];
    feasible[full] = true;
    for s in (0..full).rev() {
        let mut rest = (!s & full) as u32;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = s | (1 << v);
            if feasible[next] && q_set(&t.adj, s as u32, v).count_ones() as usize <= tw {
                feasible[s] = true;
                break;
            }
        }
    }
    let mut seen = HashSet::new();
    let mut orders_left = budget;
    let mut order = Vec::with_capacity(n);
    let mut found = None;
    let complete = dfs_orders(g, &t.adj, tw, full, &feasible, 0, &mut order, &mut orders_left, &mut |td| {
        if seen.insert(td.canonical()) && is_lacking(g, &td).map(|l| l.lacking).unwrap_or(false) {
            found = Some(td);
            return true;
        }
        false
    });
    Ok(LackingSearch { treewidth: tw, examined: seen.len(), exhausted: complete && found.is_none(), found })
}

/// Depth-first enumeration of optimal orderings. Returns false when the
/// budget ran out before the enumeration finished.
#[allow(clippy::too_many_arguments)]
fn dfs_orders(
    g: &Multigraph,
    adj: &[u32],
    tw: usize,
    full: usize,
    feasible: &[bool],
    s: usize,
    order: &mut Vec<usize>,
    left: &mut usize,
    visit: &mut dyn FnMut(TreeDecomposition) -> bool,
) -> bool {
    if s == full {
        if *left == 0 {
            return false;
        }
        *left -= 1;
        if visit(decomposition_from_order(g, order)) {
            *left = 0;
            return false;
        }
        return true;
    }
    let mut rest = (!s & full) as u32;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = s | (1 << v);
        if feasible[next] && q_set(adj, s as u32, v).count_ones() as usize <= tw {
            order.push(v);
            let cont = dfs_orders(g, adj, tw, full, feasible, next, order, left, visit);
            order.pop();
            if !cont {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_cases() {
        let k3 = Multigraph::complete(3);
        let one = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        assert!(validate_td(&k3, &one).valid);
        let missing = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let v = validate_td(&k3, &missing);
        assert!(!v.valid && v.violations.iter().any(|s| s.contains("edge")));
        let nested = TreeDecomposition::new(vec![vec![0, 1, 2], vec![1, 2]], vec![(0, 1)]);
        let v = validate_td(&k3, &nested);
        assert!(v.violations.iter().any(|s| s.contains("contained")));
        let broken = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3], vec![1, 2]], vec![(0, 1), (1, 2)]);
        let v = validate_td(&Multigraph::path(4), &broken);
        assert!(v.violations.iter().any(|s| s.contains("subtree")));
    }

    #[test]
    fn treewidth_values() {
        for n in 3..8 {
            let (tw, td) = treewidth_exact(&Multigraph::cycle(n)).unwrap();
            assert_eq!(tw, 2);
            assert!(validate_td(&Multigraph::cycle(n), &td).valid);
        }
        for n in 1..7 {
            assert_eq!(treewidth_exact(&Multigraph::complete(n)).unwrap().0, n - 1);
        }
        assert_eq!(treewidth_exact(&Multigraph::star(5)).unwrap().0, 1);
        assert_eq!(treewidth_exact(&Multigraph::path(6)).unwrap().0, 1);
        assert_eq!(treewidth_exact(&Multigraph::petersen()).unwrap().0, 4);
        assert_eq!(treewidth_exact(&Multigraph::cube()).unwrap().0, 3);
        assert_eq!(treewidth_exact(&Multigraph::octahedron()).unwrap().0, 4);
        assert!(treewidth_exact(&Multigraph::path(17)).is_err());
    }

    #[test]
    fn decomposition_is_valid_on_disconnected() {
        let g = Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let (tw, td) = treewidth_exact(&g).unwrap();
        assert_eq!(tw, 2);
        let v = validate_td(&g, &td);
        assert!(v.valid, "{:?}", v.violations);
    }

    #[test]
    fn lacking_cases() {
        let k4 = Multigraph::complete(4);
        let single = TreeDecomposition::new(vec![vec![0, 1, 2, 3]], vec![]);
        assert!(is_lacking(&k4, &single).unwrap().lacking);
        let k4m = Multigraph::complete_multi(4);
        let l = is_lacking(&k4m, &single).unwrap();
        assert!(!l.lacking && l.non_lacking_bags == vec![0]);
        // Smaller bag is lacking by width.
        let g = Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2), (2, 3), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![2, 3]], vec![(0, 1)]);
        let l = is_lacking(&g, &td).unwrap();
        assert_eq!(l.non_lacking_bags, vec![0]);
    }

    #[test]
    fn lacking_search() {
        let s = find_lacking_optimal(&Multigraph::complete_multi(3), DEFAULT_TD_BUDGET).unwrap();
        assert!(s.found.is_none() && s.exhausted);
        let s = find_lacking_optimal(&Multigraph::cycle(5), DEFAULT_TD_BUDGET).unwrap();
        assert!(s.found.is_some());
        assert_eq!(s.treewidth, 2);
    }
}
