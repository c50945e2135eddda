//! Multigraph minor containment with explicit branch-set models, and the
//! forbidden-minor catalogs for `λ ≤ 1` and `λ ≤ 2`.
//!
//! `H` is a minor of `G` when there are disjoint connected branch sets
//! `V_x ⊆ V(G)` such that `G` has at least as many edges between `V_x` and
//! `V_y` as `H` has between `x` and `y`. Parallel edges in `H` therefore need
//! parallel edges after contraction, which separates `K_3^=` from `K_3`.

use std::collections::VecDeque;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};

/// Largest host graph accepted by [`try_has_minor`].
pub const MAX_HOST_VERTICES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    /// `branch_sets[x]` is the sorted set of `G`-vertices for `H`-vertex `x`.
    pub branch_sets: Vec<Vec<VertexId>>,
}

impl MinorModel {
    /// `G`-edges joining the branch sets of `x` and `y`.
    pub fn cross_edges(&self, g: &Multigraph, x: VertexId, y: VertexId) -> Vec<EdgeId> {
        let owner = self.owner(g.n());
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| {
                (owner[a] == Some(x) && owner[b] == Some(y)) || (owner[a] == Some(y) && owner[b] == Some(x))
            })
            .map(|(e, _)| e)
            .collect()
    }

    /// `owner[v]` is the `H`-vertex whose branch set contains `v`.
    pub fn owner(&self, n: usize) -> Vec<Option<VertexId>> {
        let mut owner = vec![None; n];
        for (x, set) in self.branch_sets.iter().enumerate() {
            for &v in set {
                if v < n {
                    owner[v] = Some(x);
                }
            }
        }
        owner
    }

    /// Check every model invariant against `G` and `H`.
    pub fn validate(&self, g: &Multigraph, h: &Multigraph) -> Result<()> {
        if self.branch_sets.len() != h.n() {
            return Err(Error::Precondition("one branch set per H-vertex required".into()));
        }
        let mut seen = vec![false; g.n()];
        for set in &self.branch_sets {
            if set.is_empty() {
                return Err(Error::Precondition("empty branch set".into()));
            }
            for &v in set {
                g.check_vertex(v)?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Precondition(format!("vertex {v} in two branch sets")));
                }
            }
            let mask = to_mask(set);
            if !is_connected_mask(&adjacency_masks(g), mask) {
                return Err(Error::Precondition("branch set is not connected".into()));
            }
        }
        let mh = h.multiplicity_matrix();
        for x in 0..h.n() {
            for y in x + 1..h.n() {
                if self.cross_edges(g, x, y).len() < mh[x][y] {
                    return Err(Error::Precondition(format!("too few edges between branch sets {x} and {y}")));
                }
            }
        }
        Ok(())
    }
}

fn to_mask(set: &[VertexId]) -> u64 {
    set.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

fn from_mask(mask: u64) -> Vec<VertexId> {
    (0..64).filter(|&v| mask & (1u64 << v) != 0).collect()
}

fn adjacency_masks(g: &Multigraph) -> Vec<u64> {
    let mut adj = vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn is_connected_mask(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask.trailing_zeros() as usize;
    let mut reached = 1u64 << start;
    let mut frontier = reached;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !reached;
        reached |= new;
        frontier |= new;
    }
    reached == mask
}

/// All nonempty connected vertex subsets of `G`, smallest first.
fn connected_subsets(g: &Multigraph) -> Vec<u64> {
    let adj = adjacency_masks(g);
    let n = g.n();
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    // Grow sets from each vertex; `seen` removes duplicates.
    let mut queue: VecDeque<u64> = (0..n).map(|v| 1u64 << v).collect();
    for &m in &queue {
        seen.insert(m);
    }
    while let Some(m) = queue.pop_front() {
        out.push(m);
        let mut nb = 0u64;
        for v in from_mask(m) {
            nb |= adj[v];
        }
        nb &= !m;
        while nb != 0 {
            let v = nb.trailing_zeros();
            nb &= nb - 1;
            let next = m | (1u64 << v);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    out.sort_by_key(|m| (m.count_ones(), *m));
    out
}

struct Search<'a> {
    order: Vec<VertexId>,
    mh: Vec<Vec<usize>>,
    hdeg: Vec<usize>,
    mg: &'a [Vec<usize>],
    candidates: Vec<u64>,
    assigned: Vec<u64>,
}

impl Search<'_> {
    fn between(&self, a: u64, b: u64) -> usize {
        let mut total = 0;
        for u in from_mask(a) {
            for v in from_mask(b) {
                total += self.mg[u][v];
            }
        }
        total
    }

    fn out_degree(&self, a: u64) -> usize {
        let mut total = 0;
        for u in from_mask(a) {
            for (v, &m) in self.mg[u].iter().enumerate() {
                if a & (1 << v) == 0 {
                    total += m;
                }
            }
        }
        total
    }

    fn rec(&mut self, k: usize, used: u64, free: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let x = self.order[k];
        let remaining = self.order.len() - k;
        for i in 0..self.candidates.len() {
            let c = self.candidates[i];
            let size = c.count_ones() as usize;
            if size + remaining - 1 > free {
                break;
            }
            if c & used != 0 || self.out_degree(c) < self.hdeg[x] {
                continue;
            }
            let ok = self.order[..k].iter().all(|&y| {
                let need = self.mh[x][y];
                need == 0 || self.between(c, self.assigned[y]) >= need
            });
            if !ok {
                continue;
            }
            self.assigned[x] = c;
            if self.rec(k + 1, used | c, free - size) {
                return true;
            }
        }
        self.assigned[x] = 0;
        false
    }
}

/// Order `H`'s vertices so that every vertex after the first of its
/// component has an earlier neighbour; high degree first within BFS.
fn search_order(h: &Multigraph) -> Vec<VertexId> {
    let mh = h.multiplicity_matrix();
    let deg: Vec<usize> = mh.iter().map(|r| r.iter().sum()).collect();
    let mut seen = vec![false; h.n()];
    let mut order = Vec::with_capacity(h.n());
    let mut starts: Vec<VertexId> = (0..h.n()).collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nb: Vec<VertexId> = (0..h.n()).filter(|&w| mh[u][w] > 0 && !seen[w]).collect();
            nb.sort_by_key(|&w| std::cmp::Reverse(deg[w]));
            for w in nb {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

/// A model of `H` in `G`, if `H` is a minor of `G`.
///
/// # Panics
/// If `G` has more than [`MAX_HOST_VERTICES`] vertices; use
/// [`try_has_minor`] to get an error instead.
pub fn has_minor(g: &Multigraph, h: &Multigraph) -> Option<MinorModel> {
    try_has_minor(g, h).expect("host graph too large for minor search")
}

pub fn try_has_minor(g: &Multigraph, h: &Multigraph) -> Result<Option<MinorModel>> {
    if g.n() > MAX_HOST_VERTICES {
        return Err(Error::SizeCap { what: "host vertices", got: g.n(), limit: MAX_HOST_VERTICES });
    }
    if h.n() > g.n() || h.edge_count() > g.edge_count() {
        return Ok(None);
    }
    if h.n() == 0 {
        return Ok(Some(MinorModel { branch_sets: Vec::new() }));
    }
    let mg = g.multiplicity_matrix();
    let mh = h.multiplicity_matrix();
    let hdeg = mh.iter().map(|r| r.iter().sum()).collect();
    let mut s = Search {
        order: search_order(h),
        mh,
        hdeg,
        mg: &mg,
        candidates: connected_subsets(g),
        assigned: vec![0; h.n()],
    };
    if s.rec(0, 0, g.n()) {
        let model = MinorModel { branch_sets: s.assigned.iter().map(|&m| from_mask(m)).collect() };
        debug_assert!(model.validate(g, h).is_ok());
        Ok(Some(model))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogLevel {
    LambdaLe1,
    LambdaLe2,
}

impl CatalogLevel {
    pub fn file_name(self) -> &'static str {
        match self {
            CatalogLevel::LambdaLe1 => "lambda_le_1.json",
            CatalogLevel::LambdaLe2 => "lambda_le_2.json",
        }
    }

    fn embedded(self) -> &'static str {
        match self {
            CatalogLevel::LambdaLe1 => include_str!("../data/catalog/lambda_le_1.json"),
            CatalogLevel::LambdaLe2 => include_str!("../data/catalog/lambda_le_2.json"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogMember {
    pub label: String,
    #[serde(flatten)]
    pub graph: Multigraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCatalog {
    pub version: u32,
    pub name: String,
    /// True when the member list is the full obstruction set; otherwise a
    /// miss proves nothing.
    pub complete: bool,
    pub threshold: String,
    pub members: Vec<CatalogMember>,
}

impl MinorCatalog {
    pub fn parse(text: &str) -> Result<MinorCatalog> {
        let cat: MinorCatalog =
            serde_json::from_str(text).map_err(|e| Error::Data(format!("catalog: {e}")))?;
        for i in 0..cat.members.len() {
            for j in i + 1..cat.members.len() {
                if cat.members[i].graph.is_isomorphic(&cat.members[j].graph) {
                    return Err(Error::Data(format!(
                        "catalog members {} and {} are isomorphic",
                        cat.members[i].label, cat.members[j].label
                    )));
                }
            }
        }
        Ok(cat)
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Multigraph> {
        self.members.iter().map(|m| &m.graph)
    }
}

/// Environment variable naming a data directory with a `catalog/` folder.
pub const DATA_DIR_ENV: &str = "SUPERSTAB_DATA_DIR";

/// Load a catalog from `$SUPERSTAB_DATA_DIR/catalog/` when that variable is
/// set, otherwise from the copy compiled into the library.
pub fn catalog(level: CatalogLevel) -> Result<MinorCatalog> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join("catalog").join(level.file_name());
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
            MinorCatalog::parse(&text)
        }
        None => MinorCatalog::parse(level.embedded()),
    }
}

/// The first catalog member that is a minor of `G`, with its model.
pub fn contains_any(g: &Multigraph, cat: &MinorCatalog) -> Option<(usize, MinorModel)> {
    cat.members.iter().enumerate().find_map(|(i, m)| has_minor(g, &m.graph).map(|model| (i, model)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_containment() {
        let k4 = Multigraph::complete(4);
        let k3 = Multigraph::complete(3);
        let m = has_minor(&k4, &k3).unwrap();
        m.validate(&k4, &k3).unwrap();
        assert!(has_minor(&Multigraph::cycle(4), &k4).is_none());
        assert!(has_minor(&Multigraph::theta(3), &Multigraph::complete_multi(3)).is_none());
    }

    #[test]
    fn petersen_has_k5() {
        let p = Multigraph::petersen();
        let k5 = Multigraph::complete(5);
        let m = has_minor(&p, &k5).unwrap();
        m.validate(&p, &k5).unwrap();
        assert!(m.branch_sets.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn multiplicity_matters() {
        let k3m = Multigraph::complete_multi(3);
        assert!(has_minor(&Multigraph::complete(3), &k3m).is_none());
        // K_4 contracts to K_3 with two doubled pairs, not K_3^=.
        assert!(has_minor(&Multigraph::complete(4), &k3m).is_none());
        // K_5 contracts an edge to K_4 with three doubled pairs; K_3^= needs
        // three doubled pairs inside a triangle, which K_5 gives.
        assert!(has_minor(&Multigraph::complete(5), &k3m).is_some());
        assert!(has_minor(&Multigraph::cycle(4).double(), &Multigraph::theta(2)).is_some());
    }

    #[test]
    fn size_cap() {
        let big = Multigraph::path(MAX_HOST_VERTICES + 1);
        assert!(matches!(try_has_minor(&big, &Multigraph::path(2)), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn catalogs_load() {
        let c1 = catalog(CatalogLevel::LambdaLe1).unwrap();
        assert!(c1.complete);
        assert_eq!(c1.members.len(), 2);
        assert!(c1.members[0].graph.is_isomorphic(&Multigraph::complete(4)));
        assert!(c1.members[1].graph.is_isomorphic(&Multigraph::complete_multi(3)));
        let c2 = catalog(CatalogLevel::LambdaLe2).unwrap();
        assert_eq!(c2.members.len(), 7);
        for g in [Multigraph::complete(5), Multigraph::cube(), Multigraph::octahedron(), Multigraph::complete_multi(4)] {
            assert!(c2.graphs().any(|m| m.is_isomorphic(&g)));
        }
    }

    #[test]
    fn catalog_rejects_duplicates() {
        let text = r#"{"version":1,"name":"x","complete":false,"threshold":"",
            "members":[{"label":"a","n":3,"edges":[[0,1],[1,2],[2,0]]},
                       {"label":"b","n":3,"edges":[[1,2],[0,1],[0,2]]}]}"#;
        assert!(matches!(MinorCatalog::parse(text), Err(Error::Data(_))));
        assert!(MinorCatalog::parse("{").is_err());
    }

    #[test]
    fn contains_any_cases() {
        let c1 = catalog(CatalogLevel::LambdaLe1).unwrap();
        let c2 = catalog(CatalogLevel::LambdaLe2).unwrap();
        let (i, m) = contains_any(&Multigraph::complete(6), &c2).unwrap();
        assert_eq!(c2.members[i].label, "K_5");
        m.validate(&Multigraph::complete(6), &c2.members[i].graph).unwrap();
        assert!(contains_any(&Multigraph::cycle(5), &c1).is_none());
        let (i, _) = contains_any(&Multigraph::complete_multi(3), &c1).unwrap();
        assert_eq!(c1.members[i].label, "K_3^=");
    }

    #[test]
    fn figure_members_are_minimal_against_each_other() {
        let c2 = catalog(CatalogLevel::LambdaLe2).unwrap();
        for (i, a) in c2.members.iter().enumerate() {
            for (j, b) in c2.members.iter().enumerate() {
                if i != j {
                    assert!(has_minor(&a.graph, &b.graph).is_none(), "{} > {}", a.label, b.label);
                }
            }
        }
    }
}
