//! Loop-free multigraphs with stable edge ids.
//!
//! Vertices are `0..n`, edges are an ordered list of unordered pairs and an
//! edge's id is its index in that list. Operations that derive a new graph
//! return a [`Derived`] value carrying old-id to new-id maps so that data keyed
//! by edge id (signs, stresses) can follow the graph through the operation.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[VertexId; 2]>,
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        Multigraph::new(g.n, g.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<Multigraph> for GraphJson {
    fn from(g: Multigraph) -> Self {
        GraphJson { n: g.n, edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

/// All edges sharing one unordered endpoint pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelClass {
    /// Endpoints with `endpoints.0 < endpoints.1`.
    pub endpoints: (VertexId, VertexId),
    pub members: Vec<EdgeId>,
}

/// A graph obtained from another one, with id maps from the source graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub graph: Multigraph,
    /// `vertex_map[old]` is the new id, or `None` if the vertex disappeared.
    pub vertex_map: Vec<Option<VertexId>>,
    /// `edge_map[old]` is the new id, or `None` if the edge disappeared.
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Result of [`Multigraph::vertex_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSplit {
    pub graph: Multigraph,
    /// The new vertex; it carries the moved block. Always the old `n`.
    pub v0: VertexId,
    /// The split vertex, which keeps its id and the remaining edges.
    pub v1: VertexId,
    /// Ids of the new `v0 v1` edges, appended after the old edges.
    pub bridges: Vec<EdgeId>,
}

/// Result of [`Multigraph::subdivide`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: Multigraph,
    pub new_vertex: VertexId,
    /// The edge `(w, v)`; the original id now names `(u, w)`.
    pub new_edge: EdgeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConnectivityOptions {
    /// Treat a two-vertex graph with at least two parallel edges as 2-connected.
    pub two_vertex_multi_edge: bool,
}

impl Default for ConnectivityOptions {
    fn default() -> Self {
        ConnectivityOptions { two_vertex_multi_edge: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub components: Vec<Vec<VertexId>>,
    pub is_2connected: bool,
}

/// An open ear: a path whose end vertices already exist and whose interior
/// vertices are new.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ear {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::Loop(u));
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph { n, edges }
    }

    /// `K_n^=`: every pair joined by two parallel edges.
    pub fn complete_multi(n: usize) -> Self {
        Self::complete(n).double()
    }

    pub fn path(n: usize) -> Self {
        Multigraph { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    /// The cycle `v_0 v_1 ... v_{n-1} v_0`; the closing edge is last.
    /// For `n = 2` this is `K_2^=`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 2 {
            g.edges.push((n - 1, 0));
        }
        g
    }

    /// `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Self {
        Multigraph { n: k + 1, edges: (1..=k).map(|i| (0, i)).collect() }
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn theta(k: usize) -> Self {
        Multigraph { n: 2, edges: vec![(0, 1); k] }
    }

    /// The 3-cube `Q_3`; vertex bits are coordinates.
    pub fn cube() -> Self {
        let mut edges = Vec::new();
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges.sort();
        Multigraph { n: 8, edges }
    }

    /// `K_{2,2,2}`: the octahedron, non-adjacent pairs `{0,5}`, `{1,4}`, `{2,3}`.
    pub fn octahedron() -> Self {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if u + v != 5 {
                    edges.push((u, v));
                }
            }
        }
        Multigraph { n: 6, edges }
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Multigraph { n: 10, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(e).copied().ok_or(Error::InvalidEdge(e))
    }

    /// Given an edge and one endpoint, return the other endpoint.
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Append an edge in place and return its id.
    pub fn push_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    /// Append an isolated vertex in place and return its id.
    pub fn push_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n - 1
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    /// Number of incident edges, parallel edges counted separately.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Distinct neighbours in increasing order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Adjacency lists with one entry per edge: `(neighbour, edge id)`.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| (a == u && b == v) || (a == v && b == u))
            .count()
    }

    /// Symmetric matrix of edge multiplicities.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            m[v][u] += 1;
        }
        m
    }

    /// Parallel classes ordered by their smallest member.
    pub fn parallel_classes(&self) -> Vec<ParallelClass> {
        let mut index: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        let mut classes: Vec<ParallelClass> = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let key = (u.min(v), u.max(v));
            match index.get(&key) {
                Some(&i) => classes[i].members.push(e),
                None => {
                    index.insert(key, classes.len());
                    classes.push(ParallelClass { endpoints: key, members: vec![e] });
                }
            }
        }
        classes
    }

    pub fn is_simple(&self) -> bool {
        self.parallel_classes().len() == self.edges.len()
    }

    /// `si(G)`: one edge per parallel class, in class order.
    pub fn simplify(&self) -> Multigraph {
        let edges = self.parallel_classes().iter().map(|c| c.endpoints).collect();
        Multigraph { n: self.n, edges }
    }

    /// `G^=`: every class of `si(G)` doubled; the two copies are consecutive.
    pub fn double(&self) -> Multigraph {
        let edges = self
            .parallel_classes()
            .iter()
            .flat_map(|c| [c.endpoints, c.endpoints])
            .collect();
        Multigraph { n: self.n, edges }
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Derived> {
        self.endpoints(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        let edge_map = (0..self.edges.len())
            .map(|f| match f.cmp(&e) {
                std::cmp::Ordering::Less => Some(f),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(f - 1),
            })
            .collect();
        Ok(Derived {
            graph: Multigraph { n: self.n, edges },
            vertex_map: (0..self.n).map(Some).collect(),
            edge_map,
        })
    }

    /// Delete a vertex with its incident edges; higher ids shift down by one.
    pub fn delete_vertex(&self, v: VertexId) -> Result<Derived> {
        self.check_vertex(v)?;
        let vertex_map: Vec<Option<VertexId>> = (0..self.n)
            .map(|u| match u.cmp(&v) {
                std::cmp::Ordering::Less => Some(u),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(u - 1),
            })
            .collect();
        Ok(self.relabel_partial(self.n - 1, &vertex_map))
    }

    /// Keep the edges whose endpoints both survive `vertex_map`, in order.
    fn relabel_partial(&self, n: usize, vertex_map: &[Option<VertexId>]) -> Derived {
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            match (vertex_map[u], vertex_map[v]) {
                (Some(a), Some(b)) if a != b => {
                    edge_map.push(Some(edges.len()));
                    edges.push((a, b));
                }
                _ => edge_map.push(None),
            }
        }
        Derived { graph: Multigraph { n, edges }, vertex_map: vertex_map.to_vec(), edge_map }
    }

    /// Contract edge `e`. The merged vertex takes the smaller endpoint id,
    /// edges parallel to `e` are dropped and the remaining ids are compacted.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Derived> {
        let (a, b) = self.endpoints(e)?;
        let (keep, gone) = (a.min(b), a.max(b));
        let vertex_map: Vec<Option<VertexId>> = (0..self.n)
            .map(|u| {
                Some(match u.cmp(&gone) {
                    std::cmp::Ordering::Less => u,
                    std::cmp::Ordering::Equal => keep,
                    std::cmp::Ordering::Greater => u - 1,
                })
            })
            .collect();
        Ok(self.relabel_partial(self.n - 1, &vertex_map))
    }

    /// Split `v`: the edges in `block0` move to a new vertex `v0 = n`, the
    /// others stay at `v1 = v`, and `bridge_count` edges `v0 v1` are appended.
    pub fn vertex_split(
        &self,
        v: VertexId,
        block0: &[EdgeId],
        bridge_count: usize,
    ) -> Result<VertexSplit> {
        self.check_vertex(v)?;
        if bridge_count == 0 {
            return Err(Error::BadPartition(v, "bridge_count must be positive".into()));
        }
        let mut seen = vec![false; self.edges.len()];
        for &f in block0 {
            let (a, b) = self.endpoints(f)?;
            if a != v && b != v {
                return Err(Error::BadPartition(v, format!("edge {f} is not incident")));
            }
            if std::mem::replace(&mut seen[f], true) {
                return Err(Error::BadPartition(v, format!("edge {f} listed twice")));
            }
        }
        let v0 = self.n;
        let mut edges = self.edges.clone();
        for &f in block0 {
            let (a, b) = edges[f];
            edges[f] = if a == v { (v0, b) } else { (a, v0) };
        }
        let first = edges.len();
        edges.extend(std::iter::repeat_n((v0, v), bridge_count));
        Ok(VertexSplit {
            graph: Multigraph { n: self.n + 1, edges },
            v0,
            v1: v,
            bridges: (first..first + bridge_count).collect(),
        })
    }

    /// Subdivide `e = (u, v)` with a new vertex `w = n`: `e` becomes `(u, w)`
    /// and `(w, v)` is appended.
    pub fn subdivide(&self, e: EdgeId) -> Result<Subdivision> {
        let (u, v) = self.endpoints(e)?;
        let w = self.n;
        let mut edges = self.edges.clone();
        edges[e] = (u, w);
        edges.push((w, v));
        Ok(Subdivision {
            graph: Multigraph { n: self.n + 1, edges },
            new_vertex: w,
            new_edge: self.edges.len(),
        })
    }

    /// The cone `∇G`. The cone vertex is `n`; the pair joining it to base
    /// vertex `v` has ids `m + 2v` and `m + 2v + 1`.
    pub fn cone(&self) -> (Multigraph, VertexId) {
        let c = self.n;
        let mut edges = self.edges.clone();
        for v in 0..self.n {
            edges.push((v, c));
            edges.push((v, c));
        }
        (Multigraph { n: self.n + 1, edges }, c)
    }

    /// Replace a degree-3 vertex with three distinct neighbours by a triangle.
    pub fn y_delta(&self, v: VertexId) -> Result<Derived> {
        self.check_vertex(v)?;
        let inc = self.incident_edges(v);
        let nb = self.neighbors(v);
        if inc.len() != 3 || nb.len() != 3 {
            return Err(Error::NotYVertex { vertex: v, degree: inc.len() });
        }
        let mut d = self.delete_vertex(v)?;
        let m: Vec<VertexId> = nb.iter().map(|&u| d.vertex_map[u].unwrap()).collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            d.graph.edges.push((m[a], m[b]));
        }
        Ok(d)
    }

    /// Subgraph formed by the given edges and their end vertices, relabelled
    /// to `0..k` in increasing order of the old vertex ids.
    pub fn edge_subgraph(&self, sub: &[EdgeId]) -> Result<Derived> {
        let mut used = vec![false; self.n];
        for &e in sub {
            let (u, v) = self.endpoints(e)?;
            used[u] = true;
            used[v] = true;
        }
        let mut vertex_map = vec![None; self.n];
        let mut k = 0;
        for v in 0..self.n {
            if used[v] {
                vertex_map[v] = Some(k);
                k += 1;
            }
        }
        let mut edge_map = vec![None; self.edges.len()];
        let mut edges = Vec::with_capacity(sub.len());
        for &e in sub {
            let (u, v) = self.edges[e];
            edge_map[e] = Some(edges.len());
            edges.push((vertex_map[u].unwrap(), vertex_map[v].unwrap()));
        }
        Ok(Derived { graph: Multigraph { n: k, edges }, vertex_map, edge_map })
    }

    /// Rename vertices by the permutation `perm[old] = new`; edge ids unchanged.
    pub fn permute_vertices(&self, perm: &[VertexId]) -> Result<Multigraph> {
        let mut check = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::Dimension(format!("permutation of length {}", perm.len())));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut check[p], true) {
                return Err(Error::Precondition("not a permutation".into()));
            }
        }
        Ok(Multigraph {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
        })
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_without(None)
    }

    fn components_without(&self, skip: Option<VertexId>) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        if let Some(s) = skip {
            seen[s] = true;
        }
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Forest check on the multigraph (parallel edges form cycles).
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.n
    }

    pub fn cut_vertices(&self) -> Vec<VertexId> {
        let base = self.components().len();
        (0..self.n)
            .filter(|&v| {
                let isolated = self.degree(v) == 0;
                !isolated && self.components_without(Some(v)).len() > base
            })
            .collect()
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity_with(ConnectivityOptions::default())
    }

    pub fn connectivity_with(&self, opts: ConnectivityOptions) -> Connectivity {
        let components = self.components();
        let is_2connected = match self.n {
            0 | 1 => false,
            2 => opts.two_vertex_multi_edge && self.edges.len() >= 2,
            _ => components.len() == 1 && self.cut_vertices().is_empty(),
        };
        Connectivity { components, is_2connected }
    }

    pub fn is_2connected(&self) -> bool {
        self.connectivity().is_2connected
    }

    /// Open ear decomposition of `self` starting from the subgraph formed by
    /// the edges in `sub`. Attaching the returned ears in order, starting from
    /// that subgraph, rebuilds `self` with every intermediate graph 2-connected.
    pub fn ear_sequence(&self, sub: &[EdgeId]) -> Result<Vec<Ear>> {
        if !self.is_2connected() {
            return Err(Error::Precondition("graph is not 2-connected".into()));
        }
        let h = self.edge_subgraph(sub)?;
        if !h.graph.is_2connected() {
            return Err(Error::Precondition("subgraph is not 2-connected".into()));
        }
        let adj = self.adjacency();
        let mut in_v: Vec<bool> = h.vertex_map.iter().map(Option::is_some).collect();
        let mut in_e = vec![false; self.edges.len()];
        for &e in sub {
            in_e[e] = true;
        }
        let mut ears = Vec::new();
        while let Some(e) = (0..self.edges.len())
            .find(|&e| !in_e[e] && (in_v[self.edges[e].0] || in_v[self.edges[e].1]))
        {
            let (x, y) = self.edges[e];
            let (a, b) = if in_v[x] { (x, y) } else { (y, x) };
            let ear = if in_v[b] {
                Ear { vertices: vec![a, b], edges: vec![e] }
            } else {
                // BFS from b through new vertices to an existing vertex other than a.
                let mut prev: Vec<Option<(VertexId, EdgeId)>> = vec![None; self.n];
                let mut seen = vec![false; self.n];
                seen[a] = true;
                seen[b] = true;
                let mut queue = VecDeque::from([b]);
                let mut hit = None;
                'bfs: while let Some(u) = queue.pop_front() {
                    for &(w, f) in &adj[u] {
                        if seen[w] || in_e[f] {
                            continue;
                        }
                        seen[w] = true;
                        prev[w] = Some((u, f));
                        if in_v[w] {
                            hit = Some(w);
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
                let c = hit.ok_or_else(|| {
                    Error::Precondition("ear search failed; graph not 2-connected".into())
                })?;
                let mut rev_v = vec![c];
                let mut rev_e = Vec::new();
                let mut cur = c;
                while let Some((u, f)) = prev[cur] {
                    rev_e.push(f);
                    rev_v.push(u);
                    cur = u;
                }
                let mut vertices = vec![a];
                vertices.extend(rev_v.into_iter().rev());
                let mut edges = vec![e];
                edges.extend(rev_e.into_iter().rev());
                Ear { vertices, edges }
            };
            for &v in &ear.vertices {
                in_v[v] = true;
            }
            for &f in &ear.edges {
                in_e[f] = true;
            }
            ears.push(ear);
        }
        if in_e.iter().any(|&b| !b) || in_v.iter().any(|&b| !b) {
            return Err(Error::Precondition("subgraph does not reach every edge".into()));
        }
        Ok(ears)
    }

    /// Degree sequence, counting parallel edges, sorted decreasingly.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Brute-force isomorphism with degree pruning, returning `map[self] = other`.
    pub fn isomorphism(&self, other: &Multigraph) -> Option<Vec<VertexId>> {
        if self.n != other.n
            || self.edges.len() != other.edges.len()
            || self.degree_sequence() != other.degree_sequence()
        {
            return None;
        }
        let a = self.multiplicity_matrix();
        let b = other.multiplicity_matrix();
        let da: Vec<usize> = a.iter().map(|r| r.iter().sum()).collect();
        let db: Vec<usize> = b.iter().map(|r| r.iter().sum()).collect();
        let mut order: Vec<VertexId> = (0..self.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(da[v]));
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        fn rec(
            k: usize,
            order: &[VertexId],
            a: &[Vec<usize>],
            b: &[Vec<usize>],
            da: &[usize],
            db: &[usize],
            map: &mut [VertexId],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let v = order[k];
            for w in 0..b.len() {
                if used[w] || da[v] != db[w] {
                    continue;
                }
                if order[..k].iter().any(|&u| a[v][u] != b[w][map[u]]) {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if rec(k + 1, order, a, b, da, db, map, used) {
                    return true;
                }
                used[w] = false;
            }
            false
        }
        if rec(0, &order, &a, &b, &da, &db, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Multigraph) -> bool {
        self.isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Multigraph {
        Multigraph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn rejects_loops_and_bad_ids() {
        assert_eq!(Multigraph::new(2, vec![(1, 1)]), Err(Error::Loop(1)));
        assert_eq!(Multigraph::new(2, vec![(0, 2)]), Err(Error::InvalidVertex(2)));
    }

    #[test]
    fn simplify_and_double() {
        let k3 = Multigraph::complete(3);
        assert_eq!(Multigraph::complete_multi(3).simplify(), k3);
        assert_eq!(k3.simplify(), k3);
        assert_eq!(Multigraph::theta(3).simplify(), Multigraph::path(2));
        let k2 = Multigraph::path(2);
        assert_eq!(k2.double(), Multigraph::theta(2));
        assert_eq!(Multigraph::complete_multi(3).double(), Multigraph::complete_multi(3));
        assert_eq!(Multigraph::cycle(4).double().edge_count(), 8);
    }

    #[test]
    fn delete_edge_cases() {
        let p = Multigraph::cycle(4).delete_edge(3).unwrap().graph;
        assert!(p.is_isomorphic(&Multigraph::path(4)));
        let k2 = Multigraph::theta(2).delete_edge(0).unwrap().graph;
        assert_eq!(k2, Multigraph::path(2));
        assert_eq!(Multigraph::empty(3).delete_edge(0).unwrap_err(), Error::InvalidEdge(0));
    }

    #[test]
    fn contract_edge_cases() {
        let c3 = Multigraph::cycle(4).contract_edge(0).unwrap();
        assert!(c3.graph.is_isomorphic(&Multigraph::cycle(3)));
        assert_eq!(c3.vertex_map, vec![Some(0), Some(0), Some(1), Some(2)]);
        assert_eq!(c3.edge_map[0], None);

        let pt = Multigraph::theta(2).contract_edge(1).unwrap().graph;
        assert_eq!(pt, Multigraph::empty(1));

        // K_4 / 01: vertex 0 absorbs 1, so pairs 02 and 03 are doubled.
        let k = Multigraph::complete(4).contract_edge(0).unwrap().graph;
        let expect = g(3, &[(0, 1), (0, 2), (0, 1), (0, 2), (1, 2)]);
        assert!(k.is_isomorphic(&expect));
        assert_eq!(k.simplify().edge_count(), 3);
    }

    #[test]
    fn vertex_split_cases() {
        let c3 = Multigraph::cycle(3);
        let inc = c3.incident_edges(1);
        let s = c3.vertex_split(1, &inc[..1], 1).unwrap();
        assert!(s.graph.is_isomorphic(&Multigraph::cycle(4)));

        let s = c3.vertex_split(0, &[], 1).unwrap();
        assert_eq!(s.graph.degree(s.v0), 1);
        assert_eq!(s.graph.edge_count(), 4);

        let k4 = Multigraph::complete(4);
        let inc = k4.incident_edges(2);
        let s = k4.vertex_split(2, &inc[..2], 1).unwrap();
        let back = s.graph.contract_edge(s.bridges[0]).unwrap().graph;
        assert!(back.is_isomorphic(&k4));

        assert!(matches!(k4.vertex_split(0, &[5], 1), Err(Error::BadPartition(0, _))));
        assert!(matches!(k4.vertex_split(7, &[], 1), Err(Error::InvalidVertex(7))));
    }

    #[test]
    fn cone_counts() {
        let (c, v) = Multigraph::empty(1).cone();
        assert_eq!(c, Multigraph::theta(2));
        assert_eq!(v, 1);
        assert_eq!(Multigraph::path(2).cone().0.edge_count(), 5);
        assert_eq!(Multigraph::cycle(3).cone().0.edge_count(), 9);
    }

    #[test]
    fn y_delta_cases() {
        let t = Multigraph::star(3).y_delta(0).unwrap().graph;
        assert!(t.is_isomorphic(&Multigraph::complete(3)));
        let q = Multigraph::cube().y_delta(0).unwrap().graph;
        assert_eq!(q.edge_count(), 12 - 3 + 3);
        assert_eq!(q.n(), 7);
        let k5 = Multigraph::complete(5);
        assert!(matches!(k5.y_delta(0), Err(Error::NotYVertex { degree: 4, .. })));
        let rep = g(3, &[(0, 1), (0, 1), (0, 2)]);
        assert!(rep.y_delta(0).is_err());
    }

    #[test]
    fn connectivity_cases() {
        assert!(Multigraph::cycle(4).is_2connected());
        let p3 = Multigraph::path(3).connectivity();
        assert_eq!(p3.components.len(), 1);
        assert!(!p3.is_2connected);
        let two = g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(two.components().len(), 2);
        assert!(Multigraph::theta(2).is_2connected());
        let strict = ConnectivityOptions { two_vertex_multi_edge: false };
        assert!(!Multigraph::theta(2).connectivity_with(strict).is_2connected);
        assert!(!Multigraph::path(2).is_2connected());
    }

    fn replay(gr: &Multigraph, sub: &[EdgeId], ears: &[Ear]) -> Multigraph {
        let mut edges: Vec<EdgeId> = sub.to_vec();
        for ear in ears {
            assert!(ear.vertices.first() != ear.vertices.last());
            edges.extend(&ear.edges);
            let h = gr.edge_subgraph(&edges).unwrap().graph;
            assert!(h.is_2connected());
        }
        gr.edge_subgraph(&edges).unwrap().graph
    }

    #[test]
    fn ear_sequence_cases() {
        let mut c4 = Multigraph::cycle(4);
        c4.push_edge(0, 2).unwrap();
        let ears = c4.ear_sequence(&[0, 1, 2, 3]).unwrap();
        assert_eq!(ears.len(), 1);
        assert_eq!(ears[0].edges, vec![4]);

        let k4 = Multigraph::complete(4);
        let tri: Vec<EdgeId> = (0..6).filter(|&e| k4.edges()[e].1 < 3).collect();
        let ears = k4.ear_sequence(&tri).unwrap();
        assert!(replay(&k4, &tri, &ears).is_isomorphic(&k4));

        let th = Multigraph::theta(3);
        let ears = th.ear_sequence(&[0, 1]).unwrap();
        assert_eq!(ears, vec![Ear { vertices: vec![0, 1], edges: vec![2] }]);

        let pet = Multigraph::petersen();
        let outer: Vec<EdgeId> = (0..15).filter(|&e| {
            let (u, v) = pet.edges()[e];
            u < 5 && v < 5
        }).collect();
        let ears = pet.ear_sequence(&outer).unwrap();
        assert!(replay(&pet, &outer, &ears).is_isomorphic(&pet));

        assert!(Multigraph::path(3).ear_sequence(&[0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = Multigraph::complete_multi(3);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(serde_json::from_str::<Multigraph>(&s).unwrap(), k);
        assert!(serde_json::from_str::<Multigraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(Multigraph::cube().edge_count(), 12);
        assert!(Multigraph::cube().degree_sequence().iter().all(|&d| d == 3));
        assert_eq!(Multigraph::octahedron().edge_count(), 12);
        assert!(Multigraph::petersen().degree_sequence().iter().all(|&d| d == 3));
        assert!(!Multigraph::cube().is_isomorphic(&Multigraph::octahedron()));
    }
}
