//! Test-side oracles, written independently of the library's algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use superstab::Multigraph;

pub type Edges = Vec<(usize, usize)>;

/// Smallest sorted edge list over all vertex relabellings.
pub fn canonical(n: usize, edges: &[(usize, usize)]) -> Edges {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Edges> = None;
    loop {
        let mut e: Edges = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every multigraph on `n <= max_n` vertices with at most `max_m` edges, one
/// per isomorphism class, grown edge by edge.
pub fn corpus(max_n: usize, max_m: usize) -> Vec<(usize, Edges)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut level: BTreeSet<Edges> = BTreeSet::from([Vec::new()]);
        for _ in 0..=max_m {
            let mut next = BTreeSet::new();
            for e in &level {
                out.push((n, e.clone()));
                if e.len() == max_m {
                    continue;
                }
                for u in 0..n {
                    for v in u + 1..n {
                        let mut f = e.clone();
                        f.push((u, v));
                        next.insert(canonical(n, &f));
                    }
                }
            }
            level = next;
        }
    }
    out
}

/// `G` minus edge `i`.
fn delete(n: usize, e: &[(usize, usize)], i: usize) -> (usize, Edges) {
    let mut f = e.to_vec();
    f.remove(i);
    (n, f)
}

/// `G` with edge `i` contracted; loops vanish, other parallels stay.
fn contract(n: usize, e: &[(usize, usize)], i: usize) -> (usize, Edges) {
    let (a, b) = e[i];
    let (keep, gone) = (a.min(b), a.max(b));
    let relabel = |x: usize| {
        let x = if x == gone { keep } else { x };
        if x > gone {
            x - 1
        } else {
            x
        }
    };
    let f = e.iter().map(|&(u, v)| (relabel(u), relabel(v))).filter(|(u, v)| u != v).collect();
    (n - 1, f)
}

/// `G` minus the isolated vertex `v`.
fn drop_isolated(n: usize, e: &[(usize, usize)], v: usize) -> (usize, Edges) {
    let f = e.iter().map(|&(a, b)| (a - usize::from(a > v), b - usize::from(b > v))).collect();
    (n - 1, f)
}

/// Brute-force minor test by deletion, contraction and isolated-vertex
/// removal, memoised on canonical forms.
pub struct MinorOracle {
    h_n: usize,
    h: Edges,
    memo: HashMap<(usize, Edges), bool>,
}

impl MinorOracle {
    pub fn new(h_n: usize, h_edges: &[(usize, usize)]) -> Self {
        MinorOracle { h_n, h: canonical(h_n, h_edges), memo: HashMap::new() }
    }

    pub fn contains(&mut self, n: usize, edges: &[(usize, usize)]) -> bool {
        let key = (n, canonical(n, edges));
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let (n, e) = key.clone();
        let ans = if n < self.h_n || e.len() < self.h.len() {
            false
        } else if n == self.h_n && e.len() == self.h.len() {
            e == self.h
        } else {
            let mut found = false;
            for i in 0..e.len() {
                let (dn, de) = delete(n, &e, i);
                let (cn, ce) = contract(n, &e, i);
                if self.contains(dn, &de) || self.contains(cn, &ce) {
                    found = true;
                    break;
                }
            }
            if !found {
                for v in 0..n {
                    if e.iter().all(|&(a, b)| a != v && b != v) {
                        let (vn, ve) = drop_isolated(n, &e, v);
                        if self.contains(vn, &ve) {
                            found = true;
                            break;
                        }
                    }
                }
            }
            found
        };
        self.memo.insert(key, ans);
        ans
    }
}

pub fn complete_edges(n: usize) -> Edges {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn doubled(e: &[(usize, usize)]) -> Edges {
    e.iter().flat_map(|&x| [x, x]).collect()
}

/// A random connected chordal multigraph on `n` vertices: each new vertex is
/// joined to a random nonempty clique among the earlier ones, then random
/// edges are doubled.
pub fn random_chordal<R: Rng>(n: usize, double_prob: f64, rng: &mut R) -> Multigraph {
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        // Grow a clique greedily from a random seed vertex.
        let seed = rng.random_range(0..v);
        let mut clique = vec![seed];
        for u in 0..v {
            if u != seed && clique.iter().all(|&c| adj[u][c]) && rng.random_bool(0.6) {
                clique.push(u);
            }
        }
        for &u in &clique {
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
        }
    }
    let extra: Edges = edges.iter().copied().filter(|_| rng.random_bool(double_prob)).collect();
    edges.extend(extra);
    Multigraph::new(n, edges).unwrap()
}

/// Maximal cliques of the underlying simple graph by subset enumeration.
pub fn maximal_cliques_brute(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let is_clique = |mask: u32| {
        (0..n).all(|u| mask & (1 << u) == 0 || (u + 1..n).all(|v| mask & (1 << v) == 0 || adj[u][v]))
    };
    let cliques: Vec<u32> = (1u32..(1 << n)).filter(|&m| is_clique(m)).collect();
    cliques
        .iter()
        .copied()
        .filter(|&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|m| (0..n).filter(|&v| m & (1 << v) != 0).collect())
        .collect()
}

/// `(tw, criterion)` for a chordal multigraph: `tw` is the largest clique
/// size minus one; the criterion asks for a maximum clique in which every
/// pair is joined by parallel edges or lies in another maximal clique.
pub fn chordal_oracle(g: &Multigraph) -> (usize, bool) {
    let cliques = maximal_cliques_brute(g);
    let omega = cliques.iter().map(Vec::len).max().unwrap_or(1);
    let criterion = cliques.iter().enumerate().filter(|(_, c)| c.len() == omega).any(|(i, c)| {
        c.iter().enumerate().all(|(a, &u)| {
            c[a + 1..].iter().all(|&v| {
                g.multiplicity(u, v) >= 2
                    || cliques.iter().enumerate().any(|(j, d)| j != i && d.contains(&u) && d.contains(&v))
            })
        })
    });
    (omega - 1, criterion)
}
