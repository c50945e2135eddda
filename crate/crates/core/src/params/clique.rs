//! Clique number and the largest vertex connectivity over minors.

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

pub const MAX_CLIQUE_VERTICES: usize = 20;
pub const MAX_KAPPA_VERTICES: usize = 8;

fn masks(g: &Multigraph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect()
}

/// Size of a largest clique of `si(G)`.
pub fn clique_number(g: &Multigraph) -> Result<usize> {
    if g.n() > MAX_CLIQUE_VERTICES {
        return Err(Error::SizeCap { what: "clique_number vertices", got: g.n(), limit: MAX_CLIQUE_VERTICES });
    }
    let adj = masks(g);
    let mut best = 0;
    bron_kerbosch(&adj, 0, (1u32 << g.n()).wrapping_sub(1), 0, &mut best);
    Ok(best)
}

fn bron_kerbosch(adj: &[u32], r: usize, mut p: u32, mut x: u32, best: &mut usize) {
    if p == 0 {
        if x == 0 {
            *best = (*best).max(r);
        }
        return;
    }
    if r + p.count_ones() as usize <= *best {
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        bron_kerbosch(adj, r + 1, p & adj[v], x & adj[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Vertex connectivity of a simple graph given by neighbour masks: `k - 1`
/// for `K_k`, otherwise the smallest separating set.
fn vertex_connectivity(adj: &[u32]) -> usize {
    let k = adj.len();
    if k == 0 {
        return 0;
    }
    let full = (1u32 << k) - 1;
    let connected = |alive: u32| -> bool {
        if alive == 0 {
            return true;
        }
        let mut seen = 1u32 << alive.trailing_zeros();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & alive & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == alive
    };
    let mut best = k - 1;
    for s in 0..full {
        let size = s.count_ones() as usize;
        if size < best && (k - size) >= 2 && !connected(full & !s) {
            best = size;
        }
    }
    best
}

/// Largest vertex connectivity of a minor of `si(G)`, by enumerating all
/// partitions of vertex subsets into connected branch sets.
pub fn kappa(g: &Multigraph) -> Result<usize> {
    let n = g.n();
    if n > MAX_KAPPA_VERTICES {
        return Err(Error::SizeCap { what: "kappa vertices", got: n, limit: MAX_KAPPA_VERTICES });
    }
    let adj = masks(g);
    let mut block = vec![usize::MAX; n];
    let mut best = 0;
    assign(&adj, 0, &mut block, 0, &mut best);
    Ok(best)
}

/// Assign vertex `v` to a block, a new block, or delete it (`usize::MAX`).
fn assign(adj: &[u32], v: usize, block: &mut Vec<usize>, blocks: usize, best: &mut usize) {
    let n = adj.len();
    // A quotient on k vertices has connectivity at most k - 1.
    if blocks + (n - v) <= *best + 1 {
        return;
    }
    if v == n {
        let mut sets = vec![0u32; blocks];
        for (x, &b) in block.iter().enumerate() {
            if b != usize::MAX {
                sets[b] |= 1 << x;
            }
        }
        if !sets.iter().all(|&s| is_connected_set(adj, s)) {
            return;
        }
        let q: Vec<u32> = (0..blocks)
            .map(|i| {
                let nb = (0..n).filter(|&x| sets[i] & (1 << x) != 0).fold(0u32, |m, x| m | adj[x]);
                (0..blocks).filter(|&j| j != i && nb & sets[j] != 0).fold(0u32, |m, j| m | (1 << j))
            })
            .collect();
        *best = (*best).max(vertex_connectivity(&q));
        return;
    }
    block[v] = usize::MAX;
    assign(adj, v + 1, block, blocks, best);
    for b in 0..=blocks {
        block[v] = b;
        assign(adj, v + 1, block, blocks.max(b + 1), best);
    }
    block[v] = usize::MAX;
}

fn is_connected_set(adj: &[u32], s: u32) -> bool {
    if s == 0 {
        return false;
    }
    let mut seen = 1u32 << s.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & s & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_numbers() {
        assert_eq!(clique_number(&Multigraph::complete(5)).unwrap(), 5);
        assert_eq!(clique_number(&Multigraph::cycle(5)).unwrap(), 2);
        assert_eq!(clique_number(&Multigraph::octahedron()).unwrap(), 3);
        assert_eq!(clique_number(&Multigraph::petersen()).unwrap(), 2);
        assert_eq!(clique_number(&Multigraph::empty(3)).unwrap(), 1);
        assert_eq!(clique_number(&Multigraph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&Multigraph::complete(5)).unwrap(), 4);
        assert_eq!(kappa(&Multigraph::cycle(6)).unwrap(), 2);
        assert_eq!(kappa(&Multigraph::path(4)).unwrap(), 1);
        assert_eq!(kappa(&Multigraph::empty(3)).unwrap(), 0);
        // The octahedron is 4-connected.
        assert_eq!(kappa(&Multigraph::octahedron()).unwrap(), 4);
        // A 4-connected minor of the cube would need more edges than a
        // minor of a 12-edge graph on 8 vertices can keep.
        assert_eq!(kappa(&Multigraph::cube()).unwrap(), 3);
        assert!(kappa(&Multigraph::cycle(9)).is_err());
    }
}
