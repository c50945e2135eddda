use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Deserialize;

use super::certify;
use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::symmat::DEFAULT_TOL;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalleryName {
    /// All points at one spot, every edge a unit cable. The graph must be a tree.
    Tree(Multigraph),
    Cycle(usize),
    Complete(usize),
    CompleteMulti(usize),
    /// `K_{2,2,2}` as a twisted triangular prism in 3 dimensions.
    Prism,
    /// The cube graph `Q_3` as a star-shaped tensegrity in 3 dimensions.
    DihedralStar,
    /// `K_4` on the unit square with struts on the diagonals.
    K4Square,
}

impl fmt::Display for GalleryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalleryName::Tree(g) => write!(f, "tree({})", g.n()),
            GalleryName::Cycle(n) => write!(f, "cycle({n})"),
            GalleryName::Complete(n) => write!(f, "complete({n})"),
            GalleryName::CompleteMulti(n) => write!(f, "complete_multi({n})"),
            GalleryName::Prism => f.write_str("prism"),
            GalleryName::DihedralStar => f.write_str("dihedral_star"),
            GalleryName::K4Square => f.write_str("k4_square"),
        }
    }
}

/// Parses `prism`, `dihedral_star`, `k4_square`, `cycle(n)`, `complete(n)`,
/// `complete_multi(n)` and `tree(n)` (the path on `n` vertices) or `star(k)`.
impl FromStr for GalleryName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "prism" => return Ok(GalleryName::Prism),
            "dihedral_star" => return Ok(GalleryName::DihedralStar),
            "k4_square" => return Ok(GalleryName::K4Square),
            _ => {}
        }
        let bad = || Error::Precondition(format!("unknown gallery name {s:?}"));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let arg: usize = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        match head.trim() {
            "cycle" => Ok(GalleryName::Cycle(arg)),
            "complete" => Ok(GalleryName::Complete(arg)),
            "complete_multi" => Ok(GalleryName::CompleteMulti(arg)),
            "tree" => Ok(GalleryName::Tree(Multigraph::path(arg))),
            "star" => Ok(GalleryName::Tree(Multigraph::star(arg))),
            _ => Err(bad()),
        }
    }
}

#[derive(Deserialize)]
struct GalleryFile {
    points: Vec<Vec<f64>>,
    edges: Vec<(usize, usize, f64)>,
}

fn from_file(text: &str) -> Result<(Multigraph, Vec<f64>, DMatrix<f64>)> {
    let f: GalleryFile = serde_json::from_str(text).map_err(|e| Error::Data(format!("gallery: {e}")))?;
    let n = f.points.len();
    let d = f.points.first().map_or(0, |p| p.len());
    if f.points.iter().any(|p| p.len() != d) {
        return Err(Error::Data("gallery points have mixed dimensions".into()));
    }
    let g = Multigraph::new(n, f.edges.iter().map(|&(u, v, _)| (u, v)).collect())?;
    let omega = f.edges.iter().map(|&(_, _, w)| w).collect();
    Ok((g, omega, DMatrix::from_fn(d, n, |r, c| f.points[c][r])))
}

fn too_small(what: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::Precondition(format!("{what} needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// A verified super stable certificate for a named example.
pub fn gallery(name: &GalleryName) -> Result<Certificate> {
    let label = name.to_string();
    let (g, omega, p) = match name {
        GalleryName::Tree(t) => {
            if !t.is_forest() || !t.is_connected() {
                return Err(Error::Precondition("tree gallery entry needs a tree".into()));
            }
            (t.clone(), vec![1.0; t.edge_count()], DMatrix::zeros(1, t.n()))
        }
        GalleryName::Cycle(n) => {
            let n = *n;
            too_small("cycle", n, 2)?;
            let g = Multigraph::cycle(n);
            let mut omega = vec![(n - 1) as f64; n];
            omega[n - 1] = -1.0;
            (g, omega, DMatrix::from_fn(1, n, |_, c| c as f64))
        }
        GalleryName::Complete(n) => {
            let n = *n;
            too_small("complete", n, 3)?;
            let d = n - 2;
            // p_i = e_i for i < d, p_d = 0, p_{d+1} = -(1, ..., 1); the affine
            // dependency a has a_d = -(n - 1) and all other entries 1.
            let p = DMatrix::from_fn(d, n, |r, c| {
                if c < d {
                    if r == c {
                        1.0
                    } else {
                        0.0
                    }
                } else if c == d {
                    0.0
                } else {
                    -1.0
                }
            });
            let a: Vec<f64> = (0..n).map(|i| if i == d { -((n - 1) as f64) } else { 1.0 }).collect();
            let g = Multigraph::complete(n);
            let omega = g.edges().iter().map(|&(u, v)| -a[u] * a[v]).collect();
            (g, omega, p)
        }
        GalleryName::CompleteMulti(n) => {
            let n = *n;
            too_small("complete_multi", n, 2)?;
            let g = Multigraph::complete_multi(n);
            let omega = (0..g.edge_count()).map(|e| if e % 2 == 0 { 1.0 } else { -1.0 }).collect();
            let p = DMatrix::from_fn(n - 1, n, |r, c| if c == r + 1 { 1.0 } else { 0.0 });
            (g, omega, p)
        }
        GalleryName::Prism => from_file(include_str!("../../data/gallery/prism.json"))?,
        GalleryName::DihedralStar => from_file(include_str!("../../data/gallery/dihedral_star.json"))?,
        GalleryName::K4Square => {
            let g = Multigraph::complete(4);
            let p = DMatrix::from_row_slice(2, 4, &[0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
            let omega = g.edges().iter().map(|&(u, v)| if (u + v) % 2 == 0 { -1.0 } else { 1.0 }).collect();
            (g, omega, p)
        }
    };
    certify(g, omega, p, DEFAULT_TOL, &label)
}
