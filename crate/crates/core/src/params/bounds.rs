//! Bounds on `λ(G)` and `rd(G)`, and the combined parameter report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minors::{catalog, has_minor, CatalogLevel, MinorModel, MAX_HOST_VERTICES};
use crate::multigraph::Multigraph;
use crate::params::chordal::chordal_analysis;
use crate::params::clique::{clique_number, kappa, MAX_KAPPA_VERTICES};
use crate::params::treedec::{find_lacking_optimal, treewidth_exact, TreeDecomposition, DEFAULT_TD_BUDGET};

/// Evidence for one bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `G` contains `minor` (a named graph) with the given model.
    Minor { bound: String, value: usize, minor: String, model: MinorModel },
    /// A tree decomposition of the stated width, lacking or not.
    Decomposition { bound: String, value: usize, lacking: bool, td: TreeDecomposition },
    /// No member of a complete forbidden-minor catalog is a minor.
    CatalogMiss { bound: String, value: usize, catalog: String },
    /// Structural fact such as being a forest or chordal.
    Structure { bound: String, value: usize, reason: String },
}

impl Witness {
    pub fn value(&self) -> usize {
        match self {
            Witness::Minor { value, .. }
            | Witness::Decomposition { value, .. }
            | Witness::CatalogMiss { value, .. }
            | Witness::Structure { value, .. } => *value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub lower_witness: Witness,
    pub upper_witness: Witness,
    /// Remarks such as an exhausted decomposition budget.
    pub notes: Vec<String>,
}

impl Bounds {
    pub fn exact_value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

fn structure(bound: &str, value: usize, reason: &str) -> Witness {
    Witness::Structure { bound: bound.into(), value, reason: reason.into() }
}

fn check_cap(g: &Multigraph) -> Result<()> {
    if g.n() > MAX_HOST_VERTICES {
        return Err(Error::SizeCap { what: "bound vertices", got: g.n(), limit: MAX_HOST_VERTICES });
    }
    Ok(())
}

/// Largest `k` with a `K_k` (or `K_k^=` when `doubled`) minor, with model.
fn largest_complete_minor(g: &Multigraph, start: usize, doubled: bool) -> Option<(usize, MinorModel)> {
    let make = |k| if doubled { Multigraph::complete_multi(k) } else { Multigraph::complete(k) };
    let mut best = None;
    for k in start.max(2)..=g.n() {
        match has_minor(g, &make(k)) {
            Some(m) => best = Some((k, m)),
            None => break,
        }
    }
    best
}

/// Lower bounds on `λ` from minors and connectivity.
fn lambda_lower(g: &Multigraph) -> Result<(usize, Witness, Vec<String>)> {
    let mut notes = Vec::new();
    let mut best = (0, structure("lambda_lower", 0, "every multigraph"));
    let raise = |w: Witness, best: &mut (usize, Witness)| {
        if w.value() > best.0 {
            *best = (w.value(), w);
        }
    };
    if !g.is_forest() {
        raise(structure("lambda_lower", 1, "contains a cycle"), &mut best);
    }
    let omega = clique_number(g)?;
    if let Some((k, model)) = largest_complete_minor(g, omega, false) {
        if k >= 2 {
            raise(Witness::Minor { bound: "lambda_lower".into(), value: k - 2, minor: format!("K_{k}"), model }, &mut best);
        }
    }
    if g.parallel_classes().iter().any(|c| c.members.len() >= 2) {
        if let Some((k, model)) = largest_complete_minor(g, 2, true) {
            raise(
                Witness::Minor { bound: "lambda_lower".into(), value: k - 1, minor: format!("K_{k}^="), model },
                &mut best,
            );
        }
    }
    for (level, value) in [(CatalogLevel::LambdaLe1, 2), (CatalogLevel::LambdaLe2, 3)] {
        if best.0 >= value {
            continue;
        }
        let cat = catalog(level)?;
        for m in &cat.members {
            if let Some(model) = has_minor(g, &m.graph) {
                raise(Witness::Minor { bound: "lambda_lower".into(), value, minor: m.label.clone(), model }, &mut best);
                break;
            }
        }
    }
    if g.n() <= MAX_KAPPA_VERTICES {
        let k = kappa(g)?;
        if k >= 1 {
            raise(structure("lambda_lower", k - 1, &format!("has a {k}-connected minor")), &mut best);
        }
    } else {
        notes.push(format!("kappa skipped above {MAX_KAPPA_VERTICES} vertices"));
    }
    Ok((best.0, best.1, notes))
}

/// Treewidth-based upper bound on `rd`, improved by a lacking optimal
/// decomposition when the width is at least 2.
fn rd_upper_tw(g: &Multigraph, budget: usize) -> Result<(usize, Witness, Vec<String>)> {
    let mut notes = Vec::new();
    let (tw, td) = treewidth_exact(g)?;
    if g.edge_count() == 0 {
        return Ok((0, structure("rd_upper", 0, "no edges"), notes));
    }
    if tw <= 1 {
        return Ok((1, structure("rd_upper", 1, "treewidth at most 1"), notes));
    }
    let search = find_lacking_optimal(g, budget)?;
    if let Some(l) = search.found {
        return Ok((tw - 1, Witness::Decomposition { bound: "rd_upper".into(), value: tw - 1, lacking: true, td: l }, notes));
    }
    if !search.exhausted {
        notes.push(format!("lacking search stopped after {} decompositions", search.examined));
    }
    Ok((tw, Witness::Decomposition { bound: "rd_upper".into(), value: tw, lacking: false, td }, notes))
}

/// Upper bound from the absence of `K_4` and `K_3^=` minors (then `λ, rd ≤ 1`).
fn no_k4_or_k3_double(g: &Multigraph) -> Result<Option<Witness>> {
    let cat = catalog(CatalogLevel::LambdaLe1)?;
    if cat.complete && cat.graphs().all(|h| has_minor(g, h).is_none()) {
        return Ok(Some(Witness::CatalogMiss { bound: "upper".into(), value: 1, catalog: cat.name.clone() }));
    }
    Ok(None)
}

fn rename(w: Witness, bound: &str) -> Witness {
    match w {
        Witness::Minor { value, minor, model, .. } => Witness::Minor { bound: bound.into(), value, minor, model },
        Witness::Decomposition { value, lacking, td, .. } => {
            Witness::Decomposition { bound: bound.into(), value, lacking, td }
        }
        Witness::CatalogMiss { value, catalog, .. } => Witness::CatalogMiss { bound: bound.into(), value, catalog },
        Witness::Structure { value, reason, .. } => Witness::Structure { bound: bound.into(), value, reason },
    }
}

fn assemble(g: &Multigraph, budget: usize) -> Result<(Bounds, Bounds)> {
    check_cap(g)?;
    let (lam_lo, lam_lo_w, mut notes) = lambda_lower(g)?;
    let (mut rd_up, mut rd_up_w, rd_notes) = rd_upper_tw(g, budget)?;
    notes.extend(rd_notes);

    if rd_up > 1 {
        if let Some(w) = no_k4_or_k3_double(g)? {
            rd_up = 1;
            rd_up_w = rename(w, "rd_upper");
        }
    }
    let (mut lam_up, mut lam_up_w) = (rd_up, rename(rd_up_w.clone(), "lambda_upper"));
    if g.is_forest() {
        lam_up = 0;
        lam_up_w = structure("lambda_upper", 0, "forest");
    } else if lam_up > 2 {
        let cat = catalog(CatalogLevel::LambdaLe2)?;
        if cat.complete && cat.graphs().all(|h| has_minor(g, h).is_none()) {
            lam_up = 2;
            lam_up_w = Witness::CatalogMiss { bound: "lambda_upper".into(), value: 2, catalog: cat.name.clone() };
        }
    }

    let (mut rd_lo, mut rd_lo_w) = (lam_lo, rename(lam_lo_w.clone(), "rd_lower"));
    if g.edge_count() > 0 && rd_lo == 0 {
        rd_lo = 1;
        rd_lo_w = structure("rd_lower", 1, "a strut cannot shorten in dimension 0");
    }

    if let Some(ch) = chordal_analysis(g) {
        let reason = "chordal simplification";
        if ch.lambda_exact >= lam_lo && ch.lambda_exact <= lam_up {
            lam_up = ch.lambda_exact;
            lam_up_w = structure("lambda_upper", lam_up, reason);
        }
        if ch.rd_exact >= rd_lo && ch.rd_exact <= rd_up {
            rd_up = ch.rd_exact;
            rd_up_w = structure("rd_upper", rd_up, reason);
        }
    }

    if lam_lo > lam_up || rd_lo > rd_up {
        return Err(Error::Verification(format!(
            "inconsistent bounds: lambda {lam_lo}..{lam_up}, rd {rd_lo}..{rd_up}"
        )));
    }
    let lambda = Bounds {
        lower: lam_lo,
        upper: lam_up,
        exact: lam_lo == lam_up,
        lower_witness: lam_lo_w,
        upper_witness: lam_up_w,
        notes: notes.clone(),
    };
    let rd = Bounds { lower: rd_lo, upper: rd_up, exact: rd_lo == rd_up, lower_witness: rd_lo_w, upper_witness: rd_up_w, notes };
    Ok((lambda, rd))
}

fn component_graphs(g: &Multigraph) -> Vec<Multigraph> {
    g.components()
        .into_iter()
        .map(|comp| {
            let mut index = vec![usize::MAX; g.n()];
            for (i, &v) in comp.iter().enumerate() {
                index[v] = i;
            }
            let edges = g
                .edges()
                .iter()
                .filter(|&&(u, _)| index[u] != usize::MAX)
                .map(|&(u, v)| (index[u], index[v]))
                .collect();
            Multigraph::new(comp.len(), edges).expect("component edges are valid")
        })
        .collect()
}

/// Per-component bounds combined by maximum.
fn combined(g: &Multigraph, budget: usize) -> Result<(Bounds, Bounds)> {
    let comps = component_graphs(g);
    if comps.len() <= 1 {
        return assemble(g, budget);
    }
    let mut parts = comps.iter().map(|c| assemble(c, budget)).collect::<Result<Vec<_>>>()?;
    let pick = |parts: &mut Vec<(Bounds, Bounds)>, rd: bool| -> Bounds {
        let get = |p: &(Bounds, Bounds)| if rd { p.1.clone() } else { p.0.clone() };
        let lo = parts.iter().map(get).max_by_key(|b| b.lower).unwrap();
        let up = parts.iter().map(get).max_by_key(|b| b.upper).unwrap();
        let notes = parts.iter().flat_map(|p| get(p).notes).collect();
        Bounds {
            lower: lo.lower,
            upper: up.upper,
            exact: lo.lower == up.upper,
            lower_witness: lo.lower_witness,
            upper_witness: up.upper_witness,
            notes,
        }
    };
    let lambda = pick(&mut parts, false);
    let rd = pick(&mut parts, true);
    Ok((lambda, rd))
}

pub fn lambda_bounds(g: &Multigraph) -> Result<Bounds> {
    Ok(combined(g, DEFAULT_TD_BUDGET)?.0)
}

pub fn rd_bounds(g: &Multigraph) -> Result<Bounds> {
    Ok(combined(g, DEFAULT_TD_BUDGET)?.1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuBounds {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamReport {
    pub lambda: Bounds,
    /// `ν = λ + 1`.
    pub nu: NuBounds,
    pub rd: Bounds,
    pub treewidth: usize,
    pub clique_number: usize,
    /// Largest vertex connectivity of a minor, for small graphs only.
    pub kappa: Option<usize>,
    /// Non-asserting observations on open questions.
    pub conjecture_log: Vec<String>,
}

pub fn param_report(g: &Multigraph) -> Result<ParamReport> {
    param_report_with_budget(g, DEFAULT_TD_BUDGET)
}

pub fn param_report_with_budget(g: &Multigraph, budget: usize) -> Result<ParamReport> {
    let (lambda, rd) = combined(g, budget)?;
    let (treewidth, _) = treewidth_exact(g)?;
    let omega = clique_number(g)?;
    let kappa = if g.n() <= MAX_KAPPA_VERTICES { Some(kappa(g)?) } else { None };

    let chain_ok = omega.saturating_sub(2) <= lambda.lower
        && lambda.lower <= lambda.upper
        && lambda.upper <= rd.upper
        && rd.upper <= treewidth;
    if !chain_ok {
        return Err(Error::Verification(format!(
            "parameter chain violated: omega {omega}, lambda {}..{}, rd upper {}, tw {treewidth}",
            lambda.lower, lambda.upper, rd.upper
        )));
    }

    let mut conjecture_log = Vec::new();
    match (lambda.exact_value(), rd.exact_value()) {
        (Some(l), Some(r)) => conjecture_log.push(format!("lambda = rd: {} ({l} vs {r})", if l == r { "consistent" } else { "counterexample" })),
        _ => conjecture_log.push(format!(
            "lambda = rd: undecided (lambda {}..{}, rd {}..{})",
            lambda.lower, lambda.upper, rd.lower, rd.upper
        )),
    }
    if g.edge_count() > 0 {
        let doubled = g.simplify().double();
        if doubled.n() <= MAX_HOST_VERTICES {
            if let Ok((_, db)) = combined(&doubled, budget) {
                // rd(G^=) - 1 <= rd(G) is refuted only if db.lower - 1 > rd.upper.
                let status = if db.lower.saturating_sub(1) > rd.upper { "counterexample" } else { "consistent" };
                conjecture_log.push(format!(
                    "rd(G^=) - 1 <= rd(G): {status} (rd(G^=) {}..{}, rd(G) {}..{})",
                    db.lower, db.upper, rd.lower, rd.upper
                ));
            }
        }
    }

    Ok(ParamReport {
        nu: NuBounds { lower: lambda.lower + 1, upper: lambda.upper + 1 },
        lambda,
        rd,
        treewidth,
        clique_number: omega,
        kappa,
        conjecture_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(g: &Multigraph) -> (usize, usize) {
        let b = lambda_bounds(g).unwrap();
        (b.lower, b.upper)
    }

    fn rd(g: &Multigraph) -> (usize, usize) {
        let b = rd_bounds(g).unwrap();
        (b.lower, b.upper)
    }

    #[test]
    fn complete_graphs() {
        for n in 3..=6 {
            assert_eq!(lam(&Multigraph::complete(n)), (n - 2, n - 2), "K_{n}");
            assert_eq!(rd(&Multigraph::complete(n)), (n - 2, n - 2), "K_{n}");
            assert_eq!(lam(&Multigraph::complete_multi(n)), (n - 1, n - 1), "K_{n}^=");
            assert_eq!(rd(&Multigraph::complete_multi(n)), (n - 1, n - 1), "K_{n}^=");
        }
    }

    #[test]
    fn cycles_and_forests() {
        assert_eq!(lam(&Multigraph::cycle(5)), (1, 1));
        assert_eq!(rd(&Multigraph::cycle(6)), (1, 1));
        assert_eq!(lam(&Multigraph::path(5)), (0, 0));
        assert_eq!(rd(&Multigraph::path(5)), (1, 1));
        assert_eq!(rd(&Multigraph::empty(3)), (0, 0));
        let mut c4 = Multigraph::cycle(4);
        c4.push_edge(0, 1).unwrap();
        assert_eq!(rd(&c4), (1, 1));
        assert_eq!(lam(&Multigraph::complete_multi(3)), (2, 2));
    }

    #[test]
    fn catalog_members_give_three() {
        let r = lambda_bounds(&Multigraph::cube()).unwrap();
        assert!(r.lower >= 3);
        assert!(matches!(r.lower_witness, Witness::Minor { ref minor, .. } if minor.contains("Q_3")));
        let oct = lambda_bounds(&Multigraph::octahedron()).unwrap();
        assert!(oct.lower >= 3);
    }

    #[test]
    fn report_chain() {
        let k5 = param_report(&Multigraph::complete(5)).unwrap();
        assert_eq!((k5.clique_number, k5.treewidth), (5, 4));
        assert_eq!(k5.lambda.exact_value(), Some(3));
        assert_eq!(k5.rd.exact_value(), Some(3));
        assert_eq!(k5.nu.lower, 4);
        let c6 = param_report(&Multigraph::cycle(6)).unwrap();
        assert_eq!((c6.lambda.exact_value(), c6.rd.exact_value(), c6.treewidth), (Some(1), Some(1), 2));
        assert!(!c6.conjecture_log.is_empty());
    }

    #[test]
    fn disconnected_takes_max() {
        let g = Multigraph::new(7, vec![(0, 1), (1, 2), (0, 2), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]).unwrap();
        assert_eq!(lam(&g), (2, 2));
    }
}
