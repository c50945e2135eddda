//! Super-stability certificates: the stress condition (strictly proper
//! equilibrium stress with PSD stress matrix of nullity `d + 1`) and the conic
//! condition (edge directions lie on no conic at infinity).

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::symmat::{self, SymMatrix};
use crate::tensegrity::{self, Properness, Stress, Tensegrity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SuperStable,
    /// The stress condition holds but the conic condition fails.
    StressOnly,
    /// The conic condition holds; the stress is a strictly proper equilibrium
    /// stress of the right nullity but its matrix is not PSD.
    ConicOnly,
    Neither,
    /// A spectral decision fell inside the tolerance gap.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicVerdict {
    pub ok: bool,
    /// Numerical rank of the edge system; `d(d+1)/2` when `ok`.
    pub rank: usize,
    /// A nonzero `S` with `Δᵀ S Δ ≈ 0` on every edge direction `Δ`.
    pub witness: Option<SymMatrix>,
}

/// Row `vech` weights so that `row · vech(S) = Δᵀ S Δ`.
fn conic_row(delta: &[f64]) -> Vec<f64> {
    let d = delta.len();
    let mut row = Vec::with_capacity(d * (d + 1) / 2);
    for a in 0..d {
        for b in a..d {
            let w = if a == b { 1.0 } else { 2.0 };
            row.push(w * delta[a] * delta[b]);
        }
    }
    row
}

fn unvech(x: &[f64], d: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(d, d);
    let mut k = 0;
    for a in 0..d {
        for b in a..d {
            m[(a, b)] = x[k];
            m[(b, a)] = x[k];
            k += 1;
        }
    }
    SymMatrix::new(m).expect("symmetric by construction")
}

/// The conic system: one row per edge, `d(d+1)/2` columns.
pub fn conic_system(g: &Multigraph, p: &DMatrix<f64>) -> DMatrix<f64> {
    let d = p.nrows();
    let cols = d * (d + 1) / 2;
    let mut a = DMatrix::zeros(g.edge_count(), cols);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let delta: Vec<f64> = (0..d).map(|k| p[(k, v)] - p[(k, u)]).collect();
        for (c, x) in conic_row(&delta).into_iter().enumerate() {
            a[(e, c)] = x;
        }
    }
    a
}

/// The conic condition in the ambient dimension of `p`. Vacuous when the
/// dimension is 0 or there are no edges.
pub fn conic_condition(g: &Multigraph, p: &DMatrix<f64>, tol: f64) -> ConicVerdict {
    let d = p.nrows();
    let full = d * (d + 1) / 2;
    if d == 0 || g.edge_count() == 0 {
        return ConicVerdict { ok: true, rank: full, witness: None };
    }
    let a = conic_system(g, p);
    let rank = symmat::rank(&a, tol);
    if rank == full {
        return ConicVerdict { ok: true, rank, witness: None };
    }
    let ns = symmat::null_space(&a, tol);
    let witness = if ns.ncols() > 0 {
        let x: Vec<f64> = ns.column(0).iter().copied().collect();
        Some(unvech(&x, d))
    } else {
        // Rank deficiency without a clean null vector: fall back to the
        // right singular vector of the smallest singular value.
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.unwrap();
        let i = svd.singular_values.imin();
        Some(unvech(&vt.row(i).iter().copied().collect::<Vec<_>>(), d))
    };
    ConicVerdict { ok: false, rank, witness }
}

/// Euclidean SAP of a PSD `L` with the sign pattern of `G`: the conic
/// condition on the reduced kernel representation of `L`.
pub fn euclidean_sap(l: &SymMatrix, g: &Multigraph, tol: f64) -> Result<bool> {
    let pn = l.psd_nullity(tol);
    if !pn.determinate {
        return Err(Error::Indeterminate("nullity of the stress matrix".into()));
    }
    if !pn.psd {
        return Err(Error::Precondition("matrix is not PSD".into()));
    }
    let kr = symmat::kernel_representation(l, tol, true)?;
    Ok(conic_condition(g, &kr.p, tol).ok)
}

/// A verified bundle for one tensegrity and stress.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub tensegrity: Tensegrity,
    pub stress: Stress,
    /// Eigenvalues of the stress matrix, ascending.
    pub eigenvalues: Vec<f64>,
    pub nullity: usize,
    pub psd: bool,
    pub residual: f64,
    pub properness: Properness,
    pub conic: ConicVerdict,
    /// Affine dimension of the configuration.
    pub d: usize,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

/// Compact JSON report of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub d: usize,
    pub nullity: usize,
    pub psd: bool,
    /// The `d + 2` smallest eigenvalues (or all, if fewer).
    pub min_eigenvalues: Vec<f64>,
    pub residual: f64,
    pub strictly_proper: bool,
    pub conic_rank: usize,
    pub conic_witness: Option<SymMatrix>,
    pub diagnostics: Vec<String>,
}

impl Certificate {
    pub fn is_super_stable(&self) -> bool {
        self.verdict == Verdict::SuperStable
    }

    pub fn stress_matrix(&self) -> SymMatrix {
        tensegrity::stress_matrix(&self.tensegrity, &self.stress).expect("lengths checked")
    }

    pub fn report(&self) -> Report {
        let k = (self.d + 2).min(self.eigenvalues.len());
        Report {
            verdict: self.verdict,
            d: self.d,
            nullity: self.nullity,
            psd: self.psd,
            min_eigenvalues: self.eigenvalues[..k].to_vec(),
            residual: self.residual,
            strictly_proper: self.properness.strict,
            conic_rank: self.conic.rank,
            conic_witness: self.conic.witness.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }

    /// Return `self` if super stable, otherwise a verification error.
    pub fn require(self, what: &str) -> Result<Certificate> {
        if self.is_super_stable() {
            Ok(self)
        } else {
            Err(Error::Verification(format!(
                "{what}: verdict {:?} ({})",
                self.verdict,
                self.diagnostics.join("; ")
            )))
        }
    }
}

/// Scale for the equilibrium residual: largest `|ω(e)| · |p(e)|`, at least 1.
fn residual_scale(t: &Tensegrity, w: &Stress) -> f64 {
    let wmax = w.omega.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let spread = tensegrity::centered(t.points()).amax();
    (wmax * spread).max(1.0)
}

#[derive(Clone, Copy, Debug)]
struct Checks {
    determinate: bool,
    equilibrium: bool,
    strict: bool,
    nullity_ok: bool,
    psd: bool,
    conic: bool,
}

fn classify(c: Checks) -> Verdict {
    if !c.determinate {
        Verdict::Indeterminate
    } else if !c.equilibrium || !c.strict || !c.nullity_ok {
        Verdict::Neither
    } else {
        match (c.psd, c.conic) {
            (true, true) => Verdict::SuperStable,
            (true, false) => Verdict::StressOnly,
            (false, true) => Verdict::ConicOnly,
            (false, false) => Verdict::Neither,
        }
    }
}

pub fn verify_super_stable(t: &Tensegrity, w: &Stress, tol: f64) -> Certificate {
    let d = tensegrity::affine_dimension(t.points(), tol);
    let mut diagnostics = Vec::new();
    if let Err(e) = w.check_len(t.graph()) {
        diagnostics.push(e.to_string());
        return Certificate {
            tensegrity: t.clone(),
            stress: w.clone(),
            eigenvalues: Vec::new(),
            nullity: 0,
            psd: false,
            residual: f64::INFINITY,
            properness: Properness { strict: false, proper: false },
            conic: ConicVerdict { ok: false, rank: 0, witness: None },
            d,
            verdict: Verdict::Neither,
            diagnostics,
        };
    }
    let residual = tensegrity::equilibrium_residual(t, w).expect("length checked");
    let properness = tensegrity::properness(t, w).expect("length checked");
    let l = tensegrity::stress_matrix(t, w).expect("length checked");
    let spec = l.spectrum();
    let pn = spec.psd_nullity(tol);
    let coords = tensegrity::affine_coordinates(t.points(), tol);
    let conic = conic_condition(t.graph(), &coords, tol);

    let equilibrium = residual <= tol * residual_scale(t, w);
    if !equilibrium {
        diagnostics.push(format!("not an equilibrium stress (residual {residual:e})"));
    }
    if !properness.strict {
        diagnostics.push("stress is not strictly proper".into());
    }
    if pn.nullity != d + 1 {
        diagnostics.push(format!("nullity {} but affine dimension {d} needs {}", pn.nullity, d + 1));
    }
    if !pn.psd {
        diagnostics.push(format!("stress matrix not PSD (min eigenvalue {:e})", pn.min_eig));
    }
    if !conic.ok {
        diagnostics.push(format!("edge directions lie on a conic at infinity (rank {})", conic.rank));
    }

    if !pn.determinate {
        diagnostics.push("eigenvalue inside the tolerance gap".into());
    }
    let verdict = classify(Checks {
        determinate: pn.determinate,
        equilibrium,
        strict: properness.strict,
        nullity_ok: pn.nullity == d + 1,
        psd: pn.psd,
        conic: conic.ok,
    });
    Certificate {
        tensegrity: t.clone(),
        stress: w.clone(),
        eigenvalues: spec.eigenvalues.iter().copied().collect(),
        nullity: pn.nullity,
        psd: pn.psd,
        residual,
        properness,
        conic,
        d,
        verdict,
        diagnostics,
    }
}

/// Search the equilibrium stress space for a certifying stress.
///
/// The objective for a unit coefficient vector is the smaller of the least
/// signed edge stress `σ(e) ω(e)` and the least eigenvalue of the stress
/// matrix on the complement of the affine-function kernel. A candidate with
/// positive objective is verified. `budget` bounds objective evaluations.
/// Failing to find a stress proves nothing.
pub fn search_stress<R: Rng + ?Sized>(t: &Tensegrity, tol: f64, budget: usize, rng: &mut R) -> Option<Stress> {
    let m = t.graph().edge_count();
    if m == 0 {
        return None;
    }
    let e_mat = tensegrity::equilibrium_matrix(t);
    let basis = if e_mat.nrows() == 0 || e_mat.amax() == 0.0 {
        DMatrix::identity(m, m)
    } else {
        symmat::null_space(&e_mat, 1e-10)
    };
    let k = basis.ncols();
    if k == 0 {
        return None;
    }
    // Complement of span{1, coordinate functions}.
    let n = t.n();
    let mut aff = DMatrix::from_element(n, 1, 1.0);
    let coords = tensegrity::affine_coordinates(t.points(), tol);
    if coords.nrows() > 0 {
        aff = aff.insert_columns(1, coords.nrows(), 0.0);
        for r in 0..coords.nrows() {
            aff.set_column(r + 1, &coords.row(r).transpose());
        }
    }
    let q = symmat::null_space(&aff.transpose(), 1e-10);
    let sigma: Vec<f64> = t.sigma().iter().map(|s| s.value()).collect();

    let objective = |c: &nalgebra::DVector<f64>| -> f64 {
        let w = &basis * c;
        let norm = w.norm();
        if norm == 0.0 {
            return f64::NEG_INFINITY;
        }
        let w = w / norm;
        let signed = (0..m).map(|e| sigma[e] * w[e]).fold(f64::INFINITY, f64::min);
        if q.ncols() == 0 {
            return signed;
        }
        let l = symmat::assemble_laplacian(t.graph(), w.as_slice()).expect("length");
        let r = SymMatrix::new(q.transpose() * l.matrix() * &q).expect("symmetric");
        let mu = r.spectrum().eigenvalues[0];
        signed.min(mu)
    };

    let try_verify = |c: &nalgebra::DVector<f64>| -> Option<Stress> {
        let w = &basis * c;
        let w = Stress::new((w / c.norm().max(f64::MIN_POSITIVE)).iter().copied().collect());
        let cert = verify_super_stable(t, &w, tol);
        cert.is_super_stable().then_some(w)
    };

    let start = basis.transpose() * nalgebra::DVector::from_column_slice(&sigma);
    let mut evals = 0usize;
    let mut restart = 0usize;
    while evals < budget {
        let mut c = if restart == 0 && start.norm() > 1e-12 {
            start.clone()
        } else {
            nalgebra::DVector::from_fn(k, |_, _| rng.random_range(-1.0..1.0))
        };
        restart += 1;
        let mut f = objective(&c);
        evals += 1;
        let mut step = 0.5;
        while step > 1e-6 && evals < budget {
            if f > 0.0 {
                if let Some(w) = try_verify(&c) {
                    return Some(w);
                }
            }
            let mut improved = false;
            for i in 0..k {
                for dir in [1.0, -1.0] {
                    let mut trial = c.clone();
                    trial[i] += dir * step * c.norm().max(1e-12);
                    let ft = objective(&trial);
                    evals += 1;
                    if ft > f {
                        c = trial;
                        f = ft;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if f > 0.0 {
            if let Some(w) = try_verify(&c) {
                return Some(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensegrity::Sign;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-8;

    fn square(sigma: Vec<Sign>) -> Tensegrity {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap();
        let p = DMatrix::from_column_slice(2, 4, &[0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        Tensegrity::new(g, sigma, p).unwrap()
    }

    fn square_signs() -> Vec<Sign> {
        vec![Sign::Cable, Sign::Cable, Sign::Cable, Sign::Cable, Sign::Strut, Sign::Strut]
    }

    #[test]
    fn conic_cases() {
        let one = Multigraph::path(2);
        assert!(conic_condition(&one, &DMatrix::from_row_slice(1, 2, &[0.0, 1.0]), TOL).ok);
        let par = Multigraph::path(3);
        let p = DMatrix::from_column_slice(2, 3, &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0]);
        let v = conic_condition(&par, &p, TOL);
        assert!(!v.ok);
        let s = v.witness.unwrap();
        let delta = nalgebra::DVector::from_vec(vec![1.0, 1.0]);
        assert!((delta.transpose() * s.matrix() * &delta)[0].abs() < 1e-10);
        assert!(s.norm() > 0.5);
        let sq = square(square_signs());
        assert!(conic_condition(sq.graph(), sq.points(), TOL).ok);
    }

    #[test]
    fn conic_vacuous_cases() {
        let g = Multigraph::path(2);
        assert!(conic_condition(&g, &DMatrix::zeros(0, 2), TOL).ok);
        assert!(conic_condition(&Multigraph::empty(2), &DMatrix::zeros(2, 2), TOL).ok);
    }

    #[test]
    fn sap_cases() {
        let a = nalgebra::DVector::from_vec(vec![1.0, -1.0, 1.0, -1.0]);
        let k4 = Multigraph::complete(4);
        assert!(euclidean_sap(&SymMatrix::outer(&a), &k4, TOL).unwrap());
        assert!(euclidean_sap(&SymMatrix::zeros(2), &Multigraph::theta(2), TOL).unwrap());
        let c4 = Multigraph::cycle(4);
        let l = symmat::assemble_laplacian(&c4, &[3.0, 3.0, 3.0, -1.0]).unwrap();
        assert!(euclidean_sap(&l, &c4, TOL).unwrap());
    }

    #[test]
    fn verify_square() {
        let t = square(square_signs());
        let w = Stress::new(vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0]);
        let c = verify_super_stable(&t, &w, TOL);
        assert_eq!(c.verdict, Verdict::SuperStable, "{:?}", c.diagnostics);
        assert_eq!(c.d, 2);
        let all_cable = square(vec![Sign::Cable; 6]);
        assert_eq!(verify_super_stable(&all_cable, &w, TOL).verdict, Verdict::Neither);
    }

    #[test]
    fn verify_cycle() {
        let n = 5;
        let g = Multigraph::cycle(n);
        let mut sigma = vec![Sign::Cable; n];
        sigma[n - 1] = Sign::Strut;
        let p = DMatrix::from_fn(1, n, |_, c| c as f64);
        let t = Tensegrity::new(g, sigma, p).unwrap();
        let w = Stress::new(vec![4.0, 4.0, 4.0, 4.0, -1.0]);
        let c = verify_super_stable(&t, &w, TOL);
        assert_eq!((c.verdict, c.d), (Verdict::SuperStable, 1));
    }

    #[test]
    fn conic_only_when_not_psd() {
        // Cycle with an indefinite stress: reverse the roles of cable and strut.
        let n = 4;
        let g = Multigraph::cycle(n);
        let mut sigma = vec![Sign::Strut; n];
        sigma[n - 1] = Sign::Cable;
        let p = DMatrix::from_fn(1, n, |_, c| c as f64);
        let t = Tensegrity::new(g, sigma, p).unwrap();
        let w = Stress::new(vec![-3.0, -3.0, -3.0, 1.0]);
        assert_eq!(verify_super_stable(&t, &w, TOL).verdict, Verdict::ConicOnly);
    }

    #[test]
    fn classification_table() {
        let ok = Checks { determinate: true, equilibrium: true, strict: true, nullity_ok: true, psd: true, conic: true };
        assert_eq!(classify(ok), Verdict::SuperStable);
        assert_eq!(classify(Checks { conic: false, ..ok }), Verdict::StressOnly);
        assert_eq!(classify(Checks { psd: false, ..ok }), Verdict::ConicOnly);
        assert_eq!(classify(Checks { psd: false, conic: false, ..ok }), Verdict::Neither);
        assert_eq!(classify(Checks { strict: false, ..ok }), Verdict::Neither);
        assert_eq!(classify(Checks { equilibrium: false, ..ok }), Verdict::Neither);
        assert_eq!(classify(Checks { nullity_ok: false, ..ok }), Verdict::Neither);
        assert_eq!(classify(Checks { determinate: false, ..ok }), Verdict::Indeterminate);
    }

    #[test]
    fn nullity_mismatch_is_neither() {
        // K_3^= on a line: zero stress matrix of nullity 3, but d + 1 = 2.
        let g = Multigraph::complete_multi(3);
        let sigma: Vec<Sign> = (0..6).map(|i| if i % 2 == 0 { Sign::Cable } else { Sign::Strut }).collect();
        let p = DMatrix::from_column_slice(1, 3, &[0.0, 1.0, 3.0]);
        let t = Tensegrity::new(g, sigma, p).unwrap();
        let w = Stress::new(vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_eq!(verify_super_stable(&t, &w, TOL).verdict, Verdict::Neither);
    }

    #[test]
    fn search_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = square(square_signs());
        let w = search_stress(&t, TOL, 2000, &mut rng).unwrap();
        assert!(verify_super_stable(&t, &w, TOL).is_super_stable());

        let tree = Tensegrity::new(
            Multigraph::path(3),
            vec![Sign::Cable; 2],
            DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 2.0, 0.0, 1.0, 0.0]),
        )
        .unwrap();
        assert!(search_stress(&tree, TOL, 500, &mut rng).is_none());

        let pt = Tensegrity::new(Multigraph::path(2), vec![Sign::Cable], DMatrix::zeros(2, 2)).unwrap();
        let w = search_stress(&pt, TOL, 100, &mut rng).unwrap();
        let c = verify_super_stable(&pt, &w, TOL);
        assert_eq!((c.verdict, c.d), (Verdict::SuperStable, 0));
    }

    #[test]
    fn scaling_invariance() {
        let t = square(square_signs());
        let w = Stress::new(vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0]);
        for c in [1e-3, 0.5, 7.0, 1e4] {
            assert_eq!(verify_super_stable(&t, &w.scaled(c), TOL).verdict, Verdict::SuperStable);
        }
    }
}
