use rayon::prelude::*;

use super::maximal::{descend_pair, maximal_connectivity_check_seeded, MaximalVerdict};
use super::separator::{is_separator, reverifies, SeparatorReport};
use super::{annihilated_space, is_connected_seeded, task_rng};
use crate::classical::{
    all_minimum_vertex_cuts, basis_projection, confusability, minimum_vertex_cut,
    OrthonormalBasisCn, VertexCut, EXHAUSTIVE_CUT_LIMIT,
};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, null_space, CMat, CVec, Projection};
use crate::opspace::{OperatorSubspace, QuantumGraph};
use crate::random::{ginibre, haar_isometry, random_unit_vector, DEFAULT_SEED};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Total local-refinement starts, shared across target ranks and splits.
    pub restarts: usize,
    pub seed: u64,
    /// Starts for the maximal-connectivity check and the algebraic pool.
    pub maximal_restarts: usize,
    /// Lower bound `n − d` from a verified LGP representation.
    pub lgp_lower: Option<usize>,
    pub refine_iters: usize,
    /// Bases sampled for confusability cuts, besides the standard one.
    pub coordinate_bases: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: DEFAULT_SEED,
            maximal_restarts: 24,
            lgp_lower: None,
            refine_iters: 400,
            coordinate_bases: 6,
        }
    }
}

/// Certified bounds on the connectivity: every separator has rank at least
/// `lower`, and `best_separator` has rank `upper`.
#[derive(Debug, Clone)]
pub struct ConnectivityBounds<T: Real> {
    pub lower: usize,
    pub upper: usize,
    pub best_separator: Option<SeparatorReport<T>>,
    pub method_log: Vec<String>,
    /// The lower bound rests on a sampled or heuristic check.
    pub conditional_lower: bool,
}

impl<T: Real> ConnectivityBounds<T> {
    pub fn is_tight(&self) -> bool {
        self.lower == self.upper
    }
}

/// Most cuts per confusability graph handed to the separator check.
const CUTS_PER_BASIS: usize = 64;
/// Refinement accepts once `Σ‖Q₁ B Q₂‖²` drops below this.
const ACCEPT_F: f64 = 1e-24;

struct Tracker<T: Real> {
    best: Option<SeparatorReport<T>>,
}

impl<T: Real> Tracker<T> {
    fn upper(&self, n: usize) -> usize {
        self.best.as_ref().map_or(n - 1, |r| r.rank())
    }

    fn offer(&mut self, r: SeparatorReport<T>) -> bool {
        if self.best.as_ref().is_none_or(|b| r.rank() < b.rank()) {
            self.best = Some(r);
            return true;
        }
        false
    }
}

/// Exact check plus re-verification at the tighter tolerance.
fn verified<T: Real>(s: &QuantumGraph<T>, p: &Projection<T>) -> Option<SeparatorReport<T>> {
    if p.rank() >= s.ambient_dim() {
        return None;
    }
    let r = is_separator(s, p).ok()?.into_report()?;
    reverifies(s, p).then_some(r)
}

/// Hunt for low-rank separators: algebraic closures of annihilated spaces,
/// cuts of confusability graphs, then local refinement over projection pairs.
pub fn separator_search<T: Real>(s: &QuantumGraph<T>, config: &SearchConfig) -> Result<ConnectivityBounds<T>> {
    let n = s.ambient_dim();
    let mut log = Vec::new();
    let cert = is_connected_seeded(s, config.seed)?;
    if !cert.is_connected() {
        let zero = Projection::zero(n);
        let report = verified(s, &zero).ok_or_else(|| {
            Error::Inconsistency("disconnected S but P = 0 fails the separator check".into())
        })?;
        log.push("certificate: disconnected, P = 0 is a separator".to_string());
        return Ok(ConnectivityBounds {
            lower: 0,
            upper: 0,
            best_separator: Some(report),
            method_log: log,
            conditional_lower: false,
        });
    }

    let mut lower = 1.min(n - 1);
    let mut conditional = false;
    log.push(format!("certificate: connected, lower bound {lower}"));
    let ceiling: Vec<usize> = (0..n - 1).collect();
    let mut tracker = Tracker { best: None };
    match verified(s, &Projection::coordinate(n, &ceiling)) {
        Some(r) => {
            tracker.offer(r);
        }
        None => return Err(Error::Inconsistency("rank n − 1 projection is not a separator".into())),
    }
    log.push(format!("ceiling: rank {} separator", n - 1));

    if let Some(b) = config.lgp_lower {
        let b = b.min(n - 1);
        if b > lower {
            lower = b;
            conditional = true;
        }
        log.push(format!("lgp: lower bound {b} (conditional on sampled verification)"));
    }

    if lower < tracker.upper(n) {
        let before = tracker.upper(n);
        let found = algebraic_phase(s, config, &mut tracker);
        log.push(format!(
            "phase 1 (algebraic): {found} verified separators, upper {before} -> {}",
            tracker.upper(n)
        ));
    }
    if lower < tracker.upper(n) {
        let before = tracker.upper(n);
        let found = coordinate_phase(s, config, &mut tracker)?;
        log.push(format!(
            "phase 2 (coordinate): {found} verified separators, upper {before} -> {}",
            tracker.upper(n)
        ));
    }
    if lower < tracker.upper(n) && config.maximal_restarts > 0 {
        match maximal_connectivity_check_seeded(s, config.maximal_restarts, config.seed)? {
            MaximalVerdict::Verified { exact, min_sigma } => {
                lower = n - 1;
                conditional |= !exact;
                log.push(format!(
                    "maximal check: verified ({}, min sigma {min_sigma:.3e}), lower bound {}",
                    if exact { "exact" } else { "heuristic" },
                    n - 1
                ));
            }
            MaximalVerdict::Refuted { separator, sigma, .. } => {
                let p = separator.separator.clone();
                if let Some(r) = verified(s, &p) {
                    tracker.offer(r);
                }
                log.push(format!("maximal check: refuted (sigma {sigma:.3e})"));
            }
            MaximalVerdict::Inconclusive { min_sigma } => {
                log.push(format!("maximal check: inconclusive (min sigma {min_sigma:.3e})"));
            }
        }
    }
    if lower < tracker.upper(n) && config.restarts > 0 {
        let before = tracker.upper(n);
        let found = refinement_phase(s, config, lower, &mut tracker);
        log.push(format!(
            "phase 3 (refinement, {} starts): {found} verified separators, upper {before} -> {}",
            config.restarts,
            tracker.upper(n)
        ));
    }

    let upper = tracker.upper(n);
    if lower > upper {
        return Err(Error::Inconsistency(format!(
            "lower bound {lower} exceeds a verified separator of rank {upper}"
        )));
    }
    Ok(ConnectivityBounds {
        lower,
        upper,
        best_separator: tracker.best,
        method_log: log,
        conditional_lower: conditional,
    })
}

fn columns_of<T: Real>(m: &CMat<T>) -> Vec<CVec<T>> {
    m.column_iter().map(|c| c.into_owned()).collect()
}

/// Alternate `N ← {y : ⟨M|S|y⟩ = 0}` and `M ← {x : ⟨x|S|N⟩ = 0}` from
/// `M = span{u}`; returns `I − P_M − P_N` when `N` is nonzero.
fn algebraic_closure<T: Real>(s: &OperatorSubspace<T>, u: &CVec<T>) -> Option<Projection<T>> {
    let n = s.ambient_dim();
    let mut nn = annihilated_space(s, u);
    if nn.ncols() == 0 {
        return None;
    }
    let mut mm = CMat::from_columns(&[u.unscale(u.norm())]);
    for _ in 0..n {
        // x ⟂ B w for all B, w ∈ N.
        let rows: Vec<CMat<T>> = s.basis().iter().map(|b| (b * &nn).adjoint()).collect();
        let next_m = null_space(&crate::matcore::vstack(&rows, n), s.tol());
        // y with m† B y = 0 for all m ∈ M.
        let rows: Vec<CMat<T>> = s.basis().iter().map(|b| next_m.adjoint() * b).collect();
        let next_n = null_space(&crate::matcore::vstack(&rows, n), s.tol());
        let stable = next_m.ncols() == mm.ncols() && next_n.ncols() == nn.ncols();
        mm = next_m;
        nn = next_n;
        if stable || mm.ncols() == 0 || nn.ncols() == 0 {
            break;
        }
    }
    if mm.ncols() == 0 || nn.ncols() == 0 {
        return None;
    }
    let mut cols = columns_of(&mm);
    cols.extend(columns_of(&nn));
    let q = crate::matcore::projector_onto(&cols, s.tol()).ok()?;
    (q.rank() == mm.ncols() + nn.ncols()).then(|| q.complement())
}

fn algebraic_phase<T: Real>(s: &QuantumGraph<T>, config: &SearchConfig, tracker: &mut Tracker<T>) -> usize {
    let n = s.ambient_dim();
    let mut pool: Vec<CVec<T>> = (0..n).map(|i| crate::matcore::basis_vector(n, i)).collect();
    let mut rng = task_rng(config.seed, "algebraic-pool", 0);
    for _ in 0..2 {
        let h = s.random_hermitian_element(&mut rng);
        if let Ok(eig) = hermitian_eig(&h, s.tol()) {
            pool.extend(columns_of(&eig.vectors));
        }
    }
    let descended: Vec<CVec<T>> = (0..config.maximal_restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(config.seed, "algebraic", i as u64);
            let u0 = random_unit_vector(n, &mut rng);
            descend_pair(s.space(), u0, 400).u
        })
        .collect();
    pool.extend(descended);
    let candidates: Vec<Option<SeparatorReport<T>>> = pool
        .par_iter()
        .map(|u| algebraic_closure(s.space(), u).and_then(|p| verified(s, &p)))
        .collect();
    let mut found = 0;
    for r in candidates.into_iter().flatten() {
        found += 1;
        tracker.offer(r);
    }
    found
}

fn coordinate_phase<T: Real>(s: &QuantumGraph<T>, config: &SearchConfig, tracker: &mut Tracker<T>) -> Result<usize> {
    let n = s.ambient_dim();
    let mut bases = vec![OrthonormalBasisCn::standard(n)];
    let mut rng = task_rng(config.seed, "coordinate", 0);
    for _ in 0..config.coordinate_bases {
        let h = s.random_hermitian_element(&mut rng);
        let eig = hermitian_eig(&h, s.tol())?;
        bases.push(OrthonormalBasisCn::new(eig.vectors, s.tol())?);
    }
    let per_basis: Vec<Vec<SeparatorReport<T>>> = bases
        .par_iter()
        .map(|v| {
            let Ok(g) = confusability(s.space(), v) else {
                return Vec::new();
            };
            let cuts: Vec<VertexCut> = if n <= EXHAUSTIVE_CUT_LIMIT {
                all_minimum_vertex_cuts(&g).unwrap_or_default()
            } else {
                minimum_vertex_cut(&g).into_iter().collect()
            };
            cuts.iter()
                .take(CUTS_PER_BASIS)
                .filter(|c| c.cut.len() < n)
                .filter_map(|c| verified(s, &basis_projection(v, &c.cut)))
                .collect()
        })
        .collect();
    let mut found = 0;
    for r in per_basis.into_iter().flatten() {
        found += 1;
        tracker.offer(r);
    }
    Ok(found)
}

/// Lowest `k` eigenvectors of `Σ_k X_k X_k†` and the sum of their eigenvalues.
fn low_block<T: Real>(s: &OperatorSubspace<T>, images: &[CMat<T>], k: usize) -> Option<(CMat<T>, T)> {
    let n = s.ambient_dim();
    let mut m = CMat::<T>::zeros(n, n);
    for x in images {
        m += x * x.adjoint();
    }
    let eig = hermitian_eig(&m, s.tol()).ok()?;
    let f = eig.values[..k].iter().fold(T::zero(), |a, &b| a + b.max(T::zero()));
    Some((eig.vectors.columns(0, k).into_owned(), f))
}

/// One round of `Q₁ ← low(Σ B Q₂ Q₂† B†)`, `Q₂ ← low(Σ B† Q₁ Q₁† B)`.
fn alternate<T: Real>(s: &OperatorSubspace<T>, q2: &CMat<T>, a: usize) -> Option<(CMat<T>, CMat<T>, T)> {
    let b = q2.ncols();
    let imgs: Vec<CMat<T>> = s.basis().iter().map(|x| x * q2).collect();
    let (q1, _) = low_block(s, &imgs, a)?;
    let imgs: Vec<CMat<T>> = s.basis().iter().map(|x| x.adjoint() * &q1).collect();
    let (q2, f) = low_block(s, &imgs, b)?;
    Some((q1, q2, f))
}

fn refine_once<T: Real, R: rand::Rng + ?Sized>(
    s: &OperatorSubspace<T>,
    a: usize,
    b: usize,
    iters: usize,
    rng: &mut R,
) -> Option<(CMat<T>, CMat<T>, T)> {
    let n = s.ambient_dim();
    let accept: T = lit(ACCEPT_F);
    let mut q2 = haar_isometry::<T, R>(n, b, rng);
    let mut best: Option<(CMat<T>, CMat<T>, T)> = None;
    let mut step: T = lit(0.3);
    let mut perturbations = 0;
    let mut stall = 0;
    let mut it = 0;
    while it < iters {
        it += 1;
        let (q1, next, f) = alternate(s, &q2, a)?;
        let improved = best.as_ref().is_none_or(|bst| f < bst.2 * lit(0.999));
        if best.as_ref().is_none_or(|bst| f < bst.2) {
            best = Some((q1, next.clone(), f));
        }
        if f < accept {
            break;
        }
        q2 = next;
        stall = if improved { 0 } else { stall + 1 };
        if stall > 8 {
            if perturbations >= 6 {
                break;
            }
            // Random perturbation of the best Q₂ with a shrinking step.
            perturbations += 1;
            let base = &best.as_ref().expect("set").1;
            let noise = ginibre::<T, R>(n, b, rng).scale(step);
            let moved = base + noise;
            let qr = moved.qr();
            q2 = qr.q().columns(0, b).into_owned();
            step *= lit(0.5);
            stall = 0;
        }
    }
    best
}

fn refinement_phase<T: Real>(
    s: &QuantumGraph<T>,
    config: &SearchConfig,
    lower: usize,
    tracker: &mut Tracker<T>,
) -> usize {
    let n = s.ambient_dim();
    let upper = tracker.upper(n);
    // (rank r, split a) with Q₁ of rank a ≤ Q₂ of rank n − r − a.
    let shapes: Vec<(usize, usize)> = (lower..upper)
        .flat_map(|r| (1..=(n - r) / 2).map(move |a| (r, a)))
        .collect();
    if shapes.is_empty() {
        return 0;
    }
    let tasks: Vec<(usize, usize, usize)> = (0..config.restarts)
        .map(|i| {
            let (r, a) = shapes[i % shapes.len()];
            (i, r, a)
        })
        .collect();
    let results: Vec<Option<SeparatorReport<T>>> = tasks
        .par_iter()
        .map(|&(i, r, a)| {
            let mut rng = task_rng(config.seed, "refine", i as u64);
            let b = n - r - a;
            let (q1, q2, f) = refine_once(s.space(), a, b, config.refine_iters, &mut rng)?;
            if to_f64(f) >= ACCEPT_F {
                return None;
            }
            let mut cols = columns_of(&q1);
            cols.extend(columns_of(&q2));
            let q = crate::matcore::projector_onto(&cols, s.tol()).ok()?;
            if q.rank() != a + b {
                return None;
            }
            verified(s, &q.complement())
        })
        .collect();
    let mut found = 0;
    for r in results.into_iter().flatten() {
        found += 1;
        tracker.offer(r);
    }
    found
}
