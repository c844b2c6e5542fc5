use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use rand::Rng;
use rayon::prelude::*;

use super::poly::{interpolate, resultant, roots, trimmed};
use super::separator::{is_separator, SeparatorReport};
use super::{annihilator_rows, task_rng};
use crate::error::Result;
use crate::matcore::{hermitian_eig, min_right_singular, projector_onto, CMat, CVec};
use crate::opspace::{OperatorSubspace, QuantumGraph};
use crate::random::{ginibre, haar_unitary, random_unit_vector, DEFAULT_SEED};
use crate::scalar::{lit, to_f64, Real};

/// `σ_min` below this counts as an exact annihilating pair.
pub const REFUTE_SIGMA: f64 = 1e-10;
/// Every local minimum above this counts as bounded away from zero.
pub const VERIFY_SIGMA: f64 = 1e-4;
/// Exact-mode candidates below this are polished before deciding.
const NEAR_SIGMA: f64 = 1e-3;

const DESCENT_ITERS: usize = 400;
const POLISH_ITERS: usize = 2000;

#[derive(Debug, Clone)]
pub enum MaximalVerdict<T: Real> {
    /// No unit `u, v` with `⟨u|S|v⟩ = 0` was found. `exact` is set when the
    /// polynomial fallback (n ≤ 3) ruled them out; otherwise heuristic.
    Verified { exact: bool, min_sigma: f64 },
    /// `⟨u|B|v⟩ = 0` for all `B ∈ S`, with the separator `I − |u⟩⟨u| − |v⟩⟨v|`.
    Refuted {
        u: CVec<T>,
        v: CVec<T>,
        sigma: f64,
        separator: Box<SeparatorReport<T>>,
    },
    Inconclusive { min_sigma: f64 },
}

impl<T: Real> MaximalVerdict<T> {
    pub fn is_verified(&self) -> bool {
        matches!(self, Self::Verified { .. })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PairSearch<T: Real> {
    pub sigma: T,
    pub u: CVec<T>,
}

/// Alternating minimization of `Σ_k |⟨u|B_k|v⟩|²` over unit `u, v`: `v` is
/// the smallest right singular vector of the stacked rows, `u` the lowest
/// eigenvector of `Σ_k B_k v v† B_k†`.
pub(crate) fn descend_pair<T: Real>(s: &OperatorSubspace<T>, start: CVec<T>, iters: usize) -> PairSearch<T> {
    let n = s.ambient_dim();
    let mut u = start;
    let (sigma, mut v) = min_right_singular(&annihilator_rows(s, &u));
    let mut best = PairSearch { sigma, u: u.clone() };
    let mut stall = 0;
    let floor: T = lit(1e-15);
    for _ in 0..iters {
        if best.sigma < floor || stall > 25 {
            break;
        }
        let mut m = CMat::<T>::zeros(n, n);
        for b in s.basis() {
            let w = b * &v;
            m += &w * w.adjoint();
        }
        let Ok(eig) = hermitian_eig(&m, s.tol()) else {
            break;
        };
        u = eig.vectors.column(0).into_owned();
        let (sigma, next_v) = min_right_singular(&annihilator_rows(s, &u));
        v = next_v;
        if sigma < best.sigma * lit(0.999) {
            stall = 0;
        } else {
            stall += 1;
        }
        if sigma < best.sigma {
            best = PairSearch { sigma, u: u.clone() };
        }
    }
    best
}

/// Separator `I − |u⟩⟨u| − |v⟩⟨v|`, if it passes the exact check.
fn pair_separator<T: Real>(s: &QuantumGraph<T>, u: &CVec<T>, v: &CVec<T>) -> Option<SeparatorReport<T>> {
    let q = projector_onto(&[u.clone(), v.clone()], s.tol()).ok()?;
    if q.rank() != 2 {
        return None;
    }
    is_separator(s, &q.complement()).ok()?.into_report()
}

fn refuted<T: Real>(s: &QuantumGraph<T>, pair: &PairSearch<T>) -> Option<MaximalVerdict<T>> {
    if to_f64(pair.sigma) >= REFUTE_SIGMA {
        return None;
    }
    // Re-derive σ from the normalized u before trusting it.
    let u = pair.u.unscale(pair.u.norm());
    let (sigma, v) = min_right_singular(&annihilator_rows(s.space(), &u));
    if to_f64(sigma) >= REFUTE_SIGMA {
        return None;
    }
    let separator = pair_separator(s, &u, &v)?;
    Some(MaximalVerdict::Refuted {
        u,
        v,
        sigma: to_f64(sigma),
        separator: Box::new(separator),
    })
}

pub fn maximal_connectivity_check<T: Real>(s: &QuantumGraph<T>, restarts: usize) -> Result<MaximalVerdict<T>> {
    maximal_connectivity_check_seeded(s, restarts, DEFAULT_SEED)
}

/// Multi-start search for unit `u, v` with `⟨u|S|v⟩ = 0`, with an exact
/// polynomial fallback for `n ≤ 3`.
pub fn maximal_connectivity_check_seeded<T: Real>(
    s: &QuantumGraph<T>,
    restarts: usize,
    seed: u64,
) -> Result<MaximalVerdict<T>> {
    let n = s.ambient_dim();
    // For S = M_n the stacked rows ⟨u|B_k satisfy R†R = I for every unit u.
    if n == 1 || s.is_full() {
        return Ok(MaximalVerdict::Verified { exact: true, min_sigma: 1.0 });
    }
    let restarts = restarts.max(1);
    let runs: Vec<PairSearch<T>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, "maximal", i as u64);
            let u0 = random_unit_vector(n, &mut rng);
            descend_pair(s.space(), u0, DESCENT_ITERS)
        })
        .collect();
    let best = runs
        .iter()
        .min_by(|a, b| a.sigma.partial_cmp(&b.sigma).expect("finite"))
        .expect("at least one restart");
    if let Some(v) = refuted(s, best) {
        return Ok(v);
    }
    let min_sigma = to_f64(best.sigma);
    if n <= 3 {
        let mut rng = task_rng(seed, "maximal-exact", 0);
        match exact_mode(s.space(), &mut rng) {
            Exact::NoPair => return Ok(MaximalVerdict::Verified { exact: true, min_sigma }),
            Exact::Pair(pair) => {
                if let Some(v) = refuted(s, &pair) {
                    return Ok(v);
                }
            }
            Exact::Undecided => {}
        }
    }
    Ok(if min_sigma > VERIFY_SIGMA {
        MaximalVerdict::Verified { exact: false, min_sigma }
    } else {
        MaximalVerdict::Inconclusive { min_sigma }
    })
}

enum Exact<T: Real> {
    NoPair,
    Pair(PairSearch<T>),
    Undecided,
}

type M64 = DMatrix<Complex64>;

fn to_c64<T: Real>(z: Complex<T>) -> Complex64 {
    Complex64::new(to_f64(z.re), to_f64(z.im))
}

fn from_c64<T: Real>(z: Complex64) -> Complex<T> {
    Complex::new(lit(z.re), lit(z.im))
}

/// With `a = conj(u)`, the conditions read `aᵀ B_k v = 0`, so `u` admits a
/// partner iff `L(a) = [aᵀ B_k]_k` is rank deficient. In a random frame
/// `a = W x`, the maximal minors of `L` are polynomials in the chart
/// coordinates of `x`; random combinations `det(Z L)` cut out a finite
/// superset of the deficient points, found by resultants and root finding,
/// and every candidate is re-checked numerically.
fn exact_mode<T: Real, R: Rng + ?Sized>(s: &OperatorSubspace<T>, rng: &mut R) -> Exact<T> {
    let n = s.ambient_dim();
    let dim = s.dim();
    let w: M64 = haar_unitary::<f64, _>(n, rng);
    let c: Vec<M64> = s
        .basis()
        .iter()
        .map(|b| w.transpose() * b.map(to_c64::<T>))
        .collect();
    let zs: Vec<M64> = (0..3).map(|_| ginibre::<f64, _>(n, dim, rng)).collect();
    let l_of = |x: &[Complex64]| -> M64 {
        let mut l = M64::zeros(dim, n);
        for (k, ck) in c.iter().enumerate() {
            for j in 0..n {
                l[(k, j)] = (0..n).map(|i| x[i] * ck[(i, j)]).sum();
            }
        }
        l
    };
    let f = |z: usize, x: &[Complex64]| -> Complex64 {
        if dim < n {
            return Complex64::new(0.0, 0.0);
        }
        (&zs[z] * l_of(x)).determinant()
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pts = n + 2;
    let mut cands: Vec<Vec<Complex64>> = Vec::new();

    // Univariate: roots of det(Z L(p + t q)) along a line, falling back to
    // another Z when the first vanishes identically.
    let line_roots = |p: &[Complex64], q: &[Complex64], out: &mut Vec<Vec<Complex64>>| {
        let at = |t: Complex64| -> Vec<Complex64> { p.iter().zip(q).map(|(a, b)| a + b * t).collect() };
        for z in 0..zs.len() {
            let poly = interpolate(pts, |t| f(z, &at(t)));
            if let Some(tp) = trimmed(&poly, 1e-12, 1e-10) {
                out.extend(roots(&tp).into_iter().map(at));
                return;
            }
        }
        out.push(at(zero));
    };

    if dim <= n || n == 2 {
        // dim ≤ n: det L vanishes on a hypersurface, so some line point works.
        // n = 2: the chart x = (1, t) plus the point (0, 1) is all of CP¹.
        let mut p = vec![zero; n];
        p[0] = one;
        let mut q = vec![zero; n];
        q[1] = one;
        if n == 3 {
            q[2] = Complex64::new(0.37, 0.81);
        }
        line_roots(&p, &q, &mut cands);
        if n == 2 {
            cands.push(vec![zero, one]);
        }
    } else {
        // n = 3, chart x = (1, s, t): R(t) = Res_s(f₀, f₁).
        let scale = std::cell::Cell::new(0.0f64);
        let slice = |z: usize, t: Complex64| interpolate(4, |s| f(z, &[one, s, t]));
        let rt = interpolate(16, |t| {
            let a = slice(0, t);
            let b = slice(1, t);
            let na = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let nb = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
            scale.set(scale.get().max(na.powi(3) * nb.powi(3)));
            resultant(&a, &b)
        });
        let Some(rt) = trimmed(&rt, 1e-13, 1e-10 * scale.get().max(1e-300)) else {
            return Exact::Undecided;
        };
        for t0 in roots(&rt) {
            let mut any = false;
            for z in 0..zs.len() {
                if let Some(sp) = trimmed(&slice(z, t0), 1e-12, 1e-10) {
                    cands.extend(roots(&sp).into_iter().map(|s0| vec![one, s0, t0]));
                    any = true;
                }
            }
            if !any {
                cands.push(vec![one, zero, t0]);
            }
        }
        // Boundary x = (0, 1, t) and the point (0, 0, 1).
        line_roots(&[zero, one, zero], &[zero, zero, one], &mut cands);
        cands.push(vec![zero, zero, one]);
    }

    let mut best: Option<PairSearch<T>> = None;
    for x in cands {
        if x.iter().any(|z| !z.is_finite()) {
            continue;
        }
        let a = &w * nalgebra::DVector::from_vec(x);
        let norm = a.norm();
        if norm == 0.0 {
            continue;
        }
        let u: CVec<T> = a.map(|z| from_c64::<T>(z.conj() / norm));
        let (sigma, _) = min_right_singular(&annihilator_rows(s, &u));
        if best.as_ref().is_none_or(|b| sigma < b.sigma) {
            best = Some(PairSearch { sigma, u });
        }
    }
    let Some(best) = best else {
        return Exact::Undecided;
    };
    if to_f64(best.sigma) >= NEAR_SIGMA {
        return Exact::NoPair;
    }
    let polished = descend_pair(s, best.u, POLISH_ITERS);
    if to_f64(polished.sigma) < REFUTE_SIGMA {
        Exact::Pair(polished)
    } else {
        Exact::Undecided
    }
}
