//! Connectedness and k-connectedness of quantum graphs.

mod maximal;
mod poly;
mod search;
mod separator;

pub use maximal::{maximal_connectivity_check, maximal_connectivity_check_seeded, MaximalVerdict};
pub(crate) use maximal::descend_pair;
pub use search::{separator_search, ConnectivityBounds, SearchConfig};
pub use separator::{
    is_separator, tree_packing_check, verify_k_connected_witnesses, KWitnessCheck,
    SeparatorMode, SeparatorReport, SeparatorVerdict, TreePacking,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, hs_norm, null_space, CMat, CVec, Projection};
use crate::opspace::{commutant, generated_algebra, OperatorSubspace, QuantumGraph};
use crate::random::{rng_from_seed, substream, DEFAULT_SEED};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Connected,
    Disconnected,
}

/// Outcome of the connectedness decision, with enough data to re-check it.
#[derive(Debug, Clone)]
pub struct ConnectivityCertificate<T: Real> {
    pub verdict: Verdict,
    /// Least `m` with `S^m = S^{m+1}`; for connected `S`, the least `m` with
    /// `S^m = M_n`.
    pub stabilization_power: usize,
    pub algebra_dim: usize,
    pub commutant_dim: usize,
    /// Nontrivial `P` with `P S (I − P) = 0`, for disconnected `S`.
    pub witness: Option<Projection<T>>,
}

impl<T: Real> ConnectivityCertificate<T> {
    pub fn is_connected(&self) -> bool {
        self.verdict == Verdict::Connected
    }
}

/// Attempts at a nonscalar Hermitian commutant element before giving up.
const WITNESS_DRAWS: usize = 16;

/// Relative eigenvalue gap separating spectral clusters.
const CLUSTER_GAP: f64 = 1e-6;

pub fn is_connected<T: Real>(s: &QuantumGraph<T>) -> Result<ConnectivityCertificate<T>> {
    is_connected_seeded(s, DEFAULT_SEED)
}

/// Decide connectedness by power stabilization and by the commutant, and
/// insist that both agree.
pub fn is_connected_seeded<T: Real>(s: &QuantumGraph<T>, seed: u64) -> Result<ConnectivityCertificate<T>> {
    let n = s.ambient_dim();
    let (algebra, m) = generated_algebra(s);
    let comm = commutant(s.space());
    let by_powers = algebra.dim() == n * n;
    let by_commutant = comm.dim() == 1;
    if by_powers != by_commutant {
        return Err(Error::Inconsistency(format!(
            "power stabilization gives dim {} of {} (power {m}); commutant has dim {}",
            algebra.dim(),
            n * n,
            comm.dim()
        )));
    }
    let mut cert = ConnectivityCertificate {
        verdict: if by_powers {
            Verdict::Connected
        } else {
            Verdict::Disconnected
        },
        stabilization_power: m,
        algebra_dim: algebra.dim(),
        commutant_dim: comm.dim(),
        witness: None,
    };
    if !by_powers {
        let mut rng = rng_from_seed(seed);
        cert.witness = Some(disconnection_witness(s.space(), &comm, &mut rng)?);
    }
    Ok(cert)
}

/// `max_B ‖P B (I − P)‖_HS` over the basis of `S`.
pub fn leakage<T: Real>(s: &OperatorSubspace<T>, p: &Projection<T>) -> T {
    leakage_between(s, p, &p.complement())
}

/// `max_B ‖Q₁ B Q₂‖_HS` over the basis of `S`.
pub fn leakage_between<T: Real>(s: &OperatorSubspace<T>, q1: &Projection<T>, q2: &Projection<T>) -> T {
    let a = q1.isometry().adjoint();
    let b = q2.isometry();
    s.basis()
        .iter()
        .map(|x| hs_norm(&(&a * x * b)))
        .fold(T::zero(), |acc, r| acc.max(r))
}

/// Spectral projection onto the lowest eigenvalue cluster of a random
/// Hermitian commutant element.
fn disconnection_witness<T: Real, R: Rng + ?Sized>(
    s: &OperatorSubspace<T>,
    comm: &OperatorSubspace<T>,
    rng: &mut R,
) -> Result<Projection<T>> {
    let n = s.ambient_dim();
    let bound = s.tol().residual::<T>();
    let mut best = None;
    for _ in 0..WITNESS_DRAWS {
        let h = comm.random_hermitian_element(rng);
        let eig = hermitian_eig(&h, s.tol())?;
        let spread = eig.values[n - 1] - eig.values[0];
        if spread <= lit::<T>(1e-8) * hs_norm(&h).max(T::one()) {
            continue;
        }
        let gap = lit::<T>(CLUSTER_GAP) * spread;
        let k = (1..n)
            .find(|&k| eig.values[k] - eig.values[k - 1] > gap)
            .expect("nonzero spread has a gap");
        let p = Projection::from_isometry(eig.vectors.columns(0, k).into_owned());
        let r = leakage(s, &p);
        if r <= bound {
            return Ok(p);
        }
        best = Some(to_f64(r).min(best.unwrap_or(f64::INFINITY)));
    }
    Err(Error::Inconsistency(match best {
        Some(r) => format!("no commutant spectral projection separates S (best leakage {r:e})"),
        None => "commutant has dim > 1 but every sampled element is scalar".into(),
    }))
}

/// Rows `⟨u| B_k` over the basis of `S`, stacked into a `dim S × n` matrix.
pub fn annihilator_rows<T: Real>(s: &OperatorSubspace<T>, u: &CVec<T>) -> CMat<T> {
    let n = s.ambient_dim();
    let ud = u.adjoint();
    let mut out = CMat::zeros(s.dim(), n);
    for (k, b) in s.basis().iter().enumerate() {
        out.row_mut(k).copy_from(&(&ud * b));
    }
    out
}

/// `N_u = {x : ⟨u| B x = 0 for all B ∈ S}` as orthonormal columns.
pub fn annihilated_space<T: Real>(s: &OperatorSubspace<T>, u: &CVec<T>) -> CMat<T> {
    null_space(&annihilator_rows(s, u), s.tol())
}

/// Seeded sub-stream for the labeled task `index`.
pub(crate) fn task_rng(seed: u64, label: &str, index: u64) -> crate::random::QRng {
    substream(seed, label, index)
}
