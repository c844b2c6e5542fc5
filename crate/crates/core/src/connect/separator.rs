use super::{is_connected, leakage_between, ConnectivityCertificate, Verdict};
use crate::error::{Error, Result};
use crate::matcore::{hs_norm, identity, Projection, Tolerance};
use crate::opspace::{compress, cross_space, OperatorSubspace, QuantumGraph};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatorMode {
    /// `(I − P) S (I − P)` is disconnected.
    Disconnection,
    /// `(I − P) S (I − P)` is one-dimensional.
    OneDimensional,
}

#[derive(Debug, Clone)]
pub struct SeparatorReport<T: Real> {
    pub separator: Projection<T>,
    pub mode: SeparatorMode,
    /// Certificate of the compression (absent in one-dimensional mode).
    pub sub_certificate: Option<ConnectivityCertificate<T>>,
    pub compressed_dim: usize,
    /// `Q₁ + Q₂ = I − P` with `Q₁ S Q₂ = 0`, lifted from the compression's
    /// witness (disconnection mode).
    pub blocks: Option<(Projection<T>, Projection<T>)>,
}

impl<T: Real> SeparatorReport<T> {
    pub fn rank(&self) -> usize {
        self.separator.rank()
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum SeparatorVerdict<T: Real> {
    Separator(SeparatorReport<T>),
    NotSeparator {
        compressed_dim: usize,
        sub_certificate: ConnectivityCertificate<T>,
    },
}

impl<T: Real> SeparatorVerdict<T> {
    pub fn report(&self) -> Option<&SeparatorReport<T>> {
        match self {
            Self::Separator(r) => Some(r),
            Self::NotSeparator { .. } => None,
        }
    }

    pub fn into_report(self) -> Option<SeparatorReport<T>> {
        match self {
            Self::Separator(r) => Some(r),
            Self::NotSeparator { .. } => None,
        }
    }

    pub fn is_separator(&self) -> bool {
        self.report().is_some()
    }
}

/// Is `(I − P) S (I − P)` disconnected or one-dimensional? `P = I_n` is
/// rejected.
pub fn is_separator<T: Real>(s: &QuantumGraph<T>, p: &Projection<T>) -> Result<SeparatorVerdict<T>> {
    let n = s.ambient_dim();
    if p.dim() != n {
        return Err(Error::dim(n, p.dim()));
    }
    if p.rank() >= n {
        return Err(Error::Degenerate(
            "P = I_n compresses S to the zero space and is never a separator".into(),
        ));
    }
    let c = compress(s.space(), &p.complement())?;
    let compressed_dim = c.space.dim();
    if compressed_dim == 1 {
        return Ok(SeparatorVerdict::Separator(SeparatorReport {
            separator: p.clone(),
            mode: SeparatorMode::OneDimensional,
            sub_certificate: None,
            compressed_dim,
            blocks: None,
        }));
    }
    let sub = QuantumGraph::try_from_subspace(c.space.clone())?;
    let cert = is_connected(&sub)?;
    if cert.verdict == Verdict::Connected {
        return Ok(SeparatorVerdict::NotSeparator {
            compressed_dim,
            sub_certificate: cert,
        });
    }
    let w = cert.witness.as_ref().expect("disconnected certificates carry a witness");
    let q1 = c.lift_projection(w);
    let q2 = c.lift_projection(&w.complement());
    Ok(SeparatorVerdict::Separator(SeparatorReport {
        separator: p.clone(),
        mode: SeparatorMode::Disconnection,
        sub_certificate: Some(cert),
        compressed_dim,
        blocks: Some((q1, q2)),
    }))
}

/// Re-run the separator check from scratch at `residual_abs / 10`.
pub(crate) fn reverifies<T: Real>(s: &QuantumGraph<T>, p: &Projection<T>) -> bool {
    let tight = s.tol().tightened(10.0);
    let Ok(t) = QuantumGraph::try_from_subspace(s.space().clone().with_tolerance(tight)) else {
        return false;
    };
    let Ok(verdict) = is_separator(&t, p) else {
        return false;
    };
    match verdict.report() {
        Some(r) => match &r.blocks {
            Some((q1, q2)) => leakage_between(t.space(), q1, q2) <= tight.residual::<T>(),
            None => true,
        },
        None => false,
    }
}

#[derive(Debug, Clone)]
pub struct KWitnessCheck<T: Real> {
    /// No candidate refutes k-connectedness; not a proof of it.
    pub holds: bool,
    pub offending: Option<SeparatorReport<T>>,
}

/// Look for a candidate of rank `< k` that passes the separator check.
pub fn verify_k_connected_witnesses<T: Real>(
    s: &QuantumGraph<T>,
    k: usize,
    candidates: &[Projection<T>],
) -> Result<KWitnessCheck<T>> {
    if k == 0 {
        return Err(Error::Validation("k must be positive".into()));
    }
    for p in candidates {
        if p.rank() >= k {
            continue;
        }
        if let Some(r) = is_separator(s, p)?.into_report() {
            return Ok(KWitnessCheck {
                holds: false,
                offending: Some(r),
            });
        }
    }
    Ok(KWitnessCheck {
        holds: true,
        offending: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreePacking {
    pub sum: usize,
    pub bound: usize,
    pub holds: bool,
}

/// Validate that `parts` is a projective partition of `I_n`.
pub fn check_partition<T: Real>(n: usize, parts: &[Projection<T>], tol: &Tolerance) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::Validation("partition has no parts".into()));
    }
    let bound = tol.residual::<T>();
    let mut total = identity::<T>(n).scale(T::zero());
    for (i, p) in parts.iter().enumerate() {
        if p.dim() != n {
            return Err(Error::dim(n, p.dim()));
        }
        if p.rank() == 0 || p.rank() == n {
            return Err(Error::Validation(format!("part {i} is a trivial projection")));
        }
        for (j, q) in parts.iter().enumerate().skip(i + 1) {
            let r = hs_norm(&(p.matrix() * q.matrix()));
            if r > bound {
                return Err(Error::Validation(format!(
                    "parts {i} and {j} overlap (‖P_i P_j‖ = {r})"
                )));
            }
        }
        total += p.matrix();
    }
    let r = hs_norm(&(total - identity::<T>(n)));
    if r > bound * lit::<T>(parts.len() as f64) {
        return Err(Error::Validation(format!("parts do not sum to I_n (residual {r})")));
    }
    Ok(())
}

/// `Σ_{i≠j} dim P_j S P_i` against `2(m − 1)`.
pub fn tree_packing_check<T: Real>(s: &OperatorSubspace<T>, parts: &[Projection<T>]) -> Result<TreePacking> {
    check_partition(s.ambient_dim(), parts, s.tol())?;
    let mut sum = 0;
    for (i, pi) in parts.iter().enumerate() {
        for (j, pj) in parts.iter().enumerate() {
            if i != j {
                sum += cross_space(s, pj, pi)?.dim();
            }
        }
    }
    let bound = 2 * (parts.len() - 1);
    Ok(TreePacking {
        sum,
        bound,
        holds: sum >= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{lift, ClassicalGraph};
    use crate::matcore::Tolerance;
    use crate::random::{haar_isometry, haar_unitary, rng_from_seed};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn cut_vertex_of_path() {
        let s = lift::<f64>(&ClassicalGraph::path(3), tol());
        let p = Projection::coordinate(3, &[1]);
        let r = is_separator(&s, &p).unwrap().into_report().unwrap();
        assert_eq!(r.mode, SeparatorMode::Disconnection);
        assert_eq!(r.compressed_dim, 2);
        let (q1, q2) = r.blocks.as_ref().unwrap();
        assert!(leakage_between(s.space(), q1, q2) <= 1e-12);
        assert!(reverifies(&s, &p));
    }

    #[test]
    fn full_algebra_has_no_rank_one_separator() {
        let s = QuantumGraph::<f64>::full(3, tol());
        let mut rng = rng_from_seed(4);
        for _ in 0..5 {
            let p = Projection::from_isometry(haar_isometry::<f64, _>(3, 1, &mut rng));
            assert!(!is_separator(&s, &p).unwrap().is_separator());
        }
    }

    #[test]
    fn corank_one_is_one_dimensional() {
        let mut rng = rng_from_seed(5);
        let s = QuantumGraph::<f64>::full(3, tol());
        let p = Projection::from_isometry(haar_isometry::<f64, _>(3, 2, &mut rng));
        let r = is_separator(&s, &p).unwrap().into_report().unwrap();
        assert_eq!((r.mode, r.compressed_dim), (SeparatorMode::OneDimensional, 1));
    }

    #[test]
    fn identity_is_rejected_and_zero_compresses_to_s() {
        let s = QuantumGraph::<f64>::scalars(2, tol());
        assert!(matches!(is_separator(&s, &Projection::identity(2)), Err(Error::Degenerate(_))));
        let r = is_separator(&s, &Projection::zero(2)).unwrap().into_report().unwrap();
        assert_eq!(r.mode, SeparatorMode::OneDimensional);
        let d = crate::instances::diagonal_algebra::<f64>(2, tol());
        let r = is_separator(&d, &Projection::zero(2)).unwrap().into_report().unwrap();
        assert_eq!(r.mode, SeparatorMode::Disconnection);
        let full = QuantumGraph::<f64>::full(2, tol());
        assert!(!is_separator(&full, &Projection::zero(2)).unwrap().is_separator());
    }

    #[test]
    fn k_witness_examples() {
        let s = lift::<f64>(&ClassicalGraph::path(3), tol());
        let c = verify_k_connected_witnesses(&s, 2, &[Projection::coordinate(3, &[1])]).unwrap();
        assert!(!c.holds);
        assert_eq!(c.offending.unwrap().rank(), 1);

        let m = QuantumGraph::<f64>::full(4, tol());
        let mut rng = rng_from_seed(6);
        let cands: Vec<_> = (0..3)
            .map(|r| Projection::from_isometry(haar_isometry::<f64, _>(4, r, &mut rng)))
            .collect();
        assert!(verify_k_connected_witnesses(&m, 3, &cands).unwrap().holds);
        assert!(verify_k_connected_witnesses(&s, 1, &[]).unwrap().holds);
    }

    #[test]
    fn tree_packing_examples() {
        let coords = |n: usize| (0..n).map(|i| Projection::coordinate(n, &[i])).collect::<Vec<_>>();
        let s = lift::<f64>(&ClassicalGraph::path(3), tol());
        let t = tree_packing_check(&s, &coords(3)).unwrap();
        assert_eq!((t.sum, t.bound, t.holds), (4, 4, true));

        let m = QuantumGraph::<f64>::full(4, tol());
        let parts = [Projection::coordinate(4, &[0]), Projection::coordinate(4, &[1, 2, 3])];
        let t = tree_packing_check(&m, &parts).unwrap();
        assert_eq!((t.sum, t.holds), (2 * 3, true));

        let c = QuantumGraph::<f64>::scalars(2, tol());
        let t = tree_packing_check(&c, &coords(2)).unwrap();
        assert_eq!((t.sum, t.holds), (0, false));
    }

    #[test]
    fn tree_packing_rejects_bad_partitions() {
        let s = QuantumGraph::<f64>::full(3, tol());
        let overlap = [Projection::coordinate(3, &[0, 1]), Projection::coordinate(3, &[1, 2])];
        assert!(tree_packing_check(&s, &overlap).is_err());
        let short = [Projection::coordinate(3, &[0]), Projection::coordinate(3, &[1])];
        assert!(tree_packing_check(&s, &short).is_err());
        let trivial = [Projection::identity(3)];
        assert!(tree_packing_check(&s, &trivial).is_err());
    }

    #[test]
    fn separators_map_under_unitaries() {
        let s = lift::<f64>(&ClassicalGraph::path(4), tol());
        let mut rng = rng_from_seed(9);
        let u = haar_unitary::<f64, _>(4, &mut rng);
        let t = s.conjugated(&u);
        let p = Projection::coordinate(4, &[1]).conjugated(&u);
        let r = is_separator(&t, &p).unwrap().into_report().unwrap();
        let (q1, q2) = r.blocks.unwrap();
        assert!(leakage_between(t.space(), &q1, &q2) <= 1e-8);
        let w = r.sub_certificate.unwrap().witness.unwrap();
        assert!(w.rank() > 0);
    }
}
