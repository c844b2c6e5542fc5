//! Matrix subspaces of `M_n` and quantum graphs (operator systems):
//! membership, products, powers, generated algebra, commutant, compression.

use std::ops::Deref;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::{
    dot_slices, extend_orthonormal_flat, gram_schmidt_hs, hs_norm, identity, matrix_unit,
    null_space, orthonormalize_flat, CMat, Projection, RowStack, Tolerance,
};
use crate::random::gaussian;
use crate::scalar::{lit, Real};

/// A linear subspace of `M_n`, stored as a Hilbert–Schmidt-orthonormal basis.
#[derive(Debug, Clone)]
pub struct OperatorSubspace<T: Real> {
    n: usize,
    basis: Vec<CMat<T>>,
    tol: Tolerance,
}

impl<T: Real> OperatorSubspace<T> {
    /// Span of `mats` inside `M_n`.
    pub fn from_spanning(n: usize, mats: &[CMat<T>], tol: Tolerance) -> Result<Self> {
        for m in mats {
            if m.shape() != (n, n) {
                return Err(Error::dim(format!("{n}x{n}"), format!("{:?}", m.shape())));
            }
        }
        Ok(Self {
            n,
            basis: gram_schmidt_hs(mats, &tol)?,
            tol,
        })
    }

    fn from_flat(n: usize, flat: Vec<Vec<Complex<T>>>, tol: Tolerance) -> Self {
        Self {
            n,
            basis: flat.into_iter().map(|v| CMat::from_vec(n, n, v)).collect(),
            tol,
        }
    }

    pub fn zero(n: usize, tol: Tolerance) -> Self {
        Self {
            n,
            basis: Vec::new(),
            tol,
        }
    }

    /// `C·I_n`.
    pub fn scalars(n: usize, tol: Tolerance) -> Self {
        let b = identity::<T>(n).unscale(lit::<T>(n as f64).sqrt());
        Self {
            n,
            basis: vec![b],
            tol,
        }
    }

    /// All of `M_n`, with the matrix units as basis.
    pub fn full(n: usize, tol: Tolerance) -> Self {
        let basis = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| matrix_unit(n, i, j))
            .collect();
        Self { n, basis, tol }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat<T>] {
        &self.basis
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }

    fn check_shape(&self, x: &CMat<T>) -> Result<()> {
        if x.shape() != (self.n, self.n) {
            return Err(Error::dim(
                format!("{0}x{0}", self.n),
                format!("{:?}", x.shape()),
            ));
        }
        Ok(())
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &CMat<T>) -> Result<CMat<T>> {
        self.check_shape(x)?;
        let mut out = CMat::zeros(self.n, self.n);
        for b in &self.basis {
            let c = dot_slices(b.as_slice(), x.as_slice());
            out += b * c;
        }
        Ok(out)
    }

    /// `‖X − Π(X)‖_HS`.
    pub fn residual(&self, x: &CMat<T>) -> Result<T> {
        Ok(hs_norm(&(x - self.project(x)?)))
    }

    /// Membership within `residual_abs · max(‖X‖_HS, 1)`.
    pub fn contains(&self, x: &CMat<T>) -> Result<bool> {
        let scale = hs_norm(x).max(T::one());
        Ok(self.residual(x)? <= self.tol.residual::<T>() * scale)
    }

    pub fn contains_subspace(&self, other: &OperatorSubspace<T>) -> bool {
        other
            .basis
            .iter()
            .all(|b| self.contains(b).unwrap_or(false))
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &OperatorSubspace<T>) -> bool {
        self.n == other.n
            && self.dim() == other.dim()
            && self.contains_subspace(other)
            && other.contains_subspace(self)
    }

    pub fn identity_residual(&self) -> T {
        self.residual(&identity(self.n)).expect("shape matches")
    }

    pub fn contains_identity(&self) -> bool {
        let bound = self.tol.residual::<T>() * lit::<T>(self.n as f64).sqrt();
        self.identity_residual() <= bound
    }

    /// Largest residual of `B†` over basis elements `B`.
    pub fn adjoint_residual(&self) -> T {
        self.basis
            .iter()
            .map(|b| self.residual(&b.adjoint()).expect("shape matches"))
            .fold(T::zero(), |a, r| a.max(r))
    }

    pub fn is_adjoint_closed(&self) -> bool {
        self.adjoint_residual() <= self.tol.residual::<T>()
    }

    /// `max |⟨B_i, B_j⟩ − δ_ij|`.
    pub fn orthonormality_residual(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let ip = dot_slices(a.as_slice(), b.as_slice());
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((ip - Complex::new(target, T::zero())).norm_sqr().sqrt());
            }
        }
        worst
    }

    /// Random real-Gaussian combination of the basis.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMat<T> {
        let mut out = CMat::zeros(self.n, self.n);
        for b in &self.basis {
            let c: T = gaussian(rng);
            out += b.scale(c);
        }
        out
    }

    /// Hermitian part of a random element; lies in the space when it is
    /// adjoint-closed.
    pub fn random_hermitian_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMat<T> {
        let x = self.random_element(rng);
        (&x + x.adjoint()).scale(lit(0.5))
    }

    /// `U S U†` for a unitary `U`.
    pub fn conjugated(&self, u: &CMat<T>) -> Self {
        let ud = u.adjoint();
        Self {
            n: self.n,
            basis: self.basis.iter().map(|b| u * b * &ud).collect(),
            tol: self.tol,
        }
    }
}

/// How `make_quantum_graph` treats a generating set that is not already an
/// operator system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuildMode {
    /// Adjoin `I_n` and the adjoints of the generators.
    #[default]
    Permissive,
    /// Reject unless the raw span already contains `I_n` and is adjoint-closed.
    Strict,
}

/// An operator system: a subspace containing `I_n` and closed under adjoints.
#[derive(Debug, Clone)]
pub struct QuantumGraph<T: Real> {
    space: OperatorSubspace<T>,
}

impl<T: Real> Deref for QuantumGraph<T> {
    type Target = OperatorSubspace<T>;

    fn deref(&self) -> &Self::Target {
        &self.space
    }
}

impl<T: Real> QuantumGraph<T> {
    /// Validate an existing subspace.
    pub fn try_from_subspace(space: OperatorSubspace<T>) -> Result<Self> {
        if !space.contains_identity() {
            return Err(Error::Validation(format!(
                "operator system must contain the identity (residual {})",
                space.identity_residual()
            )));
        }
        if !space.is_adjoint_closed() {
            return Err(Error::Validation(format!(
                "operator system must be closed under adjoints (residual {})",
                space.adjoint_residual()
            )));
        }
        Ok(Self { space })
    }

    pub fn space(&self) -> &OperatorSubspace<T> {
        &self.space
    }

    pub fn into_space(self) -> OperatorSubspace<T> {
        self.space
    }

    pub fn scalars(n: usize, tol: Tolerance) -> Self {
        Self {
            space: OperatorSubspace::scalars(n, tol),
        }
    }

    pub fn full(n: usize, tol: Tolerance) -> Self {
        Self {
            space: OperatorSubspace::full(n, tol),
        }
    }

    pub fn conjugated(&self, u: &CMat<T>) -> Self {
        Self {
            space: self.space.conjugated(u),
        }
    }
}

/// Build a quantum graph from generators in `M_n`.
pub fn make_quantum_graph<T: Real>(
    n: usize,
    generators: &[CMat<T>],
    tol: Tolerance,
    mode: BuildMode,
) -> Result<QuantumGraph<T>> {
    match mode {
        BuildMode::Strict => {
            let space = OperatorSubspace::from_spanning(n, generators, tol)?;
            QuantumGraph::try_from_subspace(space)
        }
        BuildMode::Permissive => {
            let mut all = Vec::with_capacity(2 * generators.len() + 1);
            all.push(identity(n));
            for g in generators {
                all.push(g.clone());
                all.push(g.adjoint());
            }
            let space = OperatorSubspace::from_spanning(n, &all, tol)?;
            QuantumGraph::try_from_subspace(space)
        }
    }
}

fn check_same_ambient<T: Real>(u: &OperatorSubspace<T>, v: &OperatorSubspace<T>) -> Result<()> {
    if u.n != v.n {
        return Err(Error::dim(u.n, v.n));
    }
    Ok(())
}

/// `UV = span{UV : U ∈ 𝒰, V ∈ 𝒱}`.
pub fn product<T: Real>(u: &OperatorSubspace<T>, v: &OperatorSubspace<T>) -> Result<OperatorSubspace<T>> {
    check_same_ambient(u, v)?;
    let n = u.n;
    let prods: Vec<CMat<T>> = u
        .basis
        .iter()
        .flat_map(|a| v.basis.iter().map(move |b| a * b))
        .collect();
    let flat: Vec<&[Complex<T>]> = prods.iter().map(|m| m.as_slice()).collect();
    Ok(OperatorSubspace::from_flat(
        n,
        orthonormalize_flat(&flat, &u.tol, n * n),
        u.tol,
    ))
}

/// Given `T_m` and the directions `fresh` added to it at the last step,
/// `T_{m+1} = T_m S = T_m + fresh·S` whenever `I ∈ S`.
/// The flag is false when the basis of `current` is not a prefix of the result.
fn grow<T: Real>(
    current: &OperatorSubspace<T>,
    fresh: &[CMat<T>],
    s: &QuantumGraph<T>,
) -> (OperatorSubspace<T>, bool) {
    let n = current.n;
    let prods: Vec<CMat<T>> = fresh
        .iter()
        .flat_map(|a| s.basis.iter().map(move |b| a * b))
        .collect();
    let flat: Vec<&[Complex<T>]> = prods.iter().map(|m| m.as_slice()).collect();
    let seed: Vec<Vec<Complex<T>>> = current.basis.iter().map(|b| b.as_slice().to_vec()).collect();
    let (basis, prefix) = extend_orthonormal_flat(seed, &flat, &current.tol, n * n);
    (OperatorSubspace::from_flat(n, basis, current.tol), prefix)
}

/// Successive powers `S^1, S^2, …` computed incrementally; stops once the
/// dimension stabilizes or `limit` powers have been produced.
fn powers_until<T: Real>(s: &QuantumGraph<T>, limit: usize) -> Vec<OperatorSubspace<T>> {
    let n = s.n;
    let mut out = vec![s.space.clone()];
    let mut fresh: Vec<CMat<T>> = s.basis.clone();
    while out.len() < limit {
        let cur = out.last().expect("nonempty");
        if cur.dim() == n * n {
            break;
        }
        let (next, prefix) = grow(cur, &fresh, s);
        if next.dim() <= cur.dim() {
            break;
        }
        fresh = if prefix {
            next.basis[cur.dim()..].to_vec()
        } else {
            next.basis.clone()
        };
        out.push(next);
    }
    out
}

/// `S^m`, with `S^0 = C·I_n`.
pub fn power<T: Real>(s: &QuantumGraph<T>, m: usize) -> OperatorSubspace<T> {
    if m == 0 {
        return OperatorSubspace::scalars(s.n, s.tol);
    }
    powers_until(s, m).pop().expect("at least S^1")
}

/// The algebra `⋃_m S^m` and the least `m` with `S^m = S^{m+1}`.
pub fn generated_algebra<T: Real>(s: &QuantumGraph<T>) -> (OperatorSubspace<T>, usize) {
    let limit = s.n * s.n + 1;
    let mut chain = powers_until(s, limit);
    let m = chain.len();
    (chain.pop().expect("at least S^1"), m)
}

/// `{X : XB = BX for every B}` as the null space of the stacked
/// commutator system.
pub fn commutant<T: Real>(s: &OperatorSubspace<T>) -> OperatorSubspace<T> {
    let n = s.n;
    let nn = n * n;
    let id = identity::<T>(n);
    let mut stack = RowStack::new(nn);
    for b in &s.basis {
        // Column-major vec: vec(XB) = (Bᵀ ⊗ I) vec X, vec(BX) = (I ⊗ B) vec X.
        let block = b.transpose().kronecker(&id) - id.kronecker(b);
        stack.push(block);
    }
    let reduced = stack.finish();
    let ns = null_space(&reduced, &s.tol);
    let mats: Vec<CMat<T>> = ns
        .column_iter()
        .map(|c| CMat::from_iterator(n, n, c.iter().copied()))
        .collect();
    OperatorSubspace::from_spanning(n, &mats, s.tol).expect("shapes are n x n")
}

/// `S` restricted to the range of a projection: `span{V† B V}` in `M_r`.
#[derive(Debug, Clone)]
pub struct CompressedSubspace<T: Real> {
    pub parent: OperatorSubspace<T>,
    pub compressor: Projection<T>,
    pub space: OperatorSubspace<T>,
    pub isometry: CMat<T>,
}

impl<T: Real> CompressedSubspace<T> {
    /// Lift a matrix of `M_r` back to `M_n` as `V X V†`.
    pub fn lift(&self, x: &CMat<T>) -> CMat<T> {
        &self.isometry * x * self.isometry.adjoint()
    }

    /// Lift a projection of `M_r` to one of `M_n` under `P`.
    pub fn lift_projection(&self, p: &Projection<T>) -> Projection<T> {
        Projection::from_isometry(&self.isometry * p.isometry())
    }
}

pub fn compress<T: Real>(s: &OperatorSubspace<T>, p: &Projection<T>) -> Result<CompressedSubspace<T>> {
    if p.dim() != s.n {
        return Err(Error::dim(s.n, p.dim()));
    }
    if p.rank() == 0 {
        return Err(Error::Degenerate("cannot compress by a rank-0 projection".into()));
    }
    let v = p.isometry().clone();
    let vd = v.adjoint();
    let mats: Vec<CMat<T>> = s.basis.iter().map(|b| &vd * b * &v).collect();
    let space = OperatorSubspace::from_spanning(p.rank(), &mats, s.tol)?;
    Ok(CompressedSubspace {
        parent: s.clone(),
        compressor: p.clone(),
        space,
        isometry: v,
    })
}

/// `span{P B Q}` as a subspace of `M_n`.
pub fn cross_space<T: Real>(
    s: &OperatorSubspace<T>,
    p: &Projection<T>,
    q: &Projection<T>,
) -> Result<OperatorSubspace<T>> {
    if p.dim() != s.n || q.dim() != s.n {
        return Err(Error::dim(s.n, format!("{} / {}", p.dim(), q.dim())));
    }
    // The basis is orthonormal, so ‖P B Q‖ ≤ 1; an absolute floor keeps
    // round-off from passing the relative rank cutoff when every product
    // vanishes.
    let floor = s.tol.residual::<T>();
    let mats: Vec<CMat<T>> = s
        .basis
        .iter()
        .map(|b| p.matrix() * b * q.matrix())
        .filter(|m| hs_norm(m) > floor)
        .collect();
    OperatorSubspace::from_spanning(s.n, &mats, s.tol)
}
