//! Completely positive maps in Kraus form, their Choi matrices, channel
//! confusability graphs, and checks for orthogonal representations and
//! locally general position.

use rand::Rng;
use rayon::prelude::*;

use crate::classical::{validate_orth_rep, ClassicalGraph, ClassicalOrthRep};
use crate::connect::{annihilated_space, descend_pair, is_connected};
use crate::error::{Error, Result};
use crate::matcore::{
    basis_vector, check_finite, hermitian_eig, hs_norm, identity, ket_bra, matrix_unit, null_space,
    numerical_rank, CMat, CVec, Projection, RowStack, Tolerance,
};
use crate::opspace::{make_quantum_graph, BuildMode, OperatorSubspace, QuantumGraph};
use crate::random::{complex_gaussian, haar_isometry, random_unit_vector, substream, DEFAULT_SEED};
use crate::scalar::{cabs, lit, to_f64, Real};

/// `ρ ↦ Σ K_i ρ K_i†` from `M_n` to `M_d`.
#[derive(Debug, Clone)]
pub struct KrausMap<T: Real> {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMat<T>>,
    trace_preserving: bool,
    tol: Tolerance,
}

impl<T: Real> KrausMap<T> {
    pub fn new(in_dim: usize, out_dim: usize, kraus: Vec<CMat<T>>, tol: Tolerance) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Validation("a Kraus map needs at least one operator".into()));
        }
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::Validation("dimensions must be positive".into()));
        }
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (out_dim, in_dim) {
                return Err(Error::dim(
                    format!("{out_dim}x{in_dim}"),
                    format!("{:?} for Kraus operator {i}", k.shape()),
                ));
            }
            check_finite(k)?;
        }
        let mut sum = CMat::<T>::zeros(in_dim, in_dim);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let trace_preserving = hs_norm(&(sum - identity::<T>(in_dim))) <= tol.residual::<T>();
        Ok(Self {
            in_dim,
            out_dim,
            kraus,
            trace_preserving,
            tol,
        })
    }

    pub fn identity(n: usize, tol: Tolerance) -> Self {
        Self::new(n, n, vec![identity(n)], tol).expect("valid")
    }

    /// Kraus operators `|e_i⟩⟨e_i|`: kills off-diagonal entries.
    pub fn dephasing(n: usize, tol: Tolerance) -> Self {
        Self::new(n, n, (0..n).map(|i| matrix_unit(n, i, i)).collect(), tol).expect("valid")
    }

    /// Kraus operators `|e_i⟩⟨e_j| / √n`: `ρ ↦ (tr ρ / n) I`.
    pub fn completely_depolarizing(n: usize, tol: Tolerance) -> Self {
        let c: T = lit(1.0 / (n as f64).sqrt());
        let kraus = (0..n)
            .flat_map(|i| (0..n).map(move |j| matrix_unit::<T>(n, i, j).scale(c)))
            .collect();
        Self::new(n, n, kraus, tol).expect("valid")
    }

    /// Kraus operators `⟨e_i|`: `ρ ↦ tr ρ` in `M_1`.
    pub fn trace_map(n: usize, tol: Tolerance) -> Self {
        let kraus = (0..n)
            .map(|i| CMat::from_fn(1, n, |_, c| if c == i { T::one().into() } else { T::zero().into() }))
            .collect();
        Self::new(n, 1, kraus, tol).expect("valid")
    }

    /// Random channel from a Haar isometry `C^n → C^d ⊗ C^k`.
    pub fn stinespring<R: Rng + ?Sized>(n: usize, d: usize, k: usize, tol: Tolerance, rng: &mut R) -> Result<Self> {
        if n > d * k {
            return Err(Error::Validation(format!(
                "no isometry from C^{n} into C^{d} ⊗ C^{k}"
            )));
        }
        let v = haar_isometry::<T, R>(d * k, n, rng);
        let kraus = (0..k)
            .map(|m| CMat::from_fn(d, n, |a, i| v[(a * k + m, i)]))
            .collect();
        Self::new(n, d, kraus, tol)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMat<T>] {
        &self.kraus
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn apply(&self, rho: &CMat<T>) -> Result<CMat<T>> {
        if rho.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::dim(
                format!("{0}x{0}", self.in_dim),
                format!("{:?}", rho.shape()),
            ));
        }
        let mut out = CMat::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// `Σ_{ij} |e_i⟩⟨e_j| ⊗ Φ(|e_i⟩⟨e_j|)`, of size `nd × nd`.
    pub fn choi(&self) -> CMat<T> {
        let (n, d) = (self.in_dim, self.out_dim);
        let mut c = CMat::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let block = self.apply(&matrix_unit(n, i, j)).expect("shape matches");
                c.view_mut((i * d, j * d), (d, d)).copy_from(&block);
            }
        }
        c
    }

    /// Kraus operators from the spectral factorization of a Choi matrix.
    pub fn from_choi(choi: &CMat<T>, in_dim: usize, out_dim: usize, tol: Tolerance) -> Result<Self> {
        let size = in_dim * out_dim;
        if choi.shape() != (size, size) {
            return Err(Error::dim(format!("{size}x{size}"), format!("{:?}", choi.shape())));
        }
        let eig = hermitian_eig(choi, &tol)?;
        let top = eig.values.last().copied().unwrap_or(T::zero());
        let scale = hs_norm(choi).max(T::one());
        if eig.values[0] < -tol.residual::<T>() * scale {
            return Err(Error::Validation(format!(
                "Choi matrix is not positive semidefinite (eigenvalue {})",
                eig.values[0]
            )));
        }
        let cutoff = tol.rank_rel::<T>() * top.max(T::one());
        let mut kraus = Vec::new();
        for (m, &lambda) in eig.values.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let w = eig.vectors.column(m);
            let root = lambda.sqrt();
            kraus.push(CMat::from_fn(out_dim, in_dim, |a, i| w[i * out_dim + a].scale(root)));
        }
        if kraus.is_empty() {
            kraus.push(CMat::zeros(out_dim, in_dim));
        }
        Self::new(in_dim, out_dim, kraus, tol)
    }

    /// `span{K_i† K_j}`, which contains `I` when the map is trace preserving.
    pub fn channel_confusability(&self) -> Result<QuantumGraph<T>> {
        if !self.trace_preserving {
            return Err(Error::Validation("channel confusability needs a trace-preserving map".into()));
        }
        let mut prods = Vec::with_capacity(self.kraus.len() * self.kraus.len());
        for a in &self.kraus {
            for b in &self.kraus {
                prods.push(a.adjoint() * b);
            }
        }
        make_quantum_graph(self.in_dim, &prods, self.tol, BuildMode::Strict)
    }
}

/// Inverse of [`KrausMap::choi`] up to the choice of Kraus operators.
pub fn kraus_from_choi<T: Real>(choi: &CMat<T>, in_dim: usize, out_dim: usize, tol: Tolerance) -> Result<KrausMap<T>> {
    KrausMap::from_choi(choi, in_dim, out_dim, tol)
}

/// Largest of `‖XY‖, ‖YX‖, ‖X†Y‖, ‖XY†‖`, relative to `max(‖X‖‖Y‖, 1)`,
/// with the name of the product attaining it.
pub fn cstar_residual<T: Real>(x: &CMat<T>, y: &CMat<T>) -> (T, &'static str) {
    let scale = (hs_norm(x) * hs_norm(y)).max(T::one());
    let prods = [
        (x * y, "XY"),
        (y * x, "YX"),
        (x.adjoint() * y, "X*Y"),
        (x * y.adjoint(), "XY*"),
    ];
    prods
        .iter()
        .map(|(m, name)| (hs_norm(m) / scale, *name))
        .fold((T::zero(), "XY"), |acc, r| if r.0 > acc.0 { r } else { acc })
}

/// `XY = YX = X†Y = XY† = 0` within `residual_abs · max(‖X‖‖Y‖, 1)`.
pub fn cstar_orthogonal<T: Real>(x: &CMat<T>, y: &CMat<T>, tol: &Tolerance) -> bool {
    x.shape() == y.shape() && cstar_residual(x, y).0 <= tol.residual::<T>()
}

/// `max` over the basis of `S` of `‖A B_k B‖`, `‖B B_k A‖`, `‖A† B_k B‖`,
/// `‖A B_k B†‖`.
pub fn annihilation_residual<T: Real>(s: &OperatorSubspace<T>, a: &CMat<T>, b: &CMat<T>) -> T {
    let (ad, bd) = (a.adjoint(), b.adjoint());
    s.basis()
        .iter()
        .map(|x| {
            [a * x * b, b * x * a, &ad * x * b, a * x * &bd]
                .iter()
                .map(hs_norm)
                .fold(T::zero(), |m, r| m.max(r))
        })
        .fold(T::zero(), |m, r| m.max(r))
}

/// Every `B` with `A S B = B S A = A† S B = A S B† = 0`, as orthonormal
/// columns of `vec B`. The last condition is `B S A† = 0` by adjoint closure.
pub fn admissible_partners<T: Real>(s: &OperatorSubspace<T>, a: &CMat<T>) -> CMat<T> {
    let n = s.ambient_dim();
    let id = identity::<T>(n);
    let ad = a.adjoint();
    let mut stack = RowStack::new(n * n);
    for x in s.basis() {
        // Column-major: vec(M B) = (I ⊗ M) vec B, vec(B M) = (Mᵀ ⊗ I) vec B.
        stack.push(id.kronecker(&(a * x)));
        stack.push((x * a).transpose().kronecker(&id));
        stack.push(id.kronecker(&(&ad * x)));
        stack.push((x * &ad).transpose().kronecker(&id));
    }
    null_space(&stack.finish(), s.tol())
}

/// Structured first members: rank-one projections onto basis vectors and onto
/// directions with a nontrivial annihilated space, matrix units, and the
/// disconnection witness when there is one.
fn structured_firsts<T: Real, R: Rng + ?Sized>(s: &QuantumGraph<T>, rng: &mut R) -> Vec<CMat<T>> {
    let n = s.ambient_dim();
    let mut out = Vec::new();
    for i in 0..n {
        let e = basis_vector::<T>(n, i);
        out.push(ket_bra(&e, &e));
    }
    for u in annihilating_directions(s.space(), 8, rng) {
        out.push(ket_bra(&u, &u));
    }
    for _ in 0..2 {
        let u = random_unit_vector::<T, R>(n, rng);
        out.push(ket_bra(&u, &u));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(matrix_unit(n, i, j));
            }
        }
    }
    if let Ok(cert) = is_connected(s) {
        if let Some(p) = cert.witness {
            out.push(p.complement().matrix().clone());
            out.push(p.matrix().clone());
        }
    }
    out
}

/// Unit vectors `u` found by descent with `N_u ≠ 0`.
fn annihilating_directions<T: Real, R: Rng + ?Sized>(s: &OperatorSubspace<T>, starts: usize, rng: &mut R) -> Vec<CVec<T>> {
    let n = s.ambient_dim();
    let seeds: Vec<u64> = (0..starts).map(|_| rng.random()).collect();
    seeds
        .par_iter()
        .filter_map(|&sd| {
            let mut r = crate::random::rng_from_seed(sd);
            let u0 = random_unit_vector::<T, _>(n, &mut r);
            let u = descend_pair(s, u0, 200).u;
            (annihilated_space(s, &u).ncols() > 0).then_some(u)
        })
        .collect()
}

/// Pairs `(A, B)` satisfying all four annihilation conditions: `A` runs over
/// structured candidates and `B` is drawn at random from the admissible
/// null space of each. Empty when no sampled `A` admits a nonzero `B`.
pub fn annihilating_pairs<T: Real>(s: &QuantumGraph<T>, samples: usize, seed: u64) -> Vec<(CMat<T>, CMat<T>)> {
    let n = s.ambient_dim();
    let mut rng = substream(seed, "annihilating", 0);
    let firsts = structured_firsts(s, &mut rng);
    let spaces: Vec<(CMat<T>, CMat<T>)> = firsts
        .into_par_iter()
        .map(|a| {
            let ns = admissible_partners(s.space(), &a);
            (a, ns)
        })
        .filter(|(_, ns)| ns.ncols() > 0)
        .collect();
    if spaces.is_empty() {
        return Vec::new();
    }
    let bound = s.tol().residual::<T>();
    let mut out = Vec::with_capacity(samples);
    let mut attempts = 0;
    while out.len() < samples && attempts < 4 * samples + 16 {
        let (a, ns) = &spaces[attempts % spaces.len()];
        attempts += 1;
        let coeff = CVec::from_fn(ns.ncols(), |_, _| complex_gaussian(&mut rng));
        let v = ns * coeff;
        let b = CMat::from_iterator(n, n, v.iter().copied());
        let b = b.unscale(hs_norm(&b));
        if annihilation_residual(s.space(), a, &b) <= bound {
            out.push((a.clone(), b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampledVerdict {
    /// Every sampled case passed; not a proof.
    PassSampled,
    Violated,
}

#[derive(Debug, Clone)]
pub struct OrthViolation<T: Real> {
    pub a: CMat<T>,
    pub b: CMat<T>,
    pub product: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct OrthRepReport<T: Real> {
    pub pairs_tested: usize,
    pub violations: Vec<OrthViolation<T>>,
    /// Pairs whose C*-residual sits between `residual_abs` and ten times it.
    pub marginal: usize,
    /// Largest relative C*-residual seen.
    pub worst_residual: f64,
    pub verdict: SampledVerdict,
}

/// Sampled check that `Φ` sends annihilating pairs of `S` to C*-orthogonal
/// pairs. Violations need a residual above `10 · residual_abs` on a pair that
/// annihilates at `residual_abs / 10`.
pub fn check_orth_rep<T: Real>(
    phi: &KrausMap<T>,
    s: &QuantumGraph<T>,
    samples: usize,
    seed: u64,
) -> Result<OrthRepReport<T>> {
    if phi.in_dim != s.ambient_dim() {
        return Err(Error::dim(s.ambient_dim(), phi.in_dim));
    }
    let pairs = annihilating_pairs(s, samples, seed);
    let tol = s.tol();
    let loose: T = tol.residual::<T>() * lit(10.0);
    let tight: T = tol.residual::<T>() / lit(10.0);
    let mut violations = Vec::new();
    let mut marginal = 0;
    let mut worst = 0.0f64;
    for (a, b) in &pairs {
        let x = phi.apply(a)?;
        let y = phi.apply(b)?;
        let (r, product) = cstar_residual(&x, &y);
        worst = worst.max(to_f64(r));
        if r > loose {
            if annihilation_residual(s.space(), a, b) <= tight {
                violations.push(OrthViolation {
                    a: a.clone(),
                    b: b.clone(),
                    product,
                    residual: to_f64(r),
                });
            } else {
                marginal += 1;
            }
        } else if r > tol.residual::<T>() {
            marginal += 1;
        }
    }
    let verdict = if violations.is_empty() {
        SampledVerdict::PassSampled
    } else {
        SampledVerdict::Violated
    };
    Ok(OrthRepReport {
        pairs_tested: pairs.len(),
        violations,
        marginal,
        worst_residual: worst,
        verdict,
    })
}

/// `Φ(X) = Σ_i |f(i)⟩⟨e_i| X |e_i⟩⟨f(i)|`, i.e. Kraus operators `|f(i)⟩⟨e_i|`.
pub fn classical_to_quantum_rep<T: Real>(
    g: &ClassicalGraph,
    f: &ClassicalOrthRep<T>,
    tol: Tolerance,
) -> Result<KrausMap<T>> {
    let check = validate_orth_rep(g, f, &tol)?;
    if !check.valid {
        return Err(Error::Validation(format!(
            "not an orthogonal representation (overlap {:e} on a non-edge)",
            check.worst_overlap
        )));
    }
    let n = g.n();
    let kraus = (0..n)
        .map(|i| ket_bra(f.vector(i), &basis_vector(n, i)))
        .collect();
    KrausMap::new(n, f.d(), kraus, tol)
}

/// Deterministic range vector of a PSD matrix: the top eigenvector (for a
/// degenerate top eigenvalue, the projection of the standard basis vector
/// it captures best), phase-fixed so its largest coordinate (lowest index
/// on ties) is real positive, and scaled by the top eigenvalue.
fn range_vector<T: Real>(m: &CMat<T>, tol: &Tolerance) -> Result<Option<CVec<T>>> {
    let eig = hermitian_eig(m, tol)?;
    let d = eig.values.len();
    let top = eig.values[d - 1];
    if top <= tol.residual::<T>() {
        return Ok(None);
    }
    let gap = top * lit(1e-9);
    let first = (0..d).find(|&k| top - eig.values[k] <= gap).expect("top is in range");
    let cluster = eig.vectors.columns(first, d - first).into_owned();
    let mut v: CVec<T> = if d - first == 1 {
        cluster.column(0).into_owned()
    } else {
        let pi = &cluster * cluster.adjoint();
        let k = pick_max(&(0..d).map(|k| pi.column(k).norm()).collect::<Vec<_>>());
        let c = pi.column(k).into_owned();
        c.unscale(c.norm())
    };
    let k = pick_max(&v.iter().map(|z| cabs(*z)).collect::<Vec<_>>());
    let phase = v[k].unscale(cabs(v[k]));
    v = v.map(|z| z * phase.conj());
    Ok(Some(v.scale(top)))
}

/// Index of the largest entry; lowest index among near-ties.
fn pick_max<T: Real>(xs: &[T]) -> usize {
    let max = xs.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let slack = max * lit(1e-9);
    xs.iter().position(|&x| x >= max - slack).expect("nonempty")
}

/// `f(i)` from the range of `Φ(|e_i⟩⟨e_i|)`.
pub fn quantum_to_classical_rep<T: Real>(
    phi: &KrausMap<T>,
    g: &ClassicalGraph,
) -> Result<ClassicalOrthRep<T>> {
    let n = g.n();
    if phi.in_dim != n {
        return Err(Error::dim(n, phi.in_dim));
    }
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let out = phi.apply(&matrix_unit(n, i, i))?;
        match range_vector(&out, &phi.tol)? {
            Some(v) => vectors.push(v),
            None => {
                return Err(Error::Degenerate(format!("Φ(|e_{i}⟩⟨e_{i}|) = 0")));
            }
        }
    }
    let f = ClassicalOrthRep::new(phi.out_dim, vectors)?;
    let check = validate_orth_rep(g, &f, &phi.tol)?;
    if !check.valid {
        return Err(Error::Validation(format!(
            "range vectors are not orthogonal on non-edges (overlap {:e}); Φ is not an orthogonal representation",
            check.worst_overlap
        )));
    }
    Ok(f)
}

#[derive(Debug, Clone)]
pub enum LgpVerdict<T: Real> {
    PassSampled,
    Violated {
        q: Projection<T>,
        p: Projection<T>,
        rank_image: usize,
    },
}

#[derive(Debug, Clone)]
pub struct LgpReport<T: Real> {
    pub verdict: LgpVerdict<T>,
    /// Directions `u` tried, and how many had a nonzero `N_u`.
    pub directions: usize,
    pub annihilated_directions: usize,
    pub projections_tested: usize,
}

impl<T: Real> LgpReport<T> {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, LgpVerdict::PassSampled)
    }
}

/// Random subspaces per rank of `N_u`.
pub const LGP_SUBSPACES_PER_RANK: usize = 20;

/// Directions `u` for rank-one `Q = |u⟩⟨u|`: standard basis vectors, sums of
/// pairs, random sparse and dense vectors, and descent minimizers.
fn lgp_directions<T: Real, R: Rng + ?Sized>(s: &OperatorSubspace<T>, samples: usize, rng: &mut R) -> Vec<CVec<T>> {
    let n = s.ambient_dim();
    let mut out: Vec<CVec<T>> = (0..n).map(|i| basis_vector(n, i)).collect();
    let h: T = lit(std::f64::consts::FRAC_1_SQRT_2);
    for i in 0..n {
        for j in (i + 1)..n {
            let z = complex_gaussian::<T, R>(rng);
            let mut v = basis_vector::<T>(n, i).scale(h);
            v[j] = z.unscale(cabs(z)).scale(h);
            out.push(v);
        }
    }
    for k in 0..samples {
        let mut v = random_unit_vector::<T, R>(n, rng);
        if k % 2 == 0 {
            // Sparse: zero a random subset of coordinates.
            for c in 0..n {
                if rng.random::<bool>() {
                    v[c] = T::zero().into();
                }
            }
            if v.norm() == T::zero() {
                v = basis_vector(n, rng.random_range(0..n));
            }
            v = v.unscale(v.norm());
        }
        out.push(v);
    }
    out.extend(annihilating_directions(s, 8, rng));
    out
}

/// Sampled check of `rank Φ(P) ≥ rank P` for projections `P` under `N_u`,
/// the largest subspace with `⟨u| S P = 0`: the full `N_u` and
/// [`LGP_SUBSPACES_PER_RANK`] random subspaces of every rank.
pub fn check_lgp<T: Real>(phi: &KrausMap<T>, s: &QuantumGraph<T>, samples: usize, seed: u64) -> Result<LgpReport<T>> {
    let n = s.ambient_dim();
    if phi.in_dim != n {
        return Err(Error::dim(n, phi.in_dim));
    }
    let mut rng = substream(seed, "lgp", 0);
    let dirs = lgp_directions(s.space(), samples, &mut rng);
    let tol = *s.tol();
    let tight = tol.tightened(10.0);
    let mut tested = 0;
    let mut annihilated = 0;
    for (idx, u) in dirs.iter().enumerate() {
        let nu = annihilated_space(s.space(), u);
        let dim = nu.ncols();
        if dim == 0 {
            continue;
        }
        annihilated += 1;
        let mut sub_rng = substream(seed, "lgp-sub", idx as u64);
        let mut cands = vec![Projection::from_isometry(nu.clone())];
        for r in 1..dim {
            for _ in 0..LGP_SUBSPACES_PER_RANK {
                let w = haar_isometry::<T, _>(dim, r, &mut sub_rng);
                cands.push(Projection::from_isometry(&nu * w));
            }
        }
        for p in cands {
            tested += 1;
            let img = phi.apply(p.matrix())?;
            let rank_image = numerical_rank(&img, &tol);
            if rank_image >= p.rank() {
                continue;
            }
            // Re-verify at the tighter tolerance before reporting.
            let q = Projection::from_isometry(CMat::from_columns(&[u.unscale(u.norm())]));
            let leak = crate::connect::leakage_between(s.space(), &q, &p);
            if numerical_rank(&img, &tight) < p.rank() && leak <= tight.residual::<T>() {
                return Ok(LgpReport {
                    verdict: LgpVerdict::Violated { q, p, rank_image },
                    directions: dirs.len(),
                    annihilated_directions: annihilated,
                    projections_tested: tested,
                });
            }
        }
    }
    Ok(LgpReport {
        verdict: LgpVerdict::PassSampled,
        directions: dirs.len(),
        annihilated_directions: annihilated,
        projections_tested: tested,
    })
}

/// `max(n − d, 0)` as a connectivity lower bound, emitted only when both the
/// orthogonal-representation and the LGP checks pass. The bound is
/// conditional on those sampled verifications.
pub fn lgp_connectivity_bound<T: Real>(
    phi: &KrausMap<T>,
    s: &QuantumGraph<T>,
    samples: usize,
    seed: u64,
) -> Result<usize> {
    let orth = check_orth_rep(phi, s, samples, seed)?;
    if orth.verdict != SampledVerdict::PassSampled {
        return Err(Error::Precondition(format!(
            "map is not an orthogonal representation ({} violations)",
            orth.violations.len()
        )));
    }
    let lgp = check_lgp(phi, s, samples, seed)?;
    if !lgp.passed() {
        return Err(Error::Precondition("map is not in locally general position".into()));
    }
    Ok(s.ambient_dim().saturating_sub(phi.out_dim))
}

pub fn lgp_connectivity_bound_default<T: Real>(phi: &KrausMap<T>, s: &QuantumGraph<T>) -> Result<usize> {
    lgp_connectivity_bound(phi, s, 200, DEFAULT_SEED)
}
