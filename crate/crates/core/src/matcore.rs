//! Dense complex linear algebra: Hilbert–Schmidt geometry, orthonormalization,
//! numerical rank, Hermitian spectra, null spaces and orthogonal projections.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cabs, lit, Real};

/// Dense complex matrix; the workhorse value type.
pub type CMat<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVec<T> = DVector<Complex<T>>;

/// A residual inside this factor of a rank cutoff sends the decision to SVD.
const DISPUTE_FACTOR: f64 = 1e2;

/// Numerical thresholds shared by every rank and membership decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff.
    pub rank_rel: f64,
    /// Absolute residual bound for membership and orthonormality checks.
    pub residual_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::for_scalar::<f64>()
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, residual_abs: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x < 1e-2;
        if !ok(rank_rel) || !ok(residual_abs) {
            return Err(Error::Validation(format!(
                "tolerances must lie in (0, 1e-2): rank_rel={rank_rel}, residual_abs={residual_abs}"
            )));
        }
        Ok(Self {
            rank_rel,
            residual_abs,
        })
    }

    pub fn for_scalar<T: Real>() -> Self {
        Self {
            rank_rel: T::DEFAULT_RANK_REL,
            residual_abs: T::DEFAULT_RESIDUAL_ABS,
        }
    }

    /// Both thresholds divided by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        Self {
            rank_rel: self.rank_rel / factor,
            residual_abs: self.residual_abs / factor,
        }
    }

    pub fn rank_rel<T: Real>(&self) -> T {
        lit(self.rank_rel)
    }

    pub fn residual<T: Real>(&self) -> T {
        lit(self.residual_abs)
    }
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

/// The matrix unit `|e_i⟩⟨e_j|` (0-indexed).
pub fn matrix_unit<T: Real>(n: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = Complex::new(T::one(), T::zero());
    m
}

pub fn basis_vector<T: Real>(n: usize, i: usize) -> CVec<T> {
    let mut v = CVec::zeros(n);
    v[i] = Complex::new(T::one(), T::zero());
    v
}

/// The rank-one operator `|u⟩⟨v|`.
pub fn ket_bra<T: Real>(u: &CVec<T>, v: &CVec<T>) -> CMat<T> {
    u * v.adjoint()
}

pub fn check_finite<T: Real>(m: &CMat<T>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation("matrix has non-finite entries".into()))
    }
}

#[inline]
pub(crate) fn dot_slices<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in x.iter().zip(y) {
        acc += a.conj() * b;
    }
    acc
}

#[inline]
pub(crate) fn norm_slice<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Hilbert–Schmidt inner product `tr(X†Y)`.
pub fn hs_inner<T: Real>(x: &CMat<T>, y: &CMat<T>) -> Result<Complex<T>> {
    if x.shape() != y.shape() {
        return Err(Error::dim(
            format!("{:?}", x.shape()),
            format!("{:?}", y.shape()),
        ));
    }
    Ok(dot_slices(x.as_slice(), y.as_slice()))
}

/// Frobenius (Hilbert–Schmidt) norm.
pub fn hs_norm<T: Real>(x: &CMat<T>) -> T {
    norm_slice(x.as_slice())
}

/// Operator (spectral) norm.
pub fn op_norm<T: Real>(x: &CMat<T>) -> T {
    singular_values(x)
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Modified Gram–Schmidt with one re-orthogonalization pass on flat vectors,
/// continuing from the orthonormal `basis`. Returns whether any residual fell
/// close enough to the cutoff that the decision should be arbitrated.
fn gram_schmidt_flat<T: Real>(
    basis: &mut Vec<Vec<Complex<T>>>,
    vecs: &[&[Complex<T>]],
    cutoff: T,
    full_dim: usize,
) -> bool {
    let dispute: T = lit(DISPUTE_FACTOR);
    let mut disputed = false;
    for v in vecs {
        if basis.len() == full_dim {
            break;
        }
        let mut w = v.to_vec();
        for _pass in 0..2 {
            for b in basis.iter() {
                let c = dot_slices(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let r = norm_slice(&w);
        if r > cutoff {
            if r < cutoff * dispute {
                disputed = true;
            }
            let inv = T::one() / r;
            for wi in w.iter_mut() {
                *wi = wi.scale(inv);
            }
            basis.push(w);
        } else if r * dispute > cutoff {
            disputed = true;
        }
    }
    disputed
}

/// Orthonormal basis of span(vecs) via SVD of the coefficient matrix.
fn svd_span_flat<T: Real>(vecs: &[&[Complex<T>]], cutoff: T) -> Vec<Vec<Complex<T>>> {
    let len = vecs[0].len();
    let coeff = CMat::from_fn(len, vecs.len(), |r, c| vecs[c][r]);
    let svd = coeff.svd(true, false);
    let u = svd.u.expect("requested U");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cutoff)
        .map(|(k, _)| u.column(k).iter().copied().collect())
        .collect()
}

/// Orthonormal basis of span(seed ∪ vecs), where `seed` is already
/// orthonormal and is kept as a prefix of the result whenever Gram–Schmidt
/// settles the rank without dispute (the flag reports which happened).
pub(crate) fn extend_orthonormal_flat<T: Real>(
    seed: Vec<Vec<Complex<T>>>,
    vecs: &[&[Complex<T>]],
    tol: &Tolerance,
    full_dim: usize,
) -> (Vec<Vec<Complex<T>>>, bool) {
    let mut scale = vecs
        .iter()
        .map(|v| norm_slice(v))
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    if !seed.is_empty() {
        scale = scale.max(T::one());
    }
    if scale == T::zero() {
        return (seed, true);
    }
    let cutoff = tol.rank_rel::<T>() * scale;
    let mut basis = seed;
    let seed_len = basis.len();
    if gram_schmidt_flat(&mut basis, vecs, cutoff, full_dim) {
        let mut all: Vec<&[Complex<T>]> = basis[..seed_len].iter().map(|v| v.as_slice()).collect();
        all.extend_from_slice(vecs);
        (svd_span_flat(&all, cutoff), false)
    } else {
        (basis, true)
    }
}

pub(crate) fn orthonormalize_flat<T: Real>(
    vecs: &[&[Complex<T>]],
    tol: &Tolerance,
    full_dim: usize,
) -> Vec<Vec<Complex<T>>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    extend_orthonormal_flat(Vec::new(), vecs, tol, full_dim).0
}

/// Hilbert–Schmidt-orthonormal basis of the span of `mats`.
///
/// A matrix is dropped when its residual after projection falls below
/// `rank_rel` times the largest input norm. Near-threshold residuals are
/// re-decided by an SVD of the vectorized inputs.
pub fn gram_schmidt_hs<T: Real>(mats: &[CMat<T>], tol: &Tolerance) -> Result<Vec<CMat<T>>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let (r, c) = first.shape();
    for m in mats {
        if m.shape() != (r, c) {
            return Err(Error::dim(format!("{r}x{c}"), format!("{:?}", m.shape())));
        }
        check_finite(m)?;
    }
    let flat: Vec<&[Complex<T>]> = mats.iter().map(|m| m.as_slice()).collect();
    Ok(orthonormalize_flat(&flat, tol, r * c)
        .into_iter()
        .map(|v| CMat::from_vec(r, c, v))
        .collect())
}

pub fn singular_values<T: Real>(x: &CMat<T>) -> Vec<T> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Vec::new();
    }
    x.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Count of singular values `σ ≥ rank_rel · max(σ_max, 1)`.
pub fn numerical_rank<T: Real>(x: &CMat<T>, tol: &Tolerance) -> usize {
    let sv = singular_values(x);
    let smax = sv.iter().copied().fold(T::one(), |a, b| if b > a { b } else { a });
    let cutoff = tol.rank_rel::<T>() * smax;
    sv.into_iter().filter(|s| *s >= cutoff).count()
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues with matching
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

pub fn hermitian_residual<T: Real>(h: &CMat<T>) -> T {
    hs_norm(&(h - h.adjoint()))
}

pub fn hermitian_eig<T: Real>(h: &CMat<T>, tol: &Tolerance) -> Result<HermitianEig<T>> {
    if !h.is_square() {
        return Err(Error::dim("square matrix", format!("{:?}", h.shape())));
    }
    check_finite(h)?;
    let scale = hs_norm(h).max(T::one());
    let skew = hermitian_residual(h);
    if skew > tol.residual::<T>() * scale {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (‖H − H†‖ = {skew})"
        )));
    }
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianEig {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        });
    }
    let sym = (h + h.adjoint()).scale(lit(0.5));
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEig { values, vectors })
}

/// Orthonormalize a list of vectors into the columns of an isometry.
pub fn orthonormal_columns<T: Real>(vectors: &[CVec<T>], tol: &Tolerance) -> Result<CMat<T>> {
    let Some(first) = vectors.first() else {
        return Err(Error::Degenerate("no vectors supplied".into()));
    };
    let n = first.len();
    for v in vectors {
        if v.len() != n {
            return Err(Error::dim(n, v.len()));
        }
    }
    let flat: Vec<&[Complex<T>]> = vectors.iter().map(|v| v.as_slice()).collect();
    let basis = orthonormalize_flat(&flat, tol, n);
    Ok(CMat::from_fn(n, basis.len(), |r, c| basis[c][r]))
}

/// Accumulates a tall stacked linear system block by block, keeping only a
/// triangular factor so memory stays at O(cols²).
pub(crate) struct RowStack<T: Real> {
    cols: usize,
    acc: Option<CMat<T>>,
    pending: Vec<CMat<T>>,
    pending_rows: usize,
}

impl<T: Real> RowStack<T> {
    pub(crate) fn new(cols: usize) -> Self {
        Self {
            cols,
            acc: None,
            pending: Vec::new(),
            pending_rows: 0,
        }
    }

    pub(crate) fn push(&mut self, block: CMat<T>) {
        debug_assert_eq!(block.ncols(), self.cols);
        self.pending_rows += block.nrows();
        self.pending.push(block);
        if self.pending_rows > 4 * self.cols.max(1) {
            self.compress();
        }
    }

    fn compress(&mut self) {
        let mut blocks: Vec<CMat<T>> = self.acc.take().into_iter().collect();
        blocks.append(&mut self.pending);
        self.pending_rows = 0;
        let stacked = vstack(&blocks, self.cols);
        self.acc = Some(if stacked.nrows() > self.cols {
            stacked.qr().r()
        } else {
            stacked
        });
    }

    pub(crate) fn finish(mut self) -> CMat<T> {
        self.compress();
        self.acc.unwrap_or_else(|| CMat::zeros(0, self.cols))
    }
}

pub(crate) fn vstack<T: Real>(blocks: &[CMat<T>], cols: usize) -> CMat<T> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Null space of `a` as orthonormal columns, with the cutoff
/// `rank_rel · max(σ_max, 1)`.
pub fn null_space<T: Real>(a: &CMat<T>, tol: &Tolerance) -> CMat<T> {
    null_space_with_cutoff(a, tol.rank_rel::<T>())
}

/// Square up `a` without changing its singular values or right singular
/// vectors: tall matrices via R of QR, wide ones by zero padding.
fn square_up<T: Real>(a: &CMat<T>) -> CMat<T> {
    let cols = a.ncols();
    if a.nrows() > cols {
        a.clone().qr().r()
    } else if a.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    }
}

pub(crate) fn null_space_with_cutoff<T: Real>(a: &CMat<T>, rel: T) -> CMat<T> {
    let cols = a.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let svd = square_up(a).svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd
        .singular_values
        .iter()
        .copied()
        .fold(T::one(), |x, y| if y > x { y } else { x });
    let cutoff = rel * smax;
    let null: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < cutoff)
        .map(|(k, _)| k)
        .collect();
    CMat::from_fn(cols, null.len(), |r, c| vt[(null[c], r)].conj())
}

/// Smallest singular value of `a` (counting `ncols` values, so wide matrices
/// report zero) and the matching unit right singular vector.
pub fn min_right_singular<T: Real>(a: &CMat<T>) -> (T, CVec<T>) {
    let svd = square_up(a).svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (k, s) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .fold((0, T::max_value().expect("bounded")), |acc, (k, s)| {
            if s < acc.1 {
                (k, s)
            } else {
                acc
            }
        });
    let v = CVec::from_fn(a.ncols(), |r, _| vt[(k, r)].conj());
    (s, v)
}

/// Hermitian idempotent with cached rank and range isometry.
#[derive(Debug, Clone)]
pub struct Projection<T: Real> {
    matrix: CMat<T>,
    range: CMat<T>,
}

impl<T: Real> Projection<T> {
    /// Projection onto the column span of an isometry `v` (orthonormal columns).
    pub fn from_isometry(v: CMat<T>) -> Self {
        let matrix = &v * v.adjoint();
        Self { matrix, range: v }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_isometry(CMat::zeros(n, 0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_isometry(identity(n))
    }

    /// Coordinate projection onto `span{e_i : i ∈ indices}` (0-indexed).
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let mut v = CMat::zeros(n, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            v[(i, c)] = Complex::new(T::one(), T::zero());
        }
        Self::from_isometry(v)
    }

    /// Validate a matrix as a projection and extract its range.
    pub fn from_matrix(m: &CMat<T>, tol: &Tolerance) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dim("square matrix", format!("{:?}", m.shape())));
        }
        let res = tol.residual::<T>();
        let idem = hs_norm(&(m * m - m));
        if idem > res {
            return Err(Error::Validation(format!(
                "matrix is not idempotent (‖P² − P‖ = {idem})"
            )));
        }
        let eig = hermitian_eig(m, tol)?;
        let half: T = lit(0.5);
        let mut cols = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            let near_one = (lam - T::one()).abs() <= res;
            if !near_one && lam.abs() > res {
                return Err(Error::Validation(format!(
                    "eigenvalue {lam} is not within {res} of 0 or 1"
                )));
            }
            if lam > half {
                cols.push(k);
            }
        }
        let n = m.nrows();
        let range = CMat::from_fn(n, cols.len(), |r, c| eig.vectors[(r, cols[c])]);
        Ok(Self {
            matrix: m.clone(),
            range,
        })
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.range.ncols()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The `n × rank` isometry whose columns span the range.
    pub fn isometry(&self) -> &CMat<T> {
        &self.range
    }

    pub fn range_basis(&self) -> Vec<CVec<T>> {
        self.range.column_iter().map(|c| c.into_owned()).collect()
    }

    /// `I − P`, with an orthonormal range basis for the complement.
    pub fn complement(&self) -> Self {
        let n = self.dim();
        let r = self.rank();
        if r == 0 {
            return Self::identity(n);
        }
        if r == n {
            return Self::zero(n);
        }
        // The complement's range is the null space of the range adjoint.
        let ns = null_space_with_cutoff(&self.range.adjoint(), lit(1e-6));
        debug_assert_eq!(ns.ncols(), n - r);
        Self {
            matrix: identity::<T>(n) - &self.matrix,
            range: ns,
        }
    }

    /// `U P U†` for a unitary `U`.
    pub fn conjugated(&self, u: &CMat<T>) -> Self {
        Self::from_isometry(u * &self.range)
    }

    pub fn is_nontrivial(&self) -> bool {
        self.rank() > 0 && self.rank() < self.dim()
    }

    /// Max of the Hermiticity and idempotency residuals.
    pub fn residual(&self) -> T {
        let m = &self.matrix;
        hs_norm(&(m - m.adjoint())).max(hs_norm(&(m * m - m)))
    }
}

/// Projection onto the span of `vectors`.
pub fn projector_onto<T: Real>(vectors: &[CVec<T>], tol: &Tolerance) -> Result<Projection<T>> {
    let v = orthonormal_columns(vectors, tol)?;
    if v.ncols() == 0 {
        return Err(Error::Degenerate("all vectors are numerically zero".into()));
    }
    Ok(Projection::from_isometry(v))
}

/// Maximum modulus over entries.
pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |a, z| a.max(cabs(*z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, rng_from_seed};

    type M = CMat<f64>;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn hs_inner_examples() {
        let i2: M = identity(2);
        assert!((hs_inner(&i2, &i2).unwrap().re - 2.0).abs() < 1e-15);
        let e12: M = matrix_unit(2, 0, 1);
        let e21: M = matrix_unit(2, 1, 0);
        assert!((hs_inner(&e12, &e12).unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(hs_inner(&e12, &e21).unwrap().norm(), 0.0);
        assert!(matches!(
            hs_inner(&i2, &identity::<f64>(3)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric() {
        let mut rng = rng_from_seed(5);
        let x = crate::random::ginibre::<f64, _>(3, 3, &mut rng);
        let y = crate::random::ginibre::<f64, _>(3, 3, &mut rng);
        let a = hs_inner(&x, &y).unwrap();
        let b = hs_inner(&y, &x).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn gram_schmidt_collinear() {
        let i2: M = identity(2);
        let b = gram_schmidt_hs(&[i2.clone(), i2.scale(2.0)], &tol()).unwrap();
        assert_eq!(b.len(), 1);
        assert!((&b[0] - i2.scale(1.0 / 2f64.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn gram_schmidt_diagonal_pair() {
        let mats: Vec<M> = vec![identity(2), matrix_unit(2, 0, 0)];
        // Oracle: rank of the vectorized coefficient matrix.
        let coeff = M::from_fn(4, 2, |r, c| mats[c].as_slice()[r]);
        let rank = numerical_rank(&coeff, &tol());
        let b = gram_schmidt_hs(&mats, &tol()).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(b.len(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let ip = hs_inner(&b[i], &b[j]).unwrap();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex::new(target, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let b = gram_schmidt_hs::<f64>(&[], &tol()).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn disputed_inputs_go_through_svd() {
        let a: M = identity(2);
        let mut b = a.clone();
        b[(0, 1)] = Complex::new(1e-11, 0.0);
        // Residual of b is 1e-11, inside the dispute band; SVD decides.
        let basis = gram_schmidt_hs(&[a, b], &tol()).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn numerical_rank_examples() {
        assert_eq!(numerical_rank(&identity::<f64>(3), &tol()), 3);
        assert_eq!(numerical_rank(&M::zeros(3, 3), &tol()), 0);
        let p: M = matrix_unit(3, 0, 0) + matrix_unit(3, 1, 1);
        assert_eq!(numerical_rank(&p, &tol()), 2);
    }

    #[test]
    fn hermitian_eig_examples() {
        let e = hermitian_eig(&identity::<f64>(2), &tol()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let d: M = matrix_unit(2, 1, 1);
        let e = hermitian_eig(&d, &tol()).unwrap();
        assert!((e.values[0]).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((e.vectors[(1, 1)].norm() - 1.0).abs() < 1e-14);
        let x: M = matrix_unit(2, 0, 1) + matrix_unit(2, 1, 0);
        let e = hermitian_eig(&x, &tol()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let bad: M = matrix_unit(2, 0, 1);
        assert!(matches!(hermitian_eig(&bad, &tol()), Err(Error::Contract(_))));
    }

    #[test]
    fn projector_examples() {
        let e1: CVec<f64> = basis_vector(2, 0);
        let e2: CVec<f64> = basis_vector(2, 1);
        let p = projector_onto(std::slice::from_ref(&e1), &tol()).unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.matrix() - matrix_unit::<f64>(2, 0, 0)).norm() < 1e-15);
        let p = projector_onto(&[e1.clone(), e1.clone()], &tol()).unwrap();
        assert_eq!(p.rank(), 1);
        let p = projector_onto(&[&e1 + &e2], &tol()).unwrap();
        assert_eq!(p.rank(), 1);
        for z in p.matrix().iter() {
            assert!((z - Complex::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!(matches!(
            projector_onto(&[CVec::<f64>::zeros(2)], &tol()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn projection_from_matrix_and_complement() {
        let m: M = matrix_unit(3, 0, 0) + matrix_unit(3, 2, 2);
        let p = Projection::from_matrix(&m, &tol()).unwrap();
        assert_eq!(p.rank(), 2);
        let q = p.complement();
        assert_eq!(q.rank(), 1);
        assert!((q.matrix() - matrix_unit::<f64>(3, 1, 1)).norm() < 1e-12);
        assert!(Projection::from_matrix(&matrix_unit::<f64>(2, 0, 1), &tol()).is_err());
    }

    #[test]
    fn null_space_of_wide_and_tall() {
        let a = M::from_row_slice(1, 3, &[Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        let ns = null_space(&a, &tol());
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
        let tall = vstack(&[a.clone(), a.clone(), a.clone(), a.clone(), a.clone()], 3);
        assert_eq!(null_space(&tall, &tol()).ncols(), 2);
    }

    #[test]
    fn rank_is_unitarily_invariant() {
        let mut rng = rng_from_seed(11);
        for n in 2..6 {
            for r in 0..=n {
                let u = haar_unitary::<f64, _>(n, &mut rng);
                let v = haar_unitary::<f64, _>(n, &mut rng);
                let mut d = M::zeros(n, n);
                for k in 0..r {
                    d[(k, k)] = Complex::new(1.0 + k as f64, 0.0);
                }
                let x = &u * &d * &v;
                assert_eq!(numerical_rank(&x, &tol()), r);
                assert_eq!(numerical_rank(&(&u * &x), &tol()), r);
                assert_eq!(numerical_rank(&(&x * &v), &tol()), r);
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let t = Tolerance::for_scalar::<f32>();
        let p: CMat<f32> = matrix_unit(3, 0, 0) + matrix_unit(3, 1, 1);
        assert_eq!(numerical_rank(&p, &t), 2);
        let b = gram_schmidt_hs(&[identity::<f32>(2), matrix_unit(2, 0, 0)], &t).unwrap();
        assert_eq!(b.len(), 2);
    }
}
