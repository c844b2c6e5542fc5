//! Seeded randomness: named sub-streams from a root seed, Ginibre and Haar
//! sampling.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{CMat, CVec};
use crate::scalar::{lit, Real};

pub type QRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5e_ed0f_9a11;

pub fn rng_from_seed(seed: u64) -> QRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the sub-stream `label` (with an index) derived from `root`.
pub fn substream_seed(root: u64, label: &str, index: u64) -> u64 {
    // FNV-1a over the label, mixed with root and index.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix(splitmix(root ^ h).wrapping_add(index))
}

pub fn substream(root: u64, label: &str, index: u64) -> QRng {
    rng_from_seed(substream_seed(root, label, index))
}

pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = rng.sample(StandardNormal);
    lit(x)
}

pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re * s), lit(im * s))
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat<T> {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec<T> {
    loop {
        let v = CVec::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > lit(1e-12) {
            return v.unscale(norm);
        }
    }
}

/// Haar-distributed isometry with `cols` orthonormal columns in `C^rows`.
pub fn haar_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat<T> {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let g = ginibre::<T, R>(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..cols {
        let d = r[(c, c)];
        let m = d.norm_sqr().sqrt();
        if m > T::zero() {
            let phase = d.unscale(m);
            for x in q.column_mut(c).iter_mut() {
                *x *= phase;
            }
        }
    }
    q
}

pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat<T> {
    haar_isometry(n, n, rng)
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat<T> {
    let g = ginibre::<T, R>(n, n, rng);
    (&g + g.adjoint()).scale(lit(0.5))
}

/// Uniform integer in `lo..=hi`.
pub fn uniform_usize<R: Rng + ?Sized>(lo: usize, hi: usize, rng: &mut R) -> usize {
    rng.random_range(lo..=hi)
}
