//! Univariate complex polynomials in ascending coefficient order: evaluation,
//! interpolation on roots of unity, Sylvester resultants and roots.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

pub(crate) type Poly = Vec<Complex64>;

pub(crate) fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Coefficients of a polynomial of degree below `points`, recovered from its
/// values on the `points`-th roots of unity.
pub(crate) fn interpolate(points: usize, f: impl Fn(Complex64) -> Complex64) -> Poly {
    let w = |k: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / points as f64);
    let values: Vec<Complex64> = (0..points).map(|k| f(w(k))).collect();
    (0..points)
        .map(|j| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * w((j * k) % points).conj())
                .sum();
            s / points as f64
        })
        .collect()
}

/// Drop leading coefficients below `rel · max|c|`; `None` when every
/// coefficient is that small.
pub(crate) fn trimmed(p: &[Complex64], rel: f64, floor: f64) -> Option<Poly> {
    let max = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max <= floor {
        return None;
    }
    let cut = rel * max;
    let deg = p.iter().rposition(|c| c.norm() > cut)?;
    Some(p[..=deg].to_vec())
}

/// Roots via eigenvalues of the companion matrix, each polished by Newton.
pub(crate) fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = p[d];
    let mut c = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        c[(i, d - 1)] = -p[i] / lead;
    }
    let (_, t) = Schur::new(c).unpack();
    let dp: Poly = (1..=d).map(|k| p[k] * k as f64).collect();
    (0..d)
        .map(|i| {
            let mut z = t[(i, i)];
            for _ in 0..4 {
                let dz = eval(&dp, z);
                if dz.norm() == 0.0 {
                    break;
                }
                let step = eval(p, z) / dz;
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

/// Sylvester resultant of `f` and `g` taken with formal degrees
/// `f.len() − 1` and `g.len() − 1`.
pub(crate) fn resultant(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(r, r + k)] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + r, r + k)] = *c;
        }
    }
    s.determinant()
}
