//! Real scalar abstraction. Every routine in the crate is generic over the
//! real field `T` underlying the complex entries `Complex<T>`.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point real scalar: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Default relative singular-value cutoff for this precision.
    const DEFAULT_RANK_REL: f64;
    /// Default residual bound for membership and orthonormality checks.
    const DEFAULT_RESIDUAL_ABS: f64;
}

impl Real for f64 {
    const DEFAULT_RANK_REL: f64 = 1e-9;
    const DEFAULT_RESIDUAL_ABS: f64 = 1e-8;
}

impl Real for f32 {
    const DEFAULT_RANK_REL: f64 = 1e-4;
    const DEFAULT_RESIDUAL_ABS: f64 = 1e-3;
}

#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}
