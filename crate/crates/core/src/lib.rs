//! Quantum graphs (operator systems in `M_n`): subspace arithmetic,
//! connectedness and k-connectedness with certificates, classical-graph
//! bridges, and completely positive maps as orthogonal representations.
//!
//! All numerics are generic over the real scalar `T: Real` (`f32` or `f64`);
//! the aliases at the crate root fix `T = f64`.

pub mod classical;
pub mod connect;
pub mod cpmaps;
pub mod error;
pub mod instances;
pub mod matcore;
pub mod opspace;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use matcore::{CMat, CVec, Tolerance};
pub use scalar::Real;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = CMat<f64>;
pub type ComplexVector = CVec<f64>;
pub type Projection = matcore::Projection<f64>;
pub type OperatorSubspace = opspace::OperatorSubspace<f64>;
pub type QuantumGraph = opspace::QuantumGraph<f64>;
pub type CompressedSubspace = opspace::CompressedSubspace<f64>;
pub type ConnectivityCertificate = connect::ConnectivityCertificate<f64>;
pub type SeparatorReport = connect::SeparatorReport<f64>;
pub type ConnectivityBounds = connect::ConnectivityBounds<f64>;
pub type OrthonormalBasis = classical::OrthonormalBasisCn<f64>;
pub type ClassicalOrthRep = classical::ClassicalOrthRep<f64>;
pub type KrausMap = cpmaps::KrausMap<f64>;
pub type OrthRepReport = cpmaps::OrthRepReport<f64>;

pub type ComplexMatrix32 = CMat<f32>;
pub type QuantumGraph32 = opspace::QuantumGraph<f32>;
pub type KrausMap32 = cpmaps::KrausMap<f32>;

