//! Exact and numerical workbench for symplectic tensor lattices, isogeny
//! matrices, Siegel-domain periods, theta series, p-adic local integrals
//! and the level-star divisibility check.

pub mod acceptance;
pub mod arith;
pub mod error;
pub mod isogeny;
pub mod lattice;
pub mod linalg;
pub mod padic;
pub mod scalar;
pub mod siegel;
pub mod star;
pub mod theta;

pub use error::{Error, Result};
pub use lattice::{tensor_symplectic, DiscriminantGroup, GramLattice, SymplecticForm};
pub use scalar::Real;

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;

pub type SiegelPairF64 = siegel::SiegelPair<f64>;
pub type SiegelPairF32 = siegel::SiegelPair<f32>;
