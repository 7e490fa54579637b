//! Exact finite-dimensional C*-dynamical systems.
//!
//! Algebras are finite direct sums of full matrix algebras over a
//! [`StarField`]. The exact instance is [`GaussRat`]; [`ComplexF64`] is
//! available for floating-point experiments where exact equality is not needed.

pub mod covrep;
pub mod error;
pub mod finalg;
pub mod fixtures;
pub mod linalg;
pub mod natext;
pub mod pdsys;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod transfer;
pub mod unitize;

use num_complex::Complex;
use num_rational::BigRational;

pub use error::{CompletenessCondition, Error, Result};
pub use finalg::{AlgebraElement, Classification, MultiMatrixAlgebra, ProjectionElement, StarEndomorphism, TargetBlock};
pub use natext::{NaturalExtension, TowerElement};
pub use pdsys::PartialMap;
pub use scalar::StarField;
pub use spectral::{ExtPoint, ExtendedSystem};
pub use transfer::LinearMap;

/// Gaussian rationals.
pub type GaussRat = Complex<BigRational>;
pub type ComplexF64 = Complex<f64>;

pub type Element = AlgebraElement<GaussRat>;
pub type Projection = ProjectionElement<GaussRat>;
pub type Endo = StarEndomorphism<GaussRat>;
pub type Transfer = LinearMap<GaussRat>;
pub type Tower = NaturalExtension<GaussRat>;
