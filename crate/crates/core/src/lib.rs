//! Exact q-series invariants of negative-definite plumbed 3-manifolds.
//!
//! The arithmetic core is generic: [`Series`] is parameterised by a coefficient
//! ring and [`Matrix`] by its entry type. The aliases below fix the concrete
//! instances used throughout the crate.

#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod cyclotomic;
pub mod error;
pub mod exactseries;
pub mod flatconn;
pub mod homology;
pub mod linalg;
pub mod plumbing;
pub mod ring;
pub mod seifert;
pub mod splice;
pub mod voa;
pub mod zhat;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use exactseries::{Laurent, Series};
pub use linalg::Matrix;
pub use ring::Ring;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Machine-word rationals, used for exponents and truncation orders.
pub type Rat64 = num_rational::Rational64;
/// Truncated q-series with exact rational coefficients.
pub type QSeries = Series<Rational>;
/// Truncated q-series with machine-word rational coefficients.
pub type QSeries64 = Series<Rat64>;
/// Truncated q-series over a cyclotomic field.
pub type CycSeries = Series<Cyclotomic>;
/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = Matrix<num_bigint::BigInt>;
/// Rational matrices with arbitrary-precision entries.
pub type RatMatrix = Matrix<Rational>;
