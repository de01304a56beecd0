//! Exact computer algebra for connected graded Hopf algebras, maps from them
//! into truncated Laurent series, and the factorization and flow machinery
//! built on top of those maps.
//!
//! The crate is organized bottom-up:
//!
//! - [`rational`] and [`laurent`]: exact scalars — arbitrary-precision
//!   rationals and truncated Laurent series with explicit precision windows.
//! - [`linear`]: sparse linear combinations of basis elements and tensors.
//! - [`hopf`]: the instance trait, shared evaluation contexts with memoized
//!   coproducts and antipodes, and a structural axiom checker.
//! - [`trees`], [`arith`], [`graphs`]: the shipped basis families — decorated
//!   rooted trees (planar and non-planar), positive integers under divisor
//!   splitting, free symmetric algebras, and theory-constrained Feynman
//!   graphs.
//! - [`convolution`]: series-valued maps on a Hopf algebra with convolution
//!   product, inverse, exponential and logarithm.
//! - [`birkhoff`]: factorization of a map into a counterterm part and a
//!   finite part under minimal subtraction, by direct recursion and by a
//!   group-logarithm fixed point.
//! - [`rgflow`]: the flow of the finite part — grading flows, the scattering
//!   expansion, residues, scale twists, and the beta feature.
//! - [`verify`]: seeded randomized cross-check suites over all of the above.

pub mod arith;
pub mod birkhoff;
pub mod convolution;
pub mod error;
pub mod graphs;
pub mod hopf;
pub mod laurent;
pub mod linear;
pub mod rational;
pub mod rgflow;
pub mod trees;
pub mod verify;

pub use convolution::{HopfMap, MapKind};
pub use error::{Error, Result};
pub use hopf::{Context, Ctx, HopfInstance, DEFAULT_PRECISION};
pub use laurent::{LaurentSeries, Precision};
pub use linear::{Element, TensorElement};
pub use rational::Rational;
