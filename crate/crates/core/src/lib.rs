//! Exact formal-group-law calculus and cellular models of algebraic bordism.
//!
//! The layers build on each other bottom-up:
//!
//! * [`exactalg`]: exact integers/rationals, sparse graded polynomials,
//!   Smith normal form and lattice reduction.
//! * [`series`]: truncated multivariate power series over a coefficient ring.
//! * [`fgl`]: formal group laws, inverse, difference law, n-series,
//!   multi-sums, logarithm/exponential and identity checks.
//! * [`lazard`]: the Lazard ring presented degreewise and the universal law.
//! * [`bmodel`]: free-module models of projective spaces, products and split
//!   projective bundles with first Chern class operators.
//! * [`snc`]: classes of strict normal crossing divisors.

pub mod bmodel;
pub mod error;
pub mod exactalg;
pub mod fgl;
pub mod lazard;
pub mod selftest;
pub mod series;
pub mod snc;

pub use error::{Error, Result};
