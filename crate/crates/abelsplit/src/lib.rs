//! Split and simple abelian surfaces over finite fields.
//!
//! The crate classifies quartic Weil polynomials as split or simple, computes
//! the elliptic-curve strata, class numbers and relative conductors that
//! the split-surface counts are built from, and runs the census experiments
//! (c_q, d_q, relative-conductor sums, π_split for a curve over ℚ).

pub mod error;
pub mod numth;
pub mod quadorders;
pub mod gf;
pub mod fqpoly;
pub mod ellipt;
pub mod weilquartic;
pub mod genus2;
pub mod driver;

pub use error::{Error, Result};
