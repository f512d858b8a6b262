//! Exact and high-precision toolkit for descent of commutative group varieties
//! (tori, elliptic curves and their linear extensions) to real subfields.

// Matrix code indexes several arrays by the same loop variable.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod descent;
pub mod error;
pub mod extensions;
pub mod groupcat;
pub mod relations;
pub mod weierstrass;

pub use arith::{BigComplex, ExactComplex, PrecisionContext, RealAlgebraic, RealField};
pub use error::{Error, Result};
