//! Exact multiquadratic arithmetic and arbitrary-precision complex floats.

pub mod bigcomplex;
pub mod exact;
pub mod field;
pub mod format;
pub mod linalg;
pub mod parse;
pub mod real;

pub use bigcomplex::{BigComplex, PrecisionContext};
pub use exact::ExactComplex;
pub use field::RealField;
pub use parse::parse_exact;
pub use real::{rank_over_q, rational_sqrt, RealAlgebraic};
