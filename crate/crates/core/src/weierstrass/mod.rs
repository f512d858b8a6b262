//! Lattice invariants and Weierstrass functions at arbitrary precision.

mod engine;
mod lattice;

pub use engine::{
    invariants, legendre_residual, legendre_residual_ordered, sigma_w, wp, wp_prime, zeta_w, InvariantsReport,
    LatticeInvariants, Weierstrass,
};
pub use lattice::{conjugate_lattice, reduce_basis, BasisMatrix, Lattice};
