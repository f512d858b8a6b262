//! Descent and weak descent to the reals: torus verdicts, real models of
//! elliptic curves, isogenies to the conjugate curve, complex twins and
//! Weil-restriction profiles.

mod elliptic;
mod hom;
mod profile;
mod torus;
mod twin;

pub use elliptic::{elliptic_real_model, norm_witness, normalize_tau, EllipticVerdict, Witness};
pub use hom::{
    definability_consistent, hom_module, hom_module_with_bound, weil_restriction_simple, IsogenyMatrix,
    IsogenyModule, Splitting, DEFAULT_DEGREE_BOUND,
};
pub use profile::{weil_restriction_profile, SimpleFactor, WeilProfile};
pub use torus::{torus_verdict, TorusSpec, TorusVerdict, Verdict};
pub use twin::complex_twin;
pub(crate) use twin::coordinates;
