use serde_json::{json, Value};

use super::elliptic::{elliptic_real_model, normalize_tau};
use super::hom::{hom_module, weil_restriction_simple, Splitting};
use crate::arith::ExactComplex;
use crate::error::Result;

/// Simple factors of the formal group category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleFactor {
    Ga,
    Gm,
    STorus,
    Elliptic(ExactComplex),
}

impl SimpleFactor {
    /// Elliptic factors carry `tau` in the upper half plane.
    pub fn elliptic(tau: &ExactComplex) -> Result<Self> {
        Ok(SimpleFactor::Elliptic(normalize_tau(tau)?))
    }

    pub fn label(&self) -> String {
        match self {
            SimpleFactor::Ga => "Ga".into(),
            SimpleFactor::Gm => "Gm".into(),
            SimpleFactor::STorus => "S".into(),
            SimpleFactor::Elliptic(t) => format!("E(tau={t})"),
        }
    }
}

/// Structure of the Weil restriction of one factor to the reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilProfile {
    pub factor: String,
    /// Factors of the real group up to isogeny, or a single entry when simple.
    pub components: Vec<String>,
    pub simple: bool,
    pub endomorphisms: String,
}

impl WeilProfile {
    pub fn description(&self) -> String {
        self.components.join(" x ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factor": self.factor,
            "restriction": self.description(),
            "components": self.components,
            "simple": self.simple,
            "End": self.endomorphisms,
        })
    }
}

pub fn weil_restriction_profile(factor: &SimpleFactor) -> Result<WeilProfile> {
    let profile = |components: &[&str], simple: bool, end: &str| WeilProfile {
        factor: factor.label(),
        components: components.iter().map(|s| s.to_string()).collect(),
        simple,
        endomorphisms: end.to_string(),
    };
    Ok(match factor {
        SimpleFactor::Gm | SimpleFactor::STorus => profile(&["Gm", "S"], false, "Z x Z"),
        SimpleFactor::Ga => profile(&["Ga", "Ga"], false, "Mat2(R)"),
        SimpleFactor::Elliptic(tau) => {
            let model = elliptic_real_model(tau)?;
            if model.cm_discriminant.is_some() {
                profile(&["E'", "E'"], false, "Mat2(Z)")
            } else if model.definable {
                profile(&["E'", "E'_[i]"], false, "Z x Z")
            } else {
                debug_assert_eq!(weil_restriction_simple(tau)?, Splitting::Simple);
                let conj = model.tau.conjugate().neg();
                let hom = hom_module(&model.tau, &conj)?;
                let end = match hom.min_degree {
                    Some(k) => format!("Z[sqrt{k}]"),
                    None => "Z".to_string(),
                };
                WeilProfile {
                    factor: factor.label(),
                    components: vec![format!("N(E(tau={}))", model.tau)],
                    simple: true,
                    endomorphisms: end,
                }
            }
        }
    })
}
