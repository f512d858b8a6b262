use serde_json::{json, Value};

use crate::arith::{rank_over_q, ExactComplex, RealAlgebraic};
use crate::error::{Error, Result};

/// Exponents `b_1..b_n` of `r -> (e^{b_1 r}, ..., e^{b_n r})`, moved into one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSpec {
    exponents: Vec<ExactComplex>,
}

impl TorusSpec {
    pub fn new(exponents: Vec<ExactComplex>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::DegenerateHomomorphism("no exponents".into()));
        }
        if let Some(k) = exponents.iter().position(ExactComplex::is_zero) {
            return Err(Error::DegenerateHomomorphism(format!("exponent b{} is zero", k + 1)));
        }
        let field = exponents.iter().skip(1).fold(exponents[0].field().clone(), |f, b| f.join(b.field()));
        let exponents = exponents.iter().map(|b| b.embed(&field)).collect::<Result<_>>()?;
        Ok(TorusSpec { exponents })
    }

    pub fn exponents(&self) -> &[ExactComplex] {
        &self.exponents
    }

    /// `i * b` for every exponent (the complex twin of the homomorphism).
    pub fn twin(&self) -> TorusSpec {
        TorusSpec { exponents: self.exponents.iter().map(ExactComplex::mul_i).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Descends,
    WeakOnly,
    None,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Descends => "descends",
            Verdict::WeakOnly => "weak",
            Verdict::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusVerdict {
    pub r_real: usize,
    pub r_imag: usize,
    pub s: usize,
    /// Dimension of the Zariski closure of the image: Q-rank of the exponents.
    pub n: usize,
    pub verdict: Verdict,
    /// Factor labels (`"Gm"`, `"S"`), empty when the verdict is `None`.
    pub target: Vec<&'static str>,
}

impl TorusVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "r_real": self.r_real,
            "r_imag": self.r_imag,
            "s": self.s,
            "target": self.target,
            "witness": {"dim_G": self.n, "target_up_to": "isogeny"},
        })
    }
}

/// Decides descent of a torus homomorphism by comparing `s = rank Re b + rank Im b`
/// with the Q-rank `n` of the exponents.
pub fn torus_verdict(spec: &TorusSpec) -> Result<TorusVerdict> {
    let re: Vec<RealAlgebraic> = spec.exponents.iter().map(|b| b.re().clone()).collect();
    let im: Vec<RealAlgebraic> = spec.exponents.iter().map(|b| b.im().clone()).collect();
    let r_real = rank_over_q(&re)?;
    let r_imag = rank_over_q(&im)?;
    let field = spec.exponents[0].field();
    // stacked (re, im) coordinate vectors
    let rows: Vec<Vec<rug::Rational>> = spec
        .exponents
        .iter()
        .map(|b| b.re().coords().iter().chain(b.im().coords()).cloned().collect())
        .collect();
    debug_assert!(spec.exponents.iter().all(|b| b.field() == field));
    let n = crate::arith::linalg::rank_rational(&rows);
    let s = r_real + r_imag;
    let verdict = if s == n {
        Verdict::Descends
    } else if s < 2 * n {
        Verdict::WeakOnly
    } else {
        Verdict::None
    };
    let target = if verdict == Verdict::None {
        Vec::new()
    } else {
        std::iter::repeat_n("Gm", r_real).chain(std::iter::repeat_n("S", r_imag)).collect()
    };
    Ok(TorusVerdict { r_real, r_imag, s, n, verdict, target })
}
