use std::cmp::Ordering;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::arith::{rational_sqrt, ExactComplex};
use crate::error::{Error, Result};

/// Why a curve `E_tau` has a model over the reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    RationalRealPart(Rational),
    /// `|d1 tau + d2| = value`.
    NormWitness { d1: Integer, d2: Integer, value: Rational },
    CM(Integer),
    NoWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticVerdict {
    pub definable: bool,
    pub witness: Witness,
    /// Discriminant of the minimal quadratic when `tau` is a quadratic irrationality.
    pub cm_discriminant: Option<Integer>,
    /// The normalized `tau` (upper half plane) that was examined.
    pub tau: ExactComplex,
}

impl EllipticVerdict {
    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            Witness::RationalRealPart(q) => json!({"kind": "rational_real_part", "re": q.to_string()}),
            Witness::NormWitness { d1, d2, value } => {
                json!({"kind": "norm", "d1": d1.to_string(), "d2": d2.to_string(), "abs": value.to_string()})
            }
            Witness::CM(d) => json!({"kind": "cm", "discriminant": d.to_string()}),
            Witness::NoWitness => json!({"kind": "none"}),
        };
        json!({
            "tau": self.tau.to_string(),
            "definable": self.definable,
            "witness": witness,
            "cm_discriminant": self.cm_discriminant.as_ref().map(|d| d.to_string()),
        })
    }
}

/// `tau` moved into the upper half plane (`-tau` spans the same lattice with `1`).
pub fn normalize_tau(tau: &ExactComplex) -> Result<ExactComplex> {
    match tau.im().signum() {
        Ordering::Equal => Err(Error::DegenerateLattice(format!("tau = {tau} is real, not a lattice"))),
        Ordering::Greater => Ok(tau.clone()),
        Ordering::Less => Ok(tau.neg()),
    }
}

/// Exact search for integers `d1 != 0, d2` with `|d1 tau + d2|` rational.
///
/// `|d1 tau + d2|^2 / d1^2 = A + 2 B r + r^2` with `A = |tau|^2`, `B = Re tau`,
/// `r = d2 / d1`. Each irrational basis coordinate gives a linear condition
/// `A_k + 2 B_k r = 0`; the unit coordinate must then be a rational square.
pub fn norm_witness(tau: &ExactComplex) -> Option<(Integer, Integer, Rational)> {
    let b = tau.re().clone();
    let a = tau.abs_squared().embed(b.field()).ok()?;
    let (ac, bc) = (a.coords(), b.coords());
    let mut ratio: Option<Rational> = None;
    for k in 1..ac.len() {
        match (bc[k] == 0, ac[k] == 0) {
            (true, true) => continue,
            (true, false) => return None,
            (false, _) => {
                let r = -(ac[k].clone() / (bc[k].clone() * 2u32));
                match &ratio {
                    Some(prev) if *prev != r => return None,
                    _ => ratio = Some(r),
                }
            }
        }
    }
    let (a0, b0) = (&ac[0], &bc[0]);
    let r = match ratio {
        Some(r) => r,
        None => {
            // A, B rational: (x^2 + Y) = s^2 with x = B + r, Y = A - B^2 = (Im tau)^2,
            // solved by s - x = 1, s + x = Y.
            let y = a0 - Rational::from(b0 * b0);
            let x = (&y - Rational::from(1)) / 2u32;
            x - b0
        }
    };
    let value_sq = a0 + Rational::from(b0 * &r) * 2u32 + Rational::from(&r * &r);
    let root = rational_sqrt(&value_sq)?;
    let (d2, d1) = r.into_numer_denom();
    let value = root * Rational::from(&d1);
    Some((d1, d2, value))
}

/// Whether `E_tau` admits a model over the reals, with a witness.
pub fn elliptic_real_model(tau: &ExactComplex) -> Result<EllipticVerdict> {
    let tau = normalize_tau(tau)?;
    let cm = tau.is_quadratic_irrational()?;
    let witness = if let Some(q) = tau.re().to_rational() {
        Witness::RationalRealPart(q)
    } else if let Some((d1, d2, value)) = norm_witness(&tau) {
        Witness::NormWitness { d1, d2, value }
    } else if let Some(d) = &cm {
        Witness::CM(d.clone())
    } else {
        Witness::NoWitness
    };
    Ok(EllipticVerdict { definable: witness != Witness::NoWitness, witness, cm_discriminant: cm, tau })
}
