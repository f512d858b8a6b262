//! Oriented rank-2 period lattices and their Gauss reduction.

use std::cmp::Ordering;

use rug::Float;
use serde_json::Value;

use crate::arith::format::exact_from_json;
use crate::arith::{BigComplex, ExactComplex};
use crate::error::{Error, Result};

/// Bits used when only a numeric decision (orientation, reduction) is needed for exact data.
const DECISION_BITS: u32 = 256;

/// `Z lambda1 + Z lambda2` with `Im(lambda2 / lambda1) > 0`.
#[derive(Clone, Debug)]
pub struct Lattice {
    lambda1: BigComplex,
    lambda2: BigComplex,
    exact: Option<(ExactComplex, ExactComplex)>,
    source_tau: Option<ExactComplex>,
}

/// Integer change of basis: row `i` expresses the new `i`-th vector in the old basis.
pub type BasisMatrix = [[i64; 2]; 2];

fn orientation_numeric(l1: &BigComplex, l2: &BigComplex) -> Result<Ordering> {
    // Im(l2 * conj l1) has the sign of Im(l2 / l1)
    let cross = l2.mul(&l1.conj()).im;
    let scale = Float::with_val(64, l1.abs() * l2.abs());
    let bits = l1.prec().min(l2.prec()) as i32;
    let tol = scale * Float::with_val(64, Float::i_exp(1, 16 - bits));
    if Float::with_val(64, cross.abs_ref()) <= tol {
        return Err(Error::DegenerateLattice("basis vectors are R-linearly dependent".into()));
    }
    Ok(if cross.is_sign_positive() { Ordering::Greater } else { Ordering::Less })
}

impl Lattice {
    /// `Z + tau Z`, replacing `tau` by `-tau` when `Im tau < 0`.
    pub fn from_tau(tau: &ExactComplex) -> Result<Self> {
        let one = ExactComplex::from_int(1);
        let mut l = Self::from_exact_basis(one, tau.clone())?;
        l.source_tau = l.exact.as_ref().map(|(_, t)| t.clone());
        Ok(l)
    }

    pub fn from_exact_basis(l1: ExactComplex, l2: ExactComplex) -> Result<Self> {
        let cross = l2.mul(&l1.conjugate()).im().clone();
        let l2 = match cross.signum() {
            Ordering::Equal => {
                return Err(Error::DegenerateLattice(format!("{l1} and {l2} are R-linearly dependent")))
            }
            Ordering::Greater => l2,
            Ordering::Less => l2.neg(),
        };
        Ok(Lattice {
            lambda1: l1.to_big_bits(DECISION_BITS),
            lambda2: l2.to_big_bits(DECISION_BITS),
            exact: Some((l1, l2)),
            source_tau: None,
        })
    }

    pub fn from_numeric(l1: BigComplex, l2: BigComplex) -> Result<Self> {
        let l2 = match orientation_numeric(&l1, &l2)? {
            Ordering::Less => l2.neg(),
            _ => l2,
        };
        Ok(Lattice { lambda1: l1, lambda2: l2, exact: None, source_tau: None })
    }

    pub fn from_numeric_tau(tau: BigComplex) -> Result<Self> {
        let one = BigComplex::one(tau.prec());
        Self::from_numeric(one, tau)
    }

    /// Lattice JSON: `{"tau": <exact>}` or `{"lambda1": <exact>, "lambda2": <exact>}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(t) = v.get("tau") {
            return Self::from_tau(&exact_from_json(t)?);
        }
        match (v.get("lambda1"), v.get("lambda2")) {
            (Some(a), Some(b)) => Self::from_exact_basis(exact_from_json(a)?, exact_from_json(b)?),
            _ => Err(Error::Parse("lattice needs \"tau\" or \"lambda1\"/\"lambda2\"".into())),
        }
    }

    /// Basis at `bits` of precision (recomputed from exact data when available).
    pub fn basis(&self, bits: u32) -> (BigComplex, BigComplex) {
        match &self.exact {
            Some((a, b)) => (a.to_big_bits(bits), b.to_big_bits(bits)),
            None => (self.lambda1.with_prec(bits), self.lambda2.with_prec(bits)),
        }
    }

    pub fn exact_basis(&self) -> Option<(&ExactComplex, &ExactComplex)> {
        self.exact.as_ref().map(|(a, b)| (a, b))
    }

    pub fn source_tau(&self) -> Option<&ExactComplex> {
        self.source_tau.as_ref()
    }

    /// `tau = lambda2 / lambda1`, exact when possible.
    pub fn tau_exact(&self) -> Option<ExactComplex> {
        let (a, b) = self.exact.as_ref()?;
        b.div(a).ok()
    }

    /// Applies an integer basis change to the stored bases.
    fn transform(&self, m: &BasisMatrix) -> Lattice {
        let (l1, l2) = (&self.lambda1, &self.lambda2);
        let comb = |r: &[i64; 2]| l1.mul_int(r[0]).add(&l2.mul_int(r[1]));
        let exact = self.exact.as_ref().map(|(a, b)| {
            let ec = |r: &[i64; 2]| a.scale(&r[0].into()).add(&b.scale(&r[1].into()));
            (ec(&m[0]), ec(&m[1]))
        });
        Lattice { lambda1: comb(&m[0]), lambda2: comb(&m[1]), exact, source_tau: None }
    }

    /// Gauss reduction: `|lambda1|` minimal, `|Re tau| <= 1/2`, `|tau| >= 1`, orientation kept.
    ///
    /// Also returns the unimodular matrix expressing the new basis in the old one.
    pub fn reduce_with_matrix(&self, bits: u32) -> Result<(Lattice, BasisMatrix)> {
        let (mut w1, mut w2) = self.basis(bits.max(DECISION_BITS));
        let mut m: BasisMatrix = [[1, 0], [0, 1]];
        let overflow = || Error::DegenerateLattice("reduction coefficients overflow".into());
        for _ in 0..10_000 {
            if w2.norm_sqr() < w1.norm_sqr() {
                // (w1, w2) -> (w2, -w1) keeps the orientation
                let nw1 = w2.clone();
                w2 = w1.neg();
                w1 = nw1;
                m = [m[1], [-m[0][0], -m[0][1]]];
                continue;
            }
            let t = w2.div(&w1)?;
            let k = t.re.to_integer().ok_or_else(overflow)?.to_i64().ok_or_else(overflow)?;
            if k == 0 {
                let reduced = self.transform(&m);
                let reduced = Lattice { lambda1: w1, lambda2: w2, ..reduced };
                return Ok((reduced, m));
            }
            w2 = w2.sub(&w1.mul_int(k));
            m[1] = [
                m[1][0].checked_sub(k.checked_mul(m[0][0]).ok_or_else(overflow)?).ok_or_else(overflow)?,
                m[1][1].checked_sub(k.checked_mul(m[0][1]).ok_or_else(overflow)?).ok_or_else(overflow)?,
            ];
        }
        Err(Error::DegenerateLattice("Gauss reduction did not terminate".into()))
    }

    pub fn reduce_basis(&self) -> Result<Lattice> {
        Ok(self.reduce_with_matrix(DECISION_BITS)?.0)
    }

    /// Lattice of the conjugate curve: basis `(conj l1, -conj l2)`.
    pub fn conjugate(&self) -> Lattice {
        Lattice {
            lambda1: self.lambda1.conj(),
            lambda2: self.lambda2.conj().neg(),
            exact: self.exact.as_ref().map(|(a, b)| (a.conjugate(), b.conjugate().neg())),
            source_tau: self.source_tau.as_ref().map(|t| t.conjugate().neg()),
        }
    }

    /// `c * Lattice` for a nonzero complex scalar.
    pub fn scaled(&self, c: &BigComplex) -> Result<Lattice> {
        let bits = c.prec();
        let (a, b) = self.basis(bits);
        Lattice::from_numeric(a.mul(c), b.mul(c))
    }
}

/// Conjugate lattice (see [`Lattice::conjugate`]).
pub fn conjugate_lattice(l: &Lattice) -> Lattice {
    l.conjugate()
}

/// Gauss-reduced basis of the same lattice.
pub fn reduce_basis(l: &Lattice) -> Result<Lattice> {
    l.reduce_basis()
}
