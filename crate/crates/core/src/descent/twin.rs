use rug::Rational;

use crate::arith::linalg::{integer_kernel, integer_row, nullspace_rational};
use crate::arith::{ExactComplex, RealAlgebraic};
use crate::error::{Error, Result};
use crate::weierstrass::Lattice;

fn lattice_error(msg: impl Into<String>) -> Error {
    Error::DegenerateLattice(msg.into())
}

/// Primitive integer `(m, n)` with `m x + n y = 0` for real-field elements, if unique up to sign.
fn real_relation(x: &RealAlgebraic, y: &RealAlgebraic) -> Option<(i64, i64)> {
    let f = x.field().join(y.field());
    let (x, y) = (x.embed(&f).ok()?, y.embed(&f).ok()?);
    let eqs: Vec<Vec<rug::Integer>> = (0..f.degree())
        .map(|k| integer_row(&[x.coords()[k].clone(), y.coords()[k].clone()]))
        .collect();
    let ker = integer_kernel(&eqs, 2);
    match ker.as_slice() {
        [v] => Some((v[0].to_i64()?, v[1].to_i64()?)),
        _ => None,
    }
}

/// Rational `(p, q)` with `target = p l1 + q l2`.
pub(crate) fn coordinates(target: &ExactComplex, l1: &ExactComplex, l2: &ExactComplex) -> Option<(Rational, Rational)> {
    let f = target.field().join(l1.field()).join(l2.field());
    let cols = [l1.embed(&f).ok()?, l2.embed(&f).ok()?, target.neg().embed(&f).ok()?];
    let deg = f.degree();
    let rows: Vec<Vec<Rational>> = (0..2 * deg)
        .map(|k| {
            cols.iter()
                .map(|z| if k < deg { z.re().coords()[k].clone() } else { z.im().coords()[k - deg].clone() })
                .collect()
        })
        .collect();
    let ns = nullspace_rational(&rows, 3);
    let v = ns.into_iter().find(|v| v[2] != 0)?;
    let s = v[2].clone();
    Some((Rational::from(&v[0] / &s), Rational::from(&v[1] / &s)))
}

/// The lattice `i L1 + i L2` built from `L1 = L ∩ R` and `L2 = L ∩ iR`.
pub fn complex_twin(l: &Lattice) -> Result<Lattice> {
    let (l1, l2) = l.exact_basis().ok_or_else(|| lattice_error("complex twin needs an exact basis"))?;
    for v in [l1, l2] {
        let c = coordinates(&v.conjugate(), l1, l2).ok_or_else(|| lattice_error("lattice is not conjugation-stable"))?;
        if *c.0.denom() != 1 || *c.1.denom() != 1 {
            return Err(lattice_error("lattice is not conjugation-stable"));
        }
    }
    // generator of L ∩ R: Im(m l1 + n l2) = 0; of L ∩ iR: Re(...) = 0
    let (m1, n1) = real_relation(l1.im(), l2.im()).ok_or_else(|| lattice_error("L ∩ R is not of rank 1"))?;
    let (m2, n2) = real_relation(l1.re(), l2.re()).ok_or_else(|| lattice_error("L ∩ iR is not of rank 1"))?;
    let real = l1.scale(&m1.into()).add(&l2.scale(&n1.into()));
    let imag = l1.scale(&m2.into()).add(&l2.scale(&n2.into()));
    Lattice::from_exact_basis(real.mul_i(), imag.mul_i())
}
