//! Exact complex numbers `re + i*im` with parts in a shared real multiquadratic field.

use std::fmt;

use rug::{Integer, Rational};

use super::bigcomplex::{BigComplex, PrecisionContext};
use super::field::RealField;
use super::linalg;
use super::real::RealAlgebraic;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactComplex {
    re: RealAlgebraic,
    im: RealAlgebraic,
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})*1i", self.im),
            (false, false) => write!(f, "{} + ({})*1i", self.re, self.im),
        }
    }
}

impl ExactComplex {
    /// Combines two real parts, moving both into the join of their fields.
    pub fn new(re: RealAlgebraic, im: RealAlgebraic) -> Self {
        if re.field() == im.field() {
            return ExactComplex { re, im };
        }
        let f = re.field().join(im.field());
        ExactComplex { re: re.embed(&f).expect("join"), im: im.embed(&f).expect("join") }
    }

    pub fn from_real(re: RealAlgebraic) -> Self {
        let im = RealAlgebraic::zero(re.field());
        ExactComplex { re, im }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_real(RealAlgebraic::from_rational(&RealField::rationals(), q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn from_gaussian(a: i64, b: i64) -> Self {
        let q = RealField::rationals();
        ExactComplex { re: RealAlgebraic::from_int(&q, a), im: RealAlgebraic::from_int(&q, b) }
    }

    pub fn i() -> Self {
        Self::from_gaussian(0, 1)
    }

    /// `e^{2 pi i/3} = -1/2 + (sqrt3/2) i`.
    pub fn rho() -> Self {
        let re = RealAlgebraic::from_rational(&RealField::rationals(), Rational::from((-1, 2)));
        let im = RealAlgebraic::sqrt_of(3).expect("sqrt3").scale(&Rational::from((1, 2)));
        Self::new(re, im)
    }

    pub fn sqrt_of(n: u64) -> Result<Self> {
        Ok(Self::from_real(RealAlgebraic::sqrt_of(n)?))
    }

    pub fn re(&self) -> &RealAlgebraic {
        &self.re
    }

    pub fn im(&self) -> &RealAlgebraic {
        &self.im
    }

    pub fn field(&self) -> &RealField {
        self.re.field()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn embed(&self, target: &RealField) -> Result<Self> {
        Ok(ExactComplex { re: self.re.embed(target)?, im: self.im.embed(target)? })
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.field() == other.field() {
            return (self.clone(), other.clone());
        }
        let f = self.field().join(other.field());
        (self.embed(&f).expect("join"), other.embed(&f).expect("join"))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        ExactComplex { re: a.re.add(&b.re), im: a.im.add(&b.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        ExactComplex { re: a.re.sub(&b.re), im: a.im.sub(&b.im) }
    }

    pub fn neg(&self) -> Self {
        ExactComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ExactComplex { re: self.re.scale(q), im: self.im.scale(q) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let re = a.re.mul(&b.re).sub(&a.im.mul(&b.im));
        let im = a.re.mul(&b.im).add(&a.im.mul(&b.re));
        ExactComplex { re, im }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// `i * self`.
    pub fn mul_i(&self) -> Self {
        ExactComplex { re: self.im.neg(), im: self.re.clone() }
    }

    /// Complex conjugation `(re, -im)`; the field is unchanged.
    pub fn conjugate(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: self.im.neg() }
    }

    /// `re^2 + im^2`.
    pub fn abs_squared(&self) -> RealAlgebraic {
        self.re.square().add(&self.im.square())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let n = self.abs_squared().inv()?;
        Ok(ExactComplex { re: self.re.mul(&n), im: self.im.neg().mul(&n) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Discriminant `b^2 - 4ac` of the primitive minimal quadratic `a x^2 + b x + c`
    /// (with `a > 0`) when `{1, tau, tau^2}` is Q-dependent.
    pub fn is_quadratic_irrational(&self) -> Result<Option<Integer>> {
        if self.is_real() {
            return Err(Error::Domain(format!("{self} is real")));
        }
        let sq = self.square();
        let (t, t2) = self.common(&sq);
        let one = ExactComplex::from_int(1).embed(t.field())?;
        // one equation per real coordinate, unknowns (c0, c1, c2)
        let cols = [&one, &t, &t2];
        let deg = t.field().degree();
        let rows: Vec<Vec<Rational>> = (0..2 * deg)
            .map(|k| {
                cols.iter()
                    .map(|z| if k < deg { z.re.coords()[k].clone() } else { z.im.coords()[k - deg].clone() })
                    .collect()
            })
            .collect();
        let ns = linalg::nullspace_rational(&rows, 3);
        let Some(v) = ns.first() else {
            return Ok(None);
        };
        let ints = linalg::integer_row(v);
        let (c, b, mut a) = (ints[0].clone(), ints[1].clone(), ints[2].clone());
        if a == 0 {
            return Ok(None);
        }
        let mut b = b;
        let mut c = c;
        if a < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Some(Integer::from(b.square_ref()) - Integer::from(4) * a * c))
    }

    /// Embedding into `BigComplex` with all square roots positive.
    pub fn to_big(&self, ctx: &PrecisionContext) -> BigComplex {
        self.to_big_bits(ctx.work_bits())
    }

    pub fn to_big_bits(&self, bits: u32) -> BigComplex {
        BigComplex::new(self.re.to_float(bits), self.im.to_float(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bigcomplex::log10_abs;
    use rug::Float;

    fn sqrt3_one_plus_i() -> ExactComplex {
        ExactComplex::sqrt_of(3).unwrap().mul(&ExactComplex::from_gaussian(1, 1))
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(ExactComplex::from_gaussian(1, 1).conjugate(), ExactComplex::from_gaussian(1, -1));
        let t = sqrt3_one_plus_i();
        let expected = ExactComplex::sqrt_of(3).unwrap().mul(&ExactComplex::from_gaussian(1, -1));
        assert_eq!(t.conjugate(), expected);
        assert_eq!(ExactComplex::from_int(5).conjugate(), ExactComplex::from_int(5));
    }

    #[test]
    fn abs_squared_examples() {
        assert_eq!(ExactComplex::from_gaussian(1, 1).abs_squared().to_rational(), Some(Rational::from(2)));
        assert_eq!(sqrt3_one_plus_i().abs_squared().to_rational(), Some(Rational::from(6)));
        let z = ExactComplex::from_rational(Rational::from((3, 5))).add(
            &ExactComplex::i().scale(&Rational::from((4, 5))),
        );
        assert_eq!(z.abs_squared().to_rational(), Some(Rational::from(1)));
    }

    #[test]
    fn quadratic_irrationals() {
        assert_eq!(ExactComplex::i().is_quadratic_irrational().unwrap(), Some(Integer::from(-4)));
        let t = ExactComplex::sqrt_of(2).unwrap().mul_i();
        assert_eq!(t.is_quadratic_irrational().unwrap(), Some(Integer::from(-8)));
        assert_eq!(sqrt3_one_plus_i().is_quadratic_irrational().unwrap(), None);
        assert_eq!(ExactComplex::rho().is_quadratic_irrational().unwrap(), Some(Integer::from(-3)));
        assert!(ExactComplex::from_int(2).is_quadratic_irrational().is_err());
    }

    #[test]
    fn quadratic_irrational_oracle_rank() {
        // oracle: exact rank of the real/imag coordinate stack of {1, tau, tau^2}
        let t = sqrt3_one_plus_i();
        let t2 = t.square();
        let f = t.field().clone();
        let stack = |z: &ExactComplex| -> Vec<Rational> {
            let z = z.embed(&f).unwrap();
            z.re().coords().iter().chain(z.im().coords()).cloned().collect()
        };
        let rows = vec![stack(&ExactComplex::from_int(1)), stack(&t), stack(&t2)];
        assert_eq!(linalg::rank_rational(&rows), 3);
    }

    #[test]
    fn inverse_and_embedding() {
        let t = sqrt3_one_plus_i();
        let one = t.mul(&t.inv().unwrap());
        assert_eq!(one, ExactComplex::from_int(1).embed(t.field()).unwrap());
        let b = ExactComplex::from_gaussian(1, 1).to_big_bits(200);
        assert_eq!(b.re, 1);
        assert_eq!(b.im, 1);
        let s2 = ExactComplex::sqrt_of(2).unwrap().to_big_bits(200);
        let expect = Float::with_val(200, 2).sqrt();
        assert!(log10_abs(&Float::with_val(200, &s2.re - &expect)) < -55.0);
        assert!(ExactComplex::from_int(0).to_big_bits(100).is_zero());
    }

    #[test]
    fn involution_and_ring_hom() {
        let a = sqrt3_one_plus_i();
        let b = ExactComplex::rho();
        assert_eq!(a.conjugate().conjugate(), a);
        assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
        let n = a.mul(&a.conjugate());
        assert!(n.is_real());
        assert_eq!(n.re(), &a.abs_squared().embed(n.field()).unwrap());
    }
}
