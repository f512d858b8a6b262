use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Integer, Rational};

use super::field::RealField;
use super::linalg;
use crate::error::{Error, Result};

/// Element of a [`RealField`], stored as rational coordinates over the basis `e_S`.
#[derive(Clone, PartialEq, Eq)]
pub struct RealAlgebraic {
    field: RealField,
    coords: Vec<Rational>,
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(s, c)| {
                if s == 0 {
                    c.to_string()
                } else if *c == 1 {
                    self.field.basis_label(s)
                } else {
                    format!("{}*{}", c, self.field.basis_label(s))
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl RealAlgebraic {
    pub fn new(field: RealField, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Domain(format!(
                "{} coordinates for a field of degree {}",
                coords.len(),
                field.degree()
            )));
        }
        Ok(RealAlgebraic { field, coords })
    }

    pub fn zero(field: &RealField) -> Self {
        RealAlgebraic { field: field.clone(), coords: vec![Rational::new(); field.degree()] }
    }

    pub fn from_rational(field: &RealField, q: Rational) -> Self {
        let mut x = Self::zero(field);
        x.coords[0] = q;
        x
    }

    pub fn from_int(field: &RealField, n: i64) -> Self {
        Self::from_rational(field, Rational::from(n))
    }

    /// `sqrt(n)` for a positive integer, in the smallest field containing it.
    pub fn sqrt_of(n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero(&RealField::rationals()));
        }
        let (kernel, root) = super::field::squarefree_decomposition(n);
        if kernel == 1 {
            return Ok(Self::from_int(&RealField::rationals(), root as i64));
        }
        let field = RealField::new(&[kernel])?;
        let mut x = Self::zero(&field);
        x.coords[1] = Rational::from(root);
        Ok(x)
    }

    pub fn field(&self) -> &RealField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    /// True iff every non-unit coordinate vanishes.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| *c == 0)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// Rewrites `self` in a field containing its own.
    pub fn embed(&self, target: &RealField) -> Result<Self> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let map = self.field.embedding_into(target)?;
        let mut out = Self::zero(target);
        for (c, (t, scale)) in self.coords.iter().zip(map) {
            if *c != 0 {
                out.coords[t] += Rational::from(c * &scale);
            }
        }
        Ok(out)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.field == other.field {
            return (self.clone(), other.clone());
        }
        let f = self.field.join(&other.field);
        (self.embed(&f).expect("join contains"), other.embed(&f).expect("join contains"))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RealAlgebraic { field: self.field.clone(), coords: self.coords.iter().map(|c| Rational::from(-c)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        RealAlgebraic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| Rational::from(c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut out = Self::zero(&a.field);
        for (s, x) in a.coords.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (t, y) in b.coords.iter().enumerate().filter(|(_, y)| **y != 0) {
                let (u, k) = a.field.basis_product(s, t);
                out.coords[u] += Rational::from(x * y) * k;
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiplicative inverse, by solving `M_self * y = 1` with the multiplication matrix.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let n = self.field.degree();
        // column t of M is self * e_t
        let mut m = vec![vec![Rational::new(); n]; n];
        for t in 0..n {
            let mut e = Self::zero(&self.field);
            e.coords[t] = Rational::from(1);
            let col = self.mul(&e);
            for (row, c) in col.coords.into_iter().enumerate() {
                m[row][t] = c;
            }
        }
        let mut rhs = vec![Rational::new(); n];
        rhs[0] = Rational::from(1);
        let y = linalg::solve_rational(&m, &rhs).ok_or_else(|| Error::Domain("singular element".into()))?;
        Ok(RealAlgebraic { field: self.field.clone(), coords: y })
    }

    /// Nearest-rounded value at `bits` of precision, all square roots positive.
    pub fn to_float(&self, bits: u32) -> Float {
        let work = bits + 16;
        let mut acc = Float::with_val(work, 0);
        for (s, c) in self.coords.iter().enumerate().filter(|(_, c)| **c != 0) {
            let root = Float::with_val(work, self.field.radicand(s)).sqrt();
            acc += Float::with_val(work, c) * root;
        }
        Float::with_val(bits, &acc)
    }

    /// Exact sign, decided by numeric evaluation at increasing precision.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.to_rational() {
            return q.cmp0();
        }
        let mut bits = 64u32;
        loop {
            let mut acc = Float::with_val(bits, 0);
            let mut mag = Float::with_val(bits, 0);
            for (s, c) in self.coords.iter().enumerate().filter(|(_, c)| **c != 0) {
                let t = Float::with_val(bits, c) * Float::with_val(bits, self.field.radicand(s)).sqrt();
                mag += t.clone().abs();
                acc += t;
            }
            // each term carries at most a few ulps of relative error
            let err = mag * Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
            if acc.clone().abs() > err {
                return if acc > 0 { Ordering::Greater } else { Ordering::Less };
            }
            bits *= 2;
        }
    }

    /// `Some(r)` with `r >= 0` and `r^2 = self` when `self` is the square of a rational.
    pub fn rational_sqrt(&self) -> Option<Rational> {
        let q = self.to_rational()?;
        rational_sqrt(&q)
    }
}

/// Square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.cmp0() == Ordering::Less {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((Integer::from(n.sqrt_ref()), Integer::from(d.sqrt_ref()))))
}

/// Dimension over Q of the span of `values`, by exact elimination on coordinates.
pub fn rank_over_q(values: &[RealAlgebraic]) -> Result<usize> {
    let Some(first) = values.first() else {
        return Ok(0);
    };
    if let Some(bad) = values.iter().find(|v| v.field != first.field) {
        return Err(Error::FieldMismatch(first.field.to_string(), bad.field.to_string()));
    }
    let rows: Vec<Vec<Rational>> = values.iter().map(|v| v.coords.clone()).collect();
    Ok(linalg::rank_rational(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: u64) -> RealAlgebraic {
        RealAlgebraic::sqrt_of(n).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rank_examples() {
        let f = RealField::new(&[2]).unwrap();
        let one = RealAlgebraic::from_int(&f, 1);
        let s2 = sqrt(2);
        assert_eq!(rank_over_q(&[one.clone(), s2.clone()]).unwrap(), 2);
        let ints: Vec<_> = [1, 2, 3].iter().map(|&n| RealAlgebraic::from_int(&f, n)).collect();
        assert_eq!(rank_over_q(&ints).unwrap(), 1);
        assert_eq!(rank_over_q(&[one.clone(), s2.clone(), one.add(&s2)]).unwrap(), 2);
    }

    /// Exhaustive search for integer relations with coefficients in [-10, 10].
    #[test]
    fn rank_matches_relation_search() {
        let f = RealField::new(&[2]).unwrap();
        let vals = [RealAlgebraic::from_int(&f, 1), sqrt(2), RealAlgebraic::from_int(&f, 1).add(&sqrt(2))];
        let combo = |c: &[i64]| {
            vals.iter()
                .zip(c)
                .fold(RealAlgebraic::zero(&f), |acc, (v, &k)| acc.add(&v.scale(&Rational::from(k))))
        };
        let mut pair_relation = false;
        let mut triple_relation = false;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if (a, b) != (0, 0) && combo(&[a, b, 0]).is_zero() {
                    pair_relation = true;
                }
                for c in -10i64..=10 {
                    if (a, b, c) != (0, 0, 0) && combo(&[a, b, c]).is_zero() {
                        triple_relation = true;
                    }
                }
            }
        }
        // {1, sqrt2} independent, the triple dependent: rank 2
        assert!(!pair_relation && triple_relation);
        assert_eq!(rank_over_q(&vals).unwrap(), 2);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        assert!(matches!(rank_over_q(&[sqrt(2), sqrt(3)]), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn rationality() {
        let f = RealField::new(&[3]).unwrap();
        assert!(RealAlgebraic::from_rational(&f, q(3, 5)).is_rational());
        assert!(!sqrt(3).is_rational());
        let two = RealAlgebraic::new(f, vec![q(2, 1), q(0, 1)]).unwrap();
        assert!(two.is_rational());
    }

    #[test]
    fn rational_squares() {
        let f = RealField::rationals();
        assert_eq!(RealAlgebraic::from_int(&f, 4).rational_sqrt(), Some(q(2, 1)));
        assert_eq!(RealAlgebraic::from_int(&f, 2).rational_sqrt(), None);
        assert_eq!(RealAlgebraic::from_rational(&f, q(9, 16)).rational_sqrt(), Some(q(3, 4)));
        assert_eq!(sqrt(2).square().rational_sqrt(), None);
        assert_eq!(sqrt(8).square().rational_sqrt(), None);
    }

    #[test]
    fn inverse_and_sign() {
        let x = sqrt(2).add(&sqrt(3)).sub(&RealAlgebraic::from_int(&RealField::rationals(), 3));
        let y = x.inv().unwrap();
        let one = x.mul(&y);
        assert_eq!(one.to_rational(), Some(q(1, 1)));
        // sqrt2 + sqrt3 - 3 = 0.146...
        assert_eq!(x.signum(), Ordering::Greater);
        assert_eq!(x.neg().signum(), Ordering::Less);
    }

    #[test]
    fn to_float_digits() {
        let v = sqrt(2).to_float(200);
        assert!(v.to_string_radix(10, Some(40)).starts_with("1.4142135623730950488016887242096980785"));
    }
}
