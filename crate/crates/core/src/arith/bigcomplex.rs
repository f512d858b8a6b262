//! Arbitrary-precision complex floats and the precision context.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision and truncation target for every numeric evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrecisionContext {
    pub decimal_digits: u32,
    pub guard_digits: u32,
    /// Series truncations must meet an absolute error of `10^-tail_digits`.
    pub tail_digits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < 15 {
            return Err(Error::Domain(format!("precision {decimal_digits} < 15 digits")));
        }
        if guard_digits < 10 {
            return Err(Error::Domain(format!("guard digits {guard_digits} < 10")));
        }
        Ok(PrecisionContext { decimal_digits, guard_digits, tail_digits: decimal_digits })
    }

    /// Binary precision `ceil((digits + guard) * log2 10)`.
    pub fn bits(&self) -> u32 {
        (f64::from(self.decimal_digits + self.guard_digits) * LOG2_10).ceil() as u32
    }

    /// Internal working precision with a few extra bits for accumulated rounding.
    pub fn work_bits(&self) -> u32 {
        self.bits() + 32
    }

    /// Same guard, twice the digits.
    pub fn doubled(&self) -> Self {
        let d = self.decimal_digits * 2;
        PrecisionContext { decimal_digits: d, guard_digits: self.guard_digits, tail_digits: d }
    }

    /// `10^-tail_digits` at working precision.
    pub fn tail_target(&self) -> Float {
        pow10(-i64::from(self.tail_digits), self.work_bits())
    }

    /// Absolute acceptance threshold `10^-(digits - guard)` used by relation checks.
    pub fn threshold(&self) -> Float {
        pow10(-(i64::from(self.decimal_digits) - i64::from(self.guard_digits)), self.work_bits())
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits (+{} guard, {} bits)", self.decimal_digits, self.guard_digits, self.bits())
    }
}

/// `10^e` as a float.
pub fn pow10(e: i64, bits: u32) -> Float {
    Float::with_val(bits, 10).pow(e as i32)
}

/// `pi` at the given precision.
pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// Decimal exponent estimate `log10 |x|`; `-inf` for zero.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(64, x.abs_ref()).log10().to_f64()
}

/// Complex number as a pair of MPFR floats.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((f64::from(self.prec()) / LOG2_10).floor() as usize).max(1);
        write!(f, "{}", self.to_string_digits(digits))
    }
}

fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        BigComplex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Self::from_f64(1.0, 0.0, bits)
    }

    pub fn i(bits: u32) -> Self {
        Self::from_f64(0.0, 1.0, bits)
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        BigComplex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        BigComplex { re: Float::with_val(bits, n), im: Float::new(bits) }
    }

    /// Parses `"a"` or `"a+bi"`-free forms: a plain decimal real number.
    pub fn parse_real(s: &str, bits: u32) -> Result<Self> {
        let v = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Self::from_real(Float::with_val(bits, v)))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        BigComplex { re: Float::with_val(bits, &self.re), im: Float::with_val(bits, &self.im) }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Error unless both parts are finite.
    pub fn check(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what.to_string()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex { re, im }
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * n), im: Float::with_val(p, &self.im * n) }
    }

    pub fn div_int(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re / n), im: Float::with_val(p, &self.im / n) }
    }

    /// `i * self`.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let p = self.prec();
        Ok(BigComplex { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &r * &c), im: r * s }
    }

    /// `(sin z, cos z)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        let sin = BigComplex { re: Float::with_val(p, &s * &ch), im: Float::with_val(p, &c * &sh) };
        let cos = BigComplex { re: c * ch, im: -(s * sh) };
        (sin, cos)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log of zero".into()));
        }
        let p = self.prec();
        Ok(BigComplex { re: Float::with_val(p, self.abs().ln_ref()), im: self.arg() })
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        let re = Float::with_val(p, Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let mut im = Float::with_val(p, Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        BigComplex { re, im }
    }

    /// Nearest integer parts.
    pub fn round_parts(&self) -> (Integer, Integer) {
        let r = self.re.to_integer().unwrap_or_default();
        let i = self.im.to_integer().unwrap_or_default();
        (r, i)
    }

    /// `|self - other|`.
    pub fn dist(&self, o: &Self) -> Float {
        self.sub(o).abs()
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        format!("{} + {}i", fmt_float(&self.re, digits), fmt_float(&self.im, digits))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rules() {
        assert!(PrecisionContext::new(14).is_err());
        assert!(PrecisionContext::with_guard(50, 9).is_err());
        let c = PrecisionContext::new(50).unwrap();
        assert_eq!(c.bits(), 200);
        assert_eq!(c.doubled().decimal_digits, 100);
    }

    #[test]
    fn elementary_identities() {
        let bits = 300;
        let z = BigComplex::from_f64(0.3, -1.7, bits);
        let (s, c) = z.sin_cos();
        let one = s.square().add(&c.square());
        assert!(log10_abs(&one.dist(&BigComplex::one(bits))) < -80.0);
        let back = z.exp().ln().unwrap();
        assert!(log10_abs(&back.dist(&z)) < -80.0);
        let r = z.sqrt();
        assert!(log10_abs(&r.square().dist(&z)) < -80.0);
        let q = z.div(&z).unwrap();
        assert!(log10_abs(&q.dist(&BigComplex::one(bits))) < -80.0);
    }

    #[test]
    fn euler() {
        let bits = 200;
        let ipi = BigComplex::new(Float::new(bits), pi(bits));
        let e = ipi.exp();
        assert!(log10_abs(&e.dist(&BigComplex::from_int(-1, bits))) < -55.0);
    }
}
