//! Integer relations among high-precision complex numbers via exact LLL.

mod lll;

use std::fmt;
use std::sync::Arc;

use rug::{Float, Integer};
use serde_json::{json, Value};

pub use lll::lll_reduce;

use crate::arith::bigcomplex::{log10_abs, pi};
use crate::arith::{BigComplex, PrecisionContext};
use crate::error::{Error, Result};
use crate::weierstrass::{Lattice, Weierstrass};

type ValueFn = dyn Fn(&PrecisionContext) -> Result<Vec<BigComplex>> + Send + Sync;

/// Numbers to probe: either fixed values, or a recipe that can be re-evaluated at higher precision.
#[derive(Clone)]
pub enum ValueSource {
    Fixed(Vec<BigComplex>),
    Computed(Arc<ValueFn>),
}

impl fmt::Debug for ValueSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSource::Fixed(v) => write!(f, "Fixed({} values)", v.len()),
            ValueSource::Computed(_) => write!(f, "Computed"),
        }
    }
}

impl ValueSource {
    pub fn computed(f: impl Fn(&PrecisionContext) -> Result<Vec<BigComplex>> + Send + Sync + 'static) -> Self {
        ValueSource::Computed(Arc::new(f))
    }

    pub fn values(&self, ctx: &PrecisionContext) -> Result<Vec<BigComplex>> {
        match self {
            ValueSource::Fixed(v) => Ok(v.clone()),
            ValueSource::Computed(f) => f(ctx),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationQuery {
    pub values: ValueSource,
    pub max_coeff: u64,
    pub ctx: PrecisionContext,
}

impl RelationQuery {
    pub fn new(values: ValueSource, max_coeff: u64, ctx: PrecisionContext) -> Self {
        RelationQuery { values, max_coeff, ctx }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationResult {
    Found { coefficients: Vec<Integer>, residual: Float },
    NoneUpTo { max_coeff: u64, digits: u32 },
}

impl RelationResult {
    pub fn coefficients(&self) -> Option<&[Integer]> {
        match self {
            RelationResult::Found { coefficients, .. } => Some(coefficients),
            RelationResult::NoneUpTo { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RelationResult::Found { coefficients, residual } => json!({
                "status": "Found",
                "coefficients": coefficients.iter().map(Integer::to_string).collect::<Vec<_>>(),
                "residual": format!("{:.3e}", residual.to_f64()),
            }),
            RelationResult::NoneUpTo { max_coeff, digits } => json!({
                "status": "NoneUpTo",
                "max_coeff": max_coeff,
                "digits": digits,
            }),
        }
    }
}

/// `|sum c_i x_i|`.
pub fn verify_relation(values: &[BigComplex], coefficients: &[Integer], ctx: &PrecisionContext) -> Result<Float> {
    if values.len() != coefficients.len() {
        return Err(Error::Domain(format!("{} values but {} coefficients", values.len(), coefficients.len())));
    }
    let bits = ctx.work_bits();
    let mut acc = BigComplex::zero(bits);
    for (x, c) in values.iter().zip(coefficients) {
        let c = BigComplex::from_real(Float::with_val(bits, c));
        acc = acc.add(&x.with_prec(bits).mul(&c));
    }
    Ok(acc.abs())
}

/// Digits needed before a relation with coefficients up to `h` among `n` numbers is meaningful.
pub fn required_digits(n: usize, h: u64) -> u32 {
    (n as f64 * ((2 * h + 1) as f64).log10()).ceil() as u32 + 5
}

fn scale_of(values: &[BigComplex]) -> Float {
    let mut s = Float::with_val(values[0].prec(), 1);
    for v in values {
        let a = v.abs();
        if a > s {
            s = a;
        }
    }
    s
}

/// Primitive, with the first nonzero entry positive.
fn normalize(c: &[Integer]) -> Vec<Integer> {
    let g = c.iter().fold(Integer::new(), |g, x| g.gcd(x));
    let mut out: Vec<Integer> = c.iter().map(|x| Integer::from(x / &g)).collect();
    if out.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        out.iter_mut().for_each(|x| *x = Integer::from(-&*x));
    }
    out
}

fn check_query(q: &RelationQuery, values: &[BigComplex]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::Domain("need at least two values".into()));
    }
    if q.max_coeff < 1 {
        return Err(Error::Domain("max coefficient must be at least 1".into()));
    }
    let avail = q.ctx.decimal_digits - q.ctx.guard_digits;
    let need = required_digits(values.len(), q.max_coeff);
    if avail < need {
        return Err(Error::InsufficientPrecision(format!(
            "{} values with |c| <= {} need {need} digits beyond the guard, have {avail}",
            values.len(),
            q.max_coeff
        )));
    }
    if let Some(v) = values.iter().find(|v| v.prec() < q.ctx.bits()) {
        return Err(Error::InsufficientPrecision(format!("value carries {} bits, context needs {}", v.prec(), q.ctx.bits())));
    }
    for v in values {
        v.clone().check("relation input")?;
    }
    Ok(())
}

/// Short vectors of `[I | round(2^m Re x) | round(2^m Im x)]` that pass the residual test.
fn candidates(q: &RelationQuery, values: &[BigComplex]) -> Result<Vec<(Vec<Integer>, Float)>> {
    let n = values.len();
    let ctx = &q.ctx;
    let m = (f64::from(ctx.decimal_digits - ctx.guard_digits) * std::f64::consts::LOG2_10).floor() as u32;
    let bits = ctx.work_bits().max(m + 64);
    let mut two_m = Float::with_val(bits, 1);
    two_m <<= m;
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for (i, x) in values.iter().enumerate() {
        let (re, im) = x.with_prec(bits).mul_real(&two_m).round_parts();
        let mut row = vec![Integer::new(); n + 2];
        row[i] = Integer::from(1);
        row[n] = re;
        row[n + 1] = im;
        rows.push(row);
    }
    lll_reduce(&mut rows, 99, 100)?;
    let threshold = Float::with_val(bits, ctx.threshold() * scale_of(values));
    let mut out = Vec::new();
    for row in rows {
        let c = &row[..n];
        if c.iter().all(|x| *x == 0) || c.iter().any(|x| x.clone().abs() > q.max_coeff) {
            continue;
        }
        let c = normalize(c);
        let r = verify_relation(values, &c, ctx)?;
        if r < threshold {
            out.push((c, r));
        }
    }
    Ok(out)
}

/// Re-evaluation at doubled precision must shrink the residual by `10^(digits/2)` below the threshold.
fn confirmed(q: &RelationQuery, c: &[Integer]) -> Result<bool> {
    match &q.values {
        ValueSource::Fixed(_) => Ok(true),
        ValueSource::Computed(f) => {
            let hi = q.ctx.doubled();
            let vals = f(&hi)?;
            let r = verify_relation(&vals, c, &hi)?;
            let exp = -(i64::from(q.ctx.decimal_digits) - i64::from(q.ctx.guard_digits)) - i64::from(q.ctx.decimal_digits / 2);
            let bound = crate::arith::bigcomplex::pow10(exp, hi.work_bits()) * scale_of(&vals);
            Ok(r < bound)
        }
    }
}

/// Every independent relation found in the reduced basis, each confirmed.
pub fn find_integer_relations(q: &RelationQuery) -> Result<Vec<(Vec<Integer>, Float)>> {
    let values = q.values.values(&q.ctx)?;
    check_query(q, &values)?;
    let mut out = Vec::new();
    for (c, r) in candidates(q, &values)? {
        if confirmed(q, &c)? {
            out.push((c, r));
        }
    }
    Ok(out)
}

pub fn find_integer_relation(q: &RelationQuery) -> Result<RelationResult> {
    let found = find_integer_relations(q)?;
    Ok(match found.into_iter().next() {
        Some((coefficients, residual)) => RelationResult::Found { coefficients, residual },
        None => RelationResult::NoneUpTo { max_coeff: q.max_coeff, digits: q.ctx.decimal_digits },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeCount {
    pub labels: Vec<&'static str>,
    pub relations: Vec<Vec<Integer>>,
    pub empirical_dim: usize,
}

impl ProbeCount {
    pub fn status(&self) -> &'static str {
        if self.relations.is_empty() {
            "NoneUpTo"
        } else {
            "Found"
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "values": self.labels,
            "status": self.status(),
            "relations": self.relations.iter().map(|r| r.iter().map(Integer::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "empirical_dim": self.empirical_dim,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MasserReport {
    pub full: ProbeCount,
    pub periods: ProbeCount,
    pub max_coeff: u64,
    pub ctx: PrecisionContext,
}

impl MasserReport {
    /// `dim(full list) = 2 + 2 dim(period coordinates)`.
    pub fn consistent(&self) -> bool {
        self.full.empirical_dim == 2 + 2 * self.periods.empirical_dim
    }

    pub fn to_json(&self) -> Value {
        json!({
            "full": self.full.to_json(),
            "periods": self.periods.to_json(),
            "lhs": self.full.empirical_dim,
            "rhs": self.periods.empirical_dim,
            "consistent": self.consistent(),
            "max_coeff": self.max_coeff,
            "precision": self.ctx,
        })
    }
}

const FULL_LABELS: [&str; 10] =
    ["1", "Re l1", "Im l1", "Re eta1", "Im eta1", "Re l2", "Im l2", "Re eta2", "Im eta2", "2pi"];
const PERIOD_LABELS: [&str; 4] = ["Re l1", "Im l1", "Re l2", "Im l2"];

fn real(x: &Float) -> BigComplex {
    BigComplex::from_real(x.clone())
}

fn masser_values(l: &Lattice, ctx: &PrecisionContext) -> Result<Vec<BigComplex>> {
    let w = Weierstrass::new(l, ctx)?;
    let bits = w.bits();
    let (l1, l2) = l.basis(bits);
    let (e1, e2) = w.basis_etas()?;
    let two_pi = Float::with_val(bits, pi(bits) * 2u32);
    Ok(vec![
        BigComplex::one(bits),
        real(&l1.re),
        real(&l1.im),
        real(&e1.re),
        real(&e1.im),
        real(&l2.re),
        real(&l2.im),
        real(&e2.re),
        real(&e2.im),
        real(&two_pi),
    ])
}

/// Relation counts among periods and quasi-periods of `l`, compared with `2 + 2 dim`.
pub fn masser_probe(l: &Lattice, ctx: &PrecisionContext, max_coeff: u64) -> Result<MasserReport> {
    let lf = l.clone();
    let full_src = ValueSource::computed(move |c| masser_values(&lf, c));
    let lp = l.clone();
    let period_src = ValueSource::computed(move |c| {
        let v = masser_values(&lp, c)?;
        Ok(vec![v[1].clone(), v[2].clone(), v[5].clone(), v[6].clone()])
    });
    let count = |src: ValueSource, labels: &[&'static str]| -> Result<ProbeCount> {
        let rels = find_integer_relations(&RelationQuery::new(src, max_coeff, *ctx))?;
        let relations: Vec<Vec<Integer>> = rels.into_iter().map(|(c, _)| c).collect();
        Ok(ProbeCount { labels: labels.to_vec(), empirical_dim: labels.len() - relations.len(), relations })
    };
    Ok(MasserReport {
        full: count(full_src, &FULL_LABELS)?,
        periods: count(period_src, &PERIOD_LABELS)?,
        max_coeff,
        ctx: *ctx,
    })
}

/// `e^i`, at the precision used for re-verification of `ctx`.
///
/// Bases like `(1, i)` have zero coordinates, which add relations unrelated to the
/// curve. The rotated lattice `e^i L` gives an isomorphic curve without them.
pub fn masser_rotation(ctx: &PrecisionContext) -> BigComplex {
    BigComplex::i(ctx.doubled().work_bits()).exp()
}

pub fn masser_probe_rotated(l: &Lattice, ctx: &PrecisionContext, max_coeff: u64) -> Result<MasserReport> {
    masser_probe(&l.scaled(&masser_rotation(ctx))?, ctx, max_coeff)
}

/// Values for the Legendre control `{eta1 l2 - eta2 l1, 2 pi i}`.
pub fn legendre_values(l: &Lattice) -> ValueSource {
    let l = l.clone();
    ValueSource::computed(move |ctx| {
        let w = Weierstrass::new(&l, ctx)?;
        let bits = w.bits();
        let (l1, l2) = l.basis(bits);
        let (e1, e2) = w.basis_etas()?;
        let lhs = e1.mul(&l2).sub(&e2.mul(&l1));
        let two_pi_i = BigComplex::i(bits).mul_real(&pi(bits)).mul_int(2);
        Ok(vec![lhs, two_pi_i])
    })
}

/// Residual of `log10` form, for reports.
pub fn residual_digits(r: &Float) -> f64 {
    log10_abs(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_exact;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn fixed(f: impl Fn(u32) -> Vec<BigComplex>, c: &PrecisionContext) -> ValueSource {
        ValueSource::Fixed(f(c.work_bits()))
    }

    fn ln(n: u32, bits: u32) -> BigComplex {
        BigComplex::from_real(Float::with_val(bits, n).ln())
    }

    fn sqrt(n: u32, bits: u32) -> BigComplex {
        BigComplex::from_real(Float::with_val(bits, n).sqrt())
    }

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn classical_relations() {
        let c = ctx(50);
        let q = RelationQuery::new(fixed(|b| vec![ln(2, b), ln(4, b)], &c), 10, c);
        assert_eq!(find_integer_relation(&q).unwrap().coefficients(), Some(&ints(&[2, -1])[..]));
        let q = RelationQuery::new(
            fixed(|b| vec![BigComplex::one(b), sqrt(2, b), BigComplex::one(b).add(&sqrt(2, b))], &c),
            10,
            c,
        );
        assert_eq!(find_integer_relation(&q).unwrap().coefficients(), Some(&ints(&[1, 1, -1])[..]));
    }

    #[test]
    fn legendre_control() {
        let c = ctx(50);
        let l = Lattice::from_tau(&parse_exact("1/3 + sqrt2*1i").unwrap()).unwrap();
        let src = legendre_values(&l);
        let q = RelationQuery::new(src.clone(), 10, c);
        assert_eq!(find_integer_relation(&q).unwrap().coefficients(), Some(&ints(&[1, -1])[..]));
        let vals = src.values(&c).unwrap();
        assert!(verify_relation(&vals, &ints(&[1, -1]), &c).unwrap() < c.threshold());
        let four_pi = Float::with_val(64, pi(64) * 4u32).to_f64();
        let wrong = verify_relation(&vals, &ints(&[1, 1]), &c).unwrap().to_f64();
        assert!((wrong - four_pi).abs() < 1e-10);
    }

    #[test]
    fn trivial_verify() {
        let c = ctx(30);
        let b = c.work_bits();
        let v = vec![BigComplex::one(b), BigComplex::one(b)];
        assert!(verify_relation(&v, &ints(&[1, -1]), &c).unwrap().is_zero());
    }

    #[test]
    fn none_for_independent_numbers() {
        let c = ctx(60);
        let q = RelationQuery::new(fixed(|b| vec![BigComplex::one(b), sqrt(2, b), sqrt(3, b)], &c), 100, c);
        assert_eq!(find_integer_relation(&q).unwrap(), RelationResult::NoneUpTo { max_coeff: 100, digits: 60 });
    }

    #[test]
    fn coincidence_is_demoted_at_doubled_precision() {
        // x = sqrt2 + 10^-45 agrees with sqrt2 to 45 digits: detected at 50 digits, rejected at 100
        let c = ctx(50);
        let src = ValueSource::computed(|c: &PrecisionContext| {
            let b = c.work_bits();
            let eps = BigComplex::from_real(crate::arith::bigcomplex::pow10(-45, b));
            Ok(vec![sqrt(2, b), sqrt(2, b).add(&eps)])
        });
        let q = RelationQuery::new(src, 10, c);
        assert!(!candidates(&q, &q.values.values(&c).unwrap()).unwrap().is_empty());
        assert!(matches!(find_integer_relation(&q).unwrap(), RelationResult::NoneUpTo { .. }));
    }

    #[test]
    fn insufficient_precision() {
        let c = ctx(20);
        let q = RelationQuery::new(fixed(|b| (1..=8).map(|k| sqrt(k, b)).collect(), &c), 1000, c);
        assert!(matches!(find_integer_relation(&q), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn rectangular_masser() {
        let c = ctx(60);
        let l = Lattice::from_exact_basis(parse_exact("1").unwrap(), parse_exact("sqrt2*1i").unwrap()).unwrap();
        let r = masser_probe(&l, &c, 20).unwrap();
        assert_eq!(r.periods.relations.len(), 2);
        assert!(r.periods.relations.contains(&ints(&[0, 1, 0, 0])));
        assert!(r.periods.relations.contains(&ints(&[0, 0, 1, 0])));
    }
}
