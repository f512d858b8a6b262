use rug::{Integer, Rational};
use serde_json::{json, Value};

use super::elliptic::{elliptic_real_model, normalize_tau};
use crate::arith::linalg::{gauss_reduce_pair, integer_kernel, integer_row};
use crate::arith::ExactComplex;
use crate::error::Result;

/// Default coefficient bound for the rank-2 minimal degree search.
pub const DEFAULT_DEGREE_BOUND: i64 = 32;

/// Integer matrix `(a b; c d)` with `tau2 = (a tau + b) / (c tau + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyMatrix(pub [Integer; 4]);

impl IsogenyMatrix {
    pub fn det(&self) -> Integer {
        let [a, b, c, d] = &self.0;
        Integer::from(a * d) - Integer::from(b * c)
    }

    pub fn degree(&self) -> Integer {
        self.det().abs()
    }

    /// Product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &IsogenyMatrix) -> IsogenyMatrix {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &other.0;
        IsogenyMatrix([
            Integer::from(a * e) + Integer::from(b * g),
            Integer::from(a * f) + Integer::from(b * h),
            Integer::from(c * e) + Integer::from(d * g),
            Integer::from(c * f) + Integer::from(d * h),
        ])
    }

    fn combine(x: i64, m: &IsogenyMatrix, y: i64, n: &IsogenyMatrix) -> IsogenyMatrix {
        IsogenyMatrix(std::array::from_fn(|k| Integer::from(&m.0[k] * x) + Integer::from(&n.0[k] * y)))
    }

    pub fn to_json(&self) -> Value {
        json!([[self.0[0].to_string(), self.0[1].to_string()], [self.0[2].to_string(), self.0[3].to_string()]])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyModule {
    pub rank: usize,
    pub generators: Vec<IsogenyMatrix>,
    pub min_degree: Option<Integer>,
    /// Coefficient bound used for the minimal-degree enumeration in rank 2.
    pub degree_bound: i64,
}

impl IsogenyModule {
    /// All degrees `<= max` of module elements with coefficients within the enumeration bound.
    pub fn degrees_up_to(&self, max: u64) -> Vec<Integer> {
        let mut out: Vec<Integer> = self.elements().into_iter().map(|m| m.degree()).filter(|d| *d <= max).collect();
        out.sort();
        out.dedup();
        out
    }

    fn elements(&self) -> Vec<IsogenyMatrix> {
        match self.generators.as_slice() {
            [] => Vec::new(),
            [g] => vec![g.clone()],
            [g, h, ..] => {
                let b = self.degree_bound;
                let mut out = Vec::new();
                for x in -b..=b {
                    for y in -b..=b {
                        if (x, y) != (0, 0) {
                            out.push(IsogenyMatrix::combine(x, g, y, h));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "generators": self.generators.iter().map(IsogenyMatrix::to_json).collect::<Vec<_>>(),
            "degrees": self.generators.iter().map(|g| g.degree().to_string()).collect::<Vec<_>>(),
            "min_degree": self.min_degree.as_ref().map(|d| d.to_string()),
            "degree_bound": self.degree_bound,
        })
    }
}

/// Integer solutions of `a tau + b - c tau tau2 - d tau2 = 0`.
pub fn hom_module(tau: &ExactComplex, tau2: &ExactComplex) -> Result<IsogenyModule> {
    hom_module_with_bound(tau, tau2, DEFAULT_DEGREE_BOUND)
}

pub fn hom_module_with_bound(tau: &ExactComplex, tau2: &ExactComplex, bound: i64) -> Result<IsogenyModule> {
    let t = normalize_tau(tau)?;
    let t2 = normalize_tau(tau2)?;
    let prod = t.mul(&t2);
    let field = t.field().join(t2.field()).join(prod.field());
    let cols: Vec<ExactComplex> = [t.clone(), ExactComplex::from_int(1), prod.neg(), t2.neg()]
        .iter()
        .map(|z| z.embed(&field))
        .collect::<Result<_>>()?;
    let deg = field.degree();
    let equations: Vec<Vec<Integer>> = (0..2 * deg)
        .map(|k| {
            let row: Vec<Rational> = cols
                .iter()
                .map(|z| if k < deg { z.re().coords()[k].clone() } else { z.im().coords()[k - deg].clone() })
                .collect();
            integer_row(&row)
        })
        .filter(|r| r.iter().any(|x| *x != 0))
        .collect();
    let mut kernel = integer_kernel(&equations, 4);
    if kernel.len() == 2 {
        let (u, v) = gauss_reduce_pair(kernel[0].clone(), kernel[1].clone());
        kernel = vec![u, v];
    }
    let generators: Vec<IsogenyMatrix> = kernel
        .into_iter()
        .map(|v| {
            let m = IsogenyMatrix([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]);
            // (-M) induces the same map; keep a > 0 or the first nonzero entry positive
            if m.0.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                IsogenyMatrix(m.0.map(|x| -x))
            } else {
                m
            }
        })
        .collect();
    let rank = generators.len();
    let mut module = IsogenyModule { rank, generators, min_degree: None, degree_bound: bound };
    module.min_degree = module.elements().iter().map(IsogenyMatrix::degree).filter(|d| *d != 0).min();
    Ok(module)
}

/// Whether the Weil restriction of `E_tau` to the reals is simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    Simple,
    Splits(String),
}

/// Decided from the isogenies `E_tau -> E_tau^h`, independently of the real-model witnesses.
pub fn weil_restriction_simple(tau: &ExactComplex) -> Result<Splitting> {
    let t = normalize_tau(tau)?;
    if let Some(d) = t.is_quadratic_irrational()? {
        return Ok(Splitting::Splits(format!("CM (discriminant {d}): isogenous to E' x E'")));
    }
    let conj = t.conjugate().neg();
    let m = hom_module(&t, &conj)?;
    if m.rank == 1 {
        let deg = m.generators[0].degree();
        if deg.is_perfect_square() {
            return Ok(Splitting::Splits(format!("isogeny to the conjugate curve of square degree {deg}")));
        }
    }
    Ok(Splitting::Simple)
}

/// Checks that both independent procedures agree (used by tests and the CLI).
pub fn definability_consistent(tau: &ExactComplex) -> Result<bool> {
    let a = elliptic_real_model(tau)?.definable;
    let b = matches!(weil_restriction_simple(tau)?, Splitting::Splits(_));
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_exact;

    fn p(s: &str) -> ExactComplex {
        parse_exact(s).unwrap()
    }

    /// Oracle: integer matrices with entries in [-k, k] satisfying the relation exactly.
    fn enumerate(tau: &ExactComplex, tau2: &ExactComplex, k: i64) -> Vec<[i64; 4]> {
        let mut out = Vec::new();
        for a in -k..=k {
            for b in -k..=k {
                for c in -k..=k {
                    for d in -k..=k {
                        if a * d - b * c <= 0 {
                            continue;
                        }
                        let lhs = tau2.mul(&tau.scale(&c.into()).add(&ExactComplex::from_int(d)));
                        let rhs = tau.scale(&a.into()).add(&ExactComplex::from_int(b));
                        if lhs.sub(&rhs).is_zero() {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cm_sqrt_minus_two() {
        let t = p("sqrt(-2)");
        let m = hom_module(&t, &t).unwrap();
        assert_eq!(m.rank, 2);
        let degs = m.degrees_up_to(4);
        assert!(degs.contains(&Integer::from(1)) && degs.contains(&Integer::from(2)));
        assert_eq!(m.min_degree, Some(Integer::from(1)));
    }

    #[test]
    fn sqrt3_one_plus_i_to_conjugate() {
        let t = p("sqrt3*(1+1i)");
        let m = hom_module(&t, &t.conjugate().neg()).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.min_degree, Some(Integer::from(6)));
        assert_eq!(m.generators[0].det(), 6);
        assert_eq!(weil_restriction_simple(&t).unwrap(), Splitting::Simple);
    }

    #[test]
    fn i_to_2i_matches_enumeration() {
        let (t, t2) = (p("i"), p("2i"));
        let m = hom_module(&t, &t2).unwrap();
        assert_eq!(m.rank, 2);
        assert_eq!(m.min_degree, Some(Integer::from(2)));
        let oracle = enumerate(&t, &t2, 5);
        let min = oracle.iter().map(|[a, b, c, d]| a * d - b * c).min().unwrap();
        assert_eq!(min, 2);
    }

    #[test]
    fn splitting_examples() {
        assert!(matches!(weil_restriction_simple(&p("sqrt(-2)")).unwrap(), Splitting::Splits(_)));
        assert!(matches!(weil_restriction_simple(&p("1/2 + sqrt7*1i")).unwrap(), Splitting::Splits(_)));
        for t in ["sqrt3*(1+1i)", "sqrt(-2)", "1/2 + sqrt7*1i", "(sqrt2-1)/2 + sqrt2/2*1i", "sqrt2 + sqrt3*1i"] {
            assert!(definability_consistent(&p(t)).unwrap(), "{t}");
        }
    }

    #[test]
    fn degree_is_multiplicative() {
        let (a, b, c) = (p("i"), p("2i"), p("6i"));
        let f = hom_module(&a, &b).unwrap().generators[0].clone();
        let g = hom_module(&b, &c).unwrap().generators[0].clone();
        let h = g.compose(&f);
        assert_eq!(h.det(), f.det() * g.det());
        let (ta, tc) = (a.clone(), c.clone());
        let [x, y, z, w] = &h.0;
        let lhs = tc.mul(&ta.scale(&Rational::from(z)).add(&ExactComplex::from_rational(Rational::from(w))));
        let rhs = ta.scale(&Rational::from(x)).add(&ExactComplex::from_rational(Rational::from(y)));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn no_isogeny() {
        let m = hom_module(&p("i"), &p("sqrt2*1i + 1/3")).unwrap();
        assert_eq!(m.rank, 0);
        assert_eq!(m.min_degree, None);
    }
}
