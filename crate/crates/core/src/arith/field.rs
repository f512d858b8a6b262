//! Real multiquadratic fields `Q(sqrt(p1), ..., sqrt(pk))`.
//!
//! Basis element `e_S` for a bitmask `S` over the generators is the positive
//! real number `sqrt(prod_{j in S} p_j)`. Products follow
//! `e_S * e_T = (prod_{j in S & T} p_j) * e_{S ^ T}`.

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Integer;

use crate::error::{Error, Result};

/// Largest number of generators accepted (basis size 2^8 = 256).
pub const MAX_GENERATORS: usize = 8;

#[derive(Debug)]
struct FieldData {
    generators: Vec<u64>,
    /// Distinct primes dividing some generator.
    primes: Vec<u64>,
    /// Per basis element: odd-exponent prime mask and square-part root.
    kernels: Vec<(u64, Integer)>,
}

/// A conjugation-stable real multiquadratic field, identified by its radicands.
#[derive(Clone)]
pub struct RealField(Arc<FieldData>);

impl PartialEq for RealField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.generators == other.0.generators
    }
}

impl Eq for RealField {}

impl fmt::Debug for RealField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealField{:?}", self.0.generators)
    }
}

impl fmt::Display for RealField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.generators.is_empty() {
            return write!(f, "Q");
        }
        let gens: Vec<String> = self.0.generators.iter().map(|g| format!("sqrt{g}")).collect();
        write!(f, "Q({})", gens.join(", "))
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree part and square root of the square part: `n = kernel * root^2`.
pub(crate) fn squarefree_decomposition(n: u64) -> (u64, u64) {
    let mut kernel = 1;
    let mut root = 1;
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            kernel *= p;
        }
        root *= p.pow(e / 2);
    }
    (kernel, root)
}

/// Mask of primes (indexed into `primes`) dividing the squarefree `n`.
fn prime_mask(n: u64, primes: &[u64]) -> u64 {
    factorize(n)
        .iter()
        .map(|(p, _)| 1u64 << primes.iter().position(|q| q == p).expect("prime listed"))
        .fold(0, |a, b| a ^ b)
}

/// Greedy GF(2) independence test of squarefree radicands modulo squares.
fn independent_mod_squares(gens: &[u64]) -> bool {
    let mut primes: Vec<u64> = gens.iter().flat_map(|&g| factorize(g).into_iter().map(|(p, _)| p)).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut pivots: Vec<u64> = Vec::new();
    for &g in gens {
        let mut v = prime_mask(g, &primes);
        for &b in &pivots {
            if v & (1 << (63 - b.leading_zeros())) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        pivots.push(v);
        pivots.sort_unstable_by(|a, b| b.cmp(a));
    }
    true
}

impl RealField {
    /// Builds `Q(sqrt(g) : g in generators)`.
    ///
    /// Generators are sorted; they must be squarefree, greater than one and
    /// multiplicatively independent modulo squares.
    pub fn new(generators: &[u64]) -> Result<Self> {
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        if gens.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidField(format!("repeated radicand in {generators:?}")));
        }
        if gens.len() > MAX_GENERATORS {
            return Err(Error::InvalidField(format!("more than {MAX_GENERATORS} generators")));
        }
        for &g in &gens {
            if g <= 1 || !is_squarefree(g) {
                return Err(Error::InvalidField(format!("{g} is not a squarefree integer > 1")));
            }
        }
        if !independent_mod_squares(&gens) {
            return Err(Error::InvalidField(format!(
                "{gens:?} are dependent modulo squares"
            )));
        }
        let mut primes: Vec<u64> = gens.iter().flat_map(|&g| factorize(g).into_iter().map(|(p, _)| p)).collect();
        primes.sort_unstable();
        primes.dedup();
        let kernels = (0..1usize << gens.len())
            .map(|s| {
                let mut mask = 0u64;
                let mut exps = vec![0u32; primes.len()];
                for (j, &g) in gens.iter().enumerate() {
                    if s & (1 << j) != 0 {
                        for (p, _) in factorize(g) {
                            let idx = primes.iter().position(|&q| q == p).unwrap();
                            exps[idx] += 1;
                            mask ^= 1 << idx;
                        }
                    }
                }
                let mut root = Integer::from(1);
                for (idx, e) in exps.iter().enumerate() {
                    root *= Integer::from(primes[idx]).pow(e / 2);
                }
                (mask, root)
            })
            .collect();
        Ok(RealField(Arc::new(FieldData { generators: gens, primes, kernels })))
    }

    /// The field of rationals.
    pub fn rationals() -> Self {
        RealField::new(&[]).expect("Q is valid")
    }

    pub fn generators(&self) -> &[u64] {
        &self.0.generators
    }

    pub fn degree(&self) -> usize {
        1 << self.0.generators.len()
    }

    /// Radicand `prod_{j in S} p_j` of basis element `s`.
    pub fn radicand(&self, s: usize) -> Integer {
        self.0
            .generators
            .iter()
            .enumerate()
            .filter(|(j, _)| s & (1 << j) != 0)
            .fold(Integer::from(1), |acc, (_, &g)| acc * g)
    }

    /// `e_s * e_t = coefficient * e_{s ^ t}`.
    pub fn basis_product(&self, s: usize, t: usize) -> (usize, Integer) {
        (s ^ t, self.radicand(s & t))
    }

    /// Squarefree kernel (as a product of primes) and rational multiplier of `e_s`.
    fn kernel_of(&self, s: usize) -> (u64, &Integer) {
        let (mask, root) = &self.0.kernels[s];
        let kernel = self
            .0
            .primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .product();
        (kernel, root)
    }

    /// Locates `sqrt(kernel)` in this field: `sqrt(kernel) = e_s / root`.
    pub(crate) fn locate_sqrt(&self, kernel: u64) -> Option<(usize, Integer)> {
        (0..self.degree()).find_map(|s| {
            let (k, root) = self.kernel_of(s);
            (k == kernel).then(|| (s, root.clone()))
        })
    }

    /// Expresses each basis element of `self` in `other`: `e_s = (num/den) * e_t`.
    pub(crate) fn embedding_into(&self, other: &RealField) -> Result<Vec<(usize, rug::Rational)>> {
        (0..self.degree())
            .map(|s| {
                let (k, root) = self.kernel_of(s);
                let (t, root_t) = other
                    .locate_sqrt(k)
                    .ok_or_else(|| Error::FieldMismatch(self.to_string(), other.to_string()))?;
                Ok((t, rug::Rational::from((root.clone(), root_t))))
            })
            .collect()
    }

    /// True when every element of `self` lives in `other`.
    pub fn is_subfield_of(&self, other: &RealField) -> bool {
        self.embedding_into(other).is_ok()
    }

    /// Smallest field of this family containing both.
    pub fn join(&self, other: &RealField) -> RealField {
        if self == other || self.is_subfield_of(other) {
            return other.clone();
        }
        if other.is_subfield_of(self) {
            return self.clone();
        }
        let mut all: Vec<u64> = self.generators().iter().chain(other.generators()).copied().collect();
        all.sort_unstable();
        all.dedup();
        let mut chosen: Vec<u64> = Vec::new();
        for g in all {
            let mut trial = chosen.clone();
            trial.push(g);
            if independent_mod_squares(&trial) {
                chosen = trial;
            }
        }
        RealField::new(&chosen).expect("independent generators")
    }

    /// Label of basis element `s`, e.g. `1`, `sqrt2`, `sqrt6`.
    pub fn basis_label(&self, s: usize) -> String {
        if s == 0 {
            "1".to_string()
        } else {
            format!("sqrt{}", self.radicand(s))
        }
    }
}
