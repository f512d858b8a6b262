//! Formal products of simple commutative group factors and extension wrappers.

use std::fmt;

use serde_json::{json, Value};

use crate::arith::{parse_exact, ExactComplex};
use crate::descent::{coordinates, hom_module, weil_restriction_profile, WeilProfile};
use crate::error::{Error, Result};

pub use crate::descent::SimpleFactor;

/// A factor of a formal product: a simple group or a non-split extension of an elliptic curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Simple(SimpleFactor),
    /// Extension of `E(tau)` by `Ga` with class `t != 0`.
    ExtGa { tau: ExactComplex, t: ExactComplex },
    /// Extension of `E(tau)` by `Gm` attached to a non-torsion point `omega`.
    ExtGm { tau: ExactComplex, omega: ExactComplex },
}

impl Factor {
    pub fn ext_ga(tau: &ExactComplex, t: ExactComplex) -> Result<Factor> {
        if t.is_zero() {
            return Err(Error::Domain("ExtGa with t = 0 is split; write E x Ga instead".into()));
        }
        let SimpleFactor::Elliptic(tau) = SimpleFactor::elliptic(tau)? else { unreachable!() };
        Ok(Factor::ExtGa { tau, t })
    }

    pub fn ext_gm(tau: &ExactComplex, omega: ExactComplex) -> Result<Factor> {
        let SimpleFactor::Elliptic(tau) = SimpleFactor::elliptic(tau)? else { unreachable!() };
        if coordinates(&omega, &ExactComplex::from_int(1), &tau).is_some() {
            return Err(Error::Domain(format!("omega = {omega} is a torsion point; the extension is isotrivial")));
        }
        Ok(Factor::ExtGm { tau, omega })
    }

    /// The elliptic base of a wrapper, or the factor itself.
    pub fn base(&self) -> SimpleFactor {
        match self {
            Factor::Simple(s) => s.clone(),
            Factor::ExtGa { tau, .. } | Factor::ExtGm { tau, .. } => SimpleFactor::Elliptic(tau.clone()),
        }
    }

    fn fiber(&self) -> Option<SimpleFactor> {
        match self {
            Factor::Simple(_) => None,
            Factor::ExtGa { .. } => Some(SimpleFactor::Ga),
            Factor::ExtGm { .. } => Some(SimpleFactor::Gm),
        }
    }

    pub fn conjugate(&self) -> Factor {
        match self {
            Factor::Simple(SimpleFactor::Elliptic(tau)) => Factor::Simple(SimpleFactor::Elliptic(conj_tau(tau))),
            Factor::Simple(s) => Factor::Simple(s.clone()),
            Factor::ExtGa { tau, t } => Factor::ExtGa { tau: conj_tau(tau), t: t.conjugate() },
            Factor::ExtGm { tau, omega } => Factor::ExtGm { tau: conj_tau(tau), omega: omega.conjugate() },
        }
    }
}

/// `-conj(tau)`, again in the upper half plane.
fn conj_tau(tau: &ExactComplex) -> ExactComplex {
    tau.conjugate().neg()
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Simple(s) => write!(f, "{}", s.label()),
            Factor::ExtGa { tau, t } => write!(f, "ExtGa(E(tau={tau}),t={t})"),
            Factor::ExtGm { tau, omega } => write!(f, "ExtGm(E(tau={tau}),omega={omega})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupObject {
    pub factors: Vec<Factor>,
}

impl fmt::Display for GroupObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl std::str::FromStr for GroupObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_object(s)
    }
}

impl GroupObject {
    pub fn new(factors: Vec<Factor>) -> Self {
        GroupObject { factors }
    }

    pub fn product(&self, other: &GroupObject) -> GroupObject {
        GroupObject { factors: self.factors.iter().chain(&other.factors).cloned().collect() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "object": self.to_string(),
            "factors": self.factors.iter().map(Factor::to_string).collect::<Vec<_>>(),
        })
    }
}

pub fn conj_object(g: &GroupObject) -> GroupObject {
    GroupObject { factors: g.factors.iter().map(Factor::conjugate).collect() }
}

pub fn delta_invariant(g: &GroupObject) -> usize {
    g.factors.len()
}

pub fn max_plurisimple_quotient(g: &GroupObject) -> GroupObject {
    GroupObject { factors: g.factors.iter().map(|f| Factor::Simple(f.base())).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomNote {
    Zero,
    Scalars,
    CMOrder,
    Characters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomRank {
    pub rank: usize,
    pub note: HomNote,
}

impl HomRank {
    const ZERO: HomRank = HomRank { rank: 0, note: HomNote::Zero };

    pub fn to_json(&self) -> Value {
        json!({"rank": self.rank, "note": format!("{:?}", self.note)})
    }
}

pub fn hom_rank(a: &SimpleFactor, b: &SimpleFactor) -> Result<HomRank> {
    use SimpleFactor::*;
    Ok(match (a, b) {
        (Ga, Ga) => HomRank { rank: 1, note: HomNote::Scalars },
        (Gm | STorus, Gm | STorus) => HomRank { rank: 1, note: HomNote::Characters },
        (Elliptic(t1), Elliptic(t2)) => match hom_module(t1, t2)?.rank {
            0 => HomRank::ZERO,
            1 => HomRank { rank: 1, note: HomNote::Scalars },
            r => HomRank { rank: r, note: HomNote::CMOrder },
        },
        _ => HomRank::ZERO,
    })
}

fn is_linear(f: &SimpleFactor) -> bool {
    !matches!(f, SimpleFactor::Elliptic(_))
}

/// Rank of `Hom(A, B)` for factors that may be extension wrappers.
///
/// Into a wrapper only the fiber is reachable from a linear group, and an isogeny onto
/// the base never lifts through a non-split extension. Out of a wrapper every
/// homomorphism to a simple group kills the linear fiber. Between two wrappers the rank
/// of `Hom` of the bases is used (exact for `Ga` fibers, an upper bound for `Gm`).
pub fn hom_rank_factor(a: &Factor, b: &Factor) -> Result<HomRank> {
    match (a, b) {
        (Factor::Simple(x), Factor::Simple(y)) => hom_rank(x, y),
        (Factor::Simple(x), wrapper) => {
            if is_linear(x) {
                hom_rank(x, &wrapper.fiber().expect("wrapper"))
            } else {
                Ok(HomRank::ZERO)
            }
        }
        (wrapper, Factor::Simple(y)) => hom_rank(&wrapper.base(), y),
        (x, y) => hom_rank(&x.base(), &y.base()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HypothesisVerdict {
    StrongOK,
    WeakOK,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub verdict: HypothesisVerdict,
    pub quotient: GroupObject,
    /// First nonzero `Hom` found for each failed condition, as `(source, target, rank)`.
    pub strong_obstruction: Option<(String, String, usize)>,
    pub weak_obstruction: Option<(String, String, usize)>,
}

impl HypothesisReport {
    pub fn to_json(&self) -> Value {
        let ob = |o: &Option<(String, String, usize)>| o.as_ref().map(|(a, b, r)| json!({"from": a, "to": b, "rank": r}));
        json!({
            "verdict": format!("{:?}", self.verdict),
            "quotient": self.quotient.to_string(),
            "strong_obstruction": ob(&self.strong_obstruction),
            "weak_obstruction": ob(&self.weak_obstruction),
        })
    }
}

/// Removes the factors of `kernel` from `g` as a multiset; `None` if not a sub-product.
fn remove_submultiset(g: &GroupObject, kernel: &GroupObject) -> Option<GroupObject> {
    let mut rest = g.factors.clone();
    for k in &kernel.factors {
        let pos = rest.iter().position(|f| f == k)?;
        rest.remove(pos);
    }
    Some(GroupObject { factors: rest })
}

fn first_nonzero(sources: &[Factor], targets: &[Factor]) -> Result<Option<(String, String, usize)>> {
    for a in sources {
        for b in targets {
            let r = hom_rank_factor(a, b)?;
            if r.rank > 0 {
                return Ok(Some((a.to_string(), b.to_string(), r.rank)));
            }
        }
    }
    Ok(None)
}

/// Checks `Hom(ker, U^h) = 0` (strong) and `Hom(U^h, M) = 0` for quotients `M` of the kernel (weak),
/// where `U = G / kernel`.
pub fn inherited_hypothesis_check(g: &GroupObject, kernel: &GroupObject) -> Result<HypothesisReport> {
    let quotient = remove_submultiset(g, kernel)
        .ok_or_else(|| Error::Domain(format!("kernel {kernel} is not a sub-product of {g}")))?;
    let conj_u = conj_object(&quotient);
    let strong_obstruction = first_nonzero(&kernel.factors, &conj_u.factors)?;
    // quotients of the kernel: its factors and the bases of its wrappers
    let mut quotients = kernel.factors.clone();
    quotients.extend(kernel.factors.iter().filter(|f| !matches!(f, Factor::Simple(_))).map(|f| Factor::Simple(f.base())));
    let weak_obstruction = first_nonzero(&conj_u.factors, &quotients)?;
    let verdict = if strong_obstruction.is_none() {
        HypothesisVerdict::StrongOK
    } else if weak_obstruction.is_none() {
        HypothesisVerdict::WeakOK
    } else {
        HypothesisVerdict::Fails
    };
    Ok(HypothesisReport { verdict, quotient, strong_obstruction, weak_obstruction })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectRestriction {
    /// One profile per simple constituent; wrappers contribute their base and fiber.
    pub profiles: Vec<WeilProfile>,
}

impl ObjectRestriction {
    pub fn description(&self) -> String {
        let parts: Vec<String> = self.profiles.iter().map(|p| format!("({})", p.description())).collect();
        parts.join(" x ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "restriction": self.description(),
            "factors": self.profiles.iter().map(WeilProfile::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn weil_restrict_object(g: &GroupObject) -> Result<ObjectRestriction> {
    let mut profiles = Vec::new();
    for f in &g.factors {
        profiles.push(weil_restriction_profile(&f.base())?);
        if let Some(fib) = f.fiber() {
            profiles.push(weil_restriction_profile(&fib)?);
        }
    }
    Ok(ObjectRestriction { profiles })
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Splits on a top-level separator token: `×`, or `x` surrounded by whitespace.
fn split_product(s: &str) -> Result<Vec<String>> {
    let chars: Vec<char> = s.chars().collect();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for (k, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_error(format!("unbalanced ')' in {s:?}")));
                }
            }
            _ => {}
        }
        let sep = depth == 0
            && (c == '×'
                || (c == 'x'
                    && k > 0
                    && chars[k - 1].is_whitespace()
                    && chars.get(k + 1).is_some_and(|n| n.is_whitespace())));
        if sep {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(parse_error(format!("unbalanced '(' in {s:?}")));
    }
    parts.push(cur);
    Ok(parts.into_iter().map(|p| p.trim().to_string()).collect())
}

/// Splits `a, b` at the first top-level comma.
fn split_args(s: &str) -> Vec<&str> {
    let mut depth = 0;
    let mut out = Vec::new();
    let mut start = 0;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn inner<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

fn keyed<'a>(arg: &'a str, key: &str) -> Result<&'a str> {
    let (k, v) = arg.split_once('=').ok_or_else(|| parse_error(format!("expected {key}=..., got {arg:?}")))?;
    if k.trim() != key {
        return Err(parse_error(format!("expected {key}=..., got {arg:?}")));
    }
    Ok(v.trim())
}

fn parse_elliptic_tau(s: &str) -> Result<ExactComplex> {
    let body = inner(s.trim(), "E").ok_or_else(|| parse_error(format!("expected E(tau=...), got {s:?}")))?;
    parse_exact(keyed(body, "tau")?)
}

fn parse_factor(s: &str) -> Result<Vec<Factor>> {
    // optional power suffix: Gm^2
    let (base, power) = match s.rsplit_once('^') {
        Some((b, p)) if !b.ends_with(')') || b.matches('(').count() == b.matches(')').count() => {
            let n: usize = p.trim().parse().map_err(|_| parse_error(format!("bad exponent in {s:?}")))?;
            (b.trim(), n)
        }
        _ => (s, 1),
    };
    let factor = match base {
        "Ga" => Factor::Simple(SimpleFactor::Ga),
        "Gm" => Factor::Simple(SimpleFactor::Gm),
        "S" | "STorus" => Factor::Simple(SimpleFactor::STorus),
        _ if base.starts_with("ExtGa") || base.starts_with("ExtGm") => {
            let body = inner(base, &base[..5]).ok_or_else(|| parse_error(format!("malformed wrapper {base:?}")))?;
            let args = split_args(body);
            if args.len() != 2 {
                return Err(parse_error(format!("{base:?} needs a base curve and one parameter")));
            }
            let tau = parse_elliptic_tau(args[0])?;
            if base.starts_with("ExtGa") {
                Factor::ext_ga(&tau, parse_exact(keyed(args[1], "t")?)?)?
            } else {
                Factor::ext_gm(&tau, parse_exact(keyed(args[1], "omega")?)?)?
            }
        }
        _ if base.starts_with('E') => Factor::Simple(SimpleFactor::elliptic(&parse_elliptic_tau(base)?)?),
        _ => return Err(parse_error(format!("unknown factor {base:?}"))),
    };
    Ok(vec![factor; power])
}

/// Parses `"E(tau=i) x Gm x ExtGa(E(tau=i),t=1)"`; `"1"` is the trivial group.
pub fn parse_object(s: &str) -> Result<GroupObject> {
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_error("empty object"));
    }
    if s == "1" {
        return Ok(GroupObject::default());
    }
    let mut factors = Vec::new();
    for part in split_product(s)? {
        if part.is_empty() {
            return Err(parse_error(format!("empty factor in {s:?}")));
        }
        factors.extend(parse_factor(&part)?);
    }
    Ok(GroupObject { factors })
}
