//! Values-file expressions: decimal literals, `i`, `pi`, the lattice symbols
//! `lambda1 lambda2 eta1 eta2`, `+ - *`, unary minus and parentheses.

use realdescent::arith::bigcomplex::pi;
use realdescent::weierstrass::{Lattice, Weierstrass};
use realdescent::{BigComplex, Error, PrecisionContext, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(String),
    Imag(String),
    Sym(Symbol),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    I,
    Pi,
    Lambda1,
    Lambda2,
    Eta1,
    Eta2,
}

impl Symbol {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "i" => Symbol::I,
            "pi" => Symbol::Pi,
            "lambda1" => Symbol::Lambda1,
            "lambda2" => Symbol::Lambda2,
            "eta1" => Symbol::Eta1,
            "eta2" => Symbol::Eta2,
            _ => return None,
        })
    }

    fn needs_lattice(self) -> bool {
        !matches!(self, Symbol::I | Symbol::Pi)
    }
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // exponent part: 1e-5, 2.5E+3
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            out.push(Tok::Num(chars[start..k].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*()".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            e = Expr::Bin(op, Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.pos += 1;
            e = Expr::Bin('*', Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => {
                // `2i` and `0.5i` are imaginary literals
                if let Some(Tok::Ident(s)) = self.peek() {
                    if s == "i" {
                        self.pos += 1;
                        return Ok(Expr::Imag(n));
                    }
                }
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                Symbol::from_name(&s).map(Expr::Sym).ok_or_else(|| Error::Parse(format!("unknown symbol {s:?}")))
            }
            Some(Tok::Op('(')) => {
                let e = self.sum()?;
                match self.next() {
                    Some(Tok::Op(')')) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

impl Expr {
    pub fn needs_lattice(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Imag(_) => false,
            Expr::Sym(s) => s.needs_lattice(),
            Expr::Neg(a) => a.needs_lattice(),
            Expr::Bin(_, a, b) => a.needs_lattice() || b.needs_lattice(),
        }
    }
}

/// Values of the symbols at one precision.
pub struct Env {
    bits: u32,
    periods: Option<[BigComplex; 4]>,
}

impl Env {
    pub fn new(lattice: Option<&Lattice>, ctx: &PrecisionContext) -> Result<Self> {
        let periods = match lattice {
            Some(l) => {
                let w = Weierstrass::new(l, ctx)?;
                let (l1, l2) = l.basis(w.bits());
                let (e1, e2) = w.basis_etas()?;
                Some([l1, l2, e1, e2])
            }
            None => None,
        };
        Ok(Env { bits: ctx.work_bits(), periods })
    }

    /// Numbers without lattice symbols.
    pub fn plain(bits: u32) -> Self {
        Env { bits, periods: None }
    }

    fn symbol(&self, s: Symbol) -> Result<BigComplex> {
        let idx = match s {
            Symbol::I => return Ok(BigComplex::i(self.bits)),
            Symbol::Pi => return Ok(BigComplex::from_real(pi(self.bits))),
            Symbol::Lambda1 => 0,
            Symbol::Lambda2 => 1,
            Symbol::Eta1 => 2,
            Symbol::Eta2 => 3,
        };
        self.periods
            .as_ref()
            .map(|p| p[idx].clone())
            .ok_or_else(|| Error::Parse(format!("{s:?} needs a lattice (--tau)")))
    }

    pub fn eval(&self, e: &Expr) -> Result<BigComplex> {
        Ok(match e {
            Expr::Num(n) => BigComplex::parse_real(n, self.bits)?,
            Expr::Imag(n) => BigComplex::parse_real(n, self.bits)?.mul_i(),
            Expr::Sym(s) => self.symbol(*s)?,
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    '+' => x.add(&y),
                    '-' => x.sub(&y),
                    _ => x.mul(&y),
                }
            }
        })
    }
}

/// A complex number written with decimals and `i`, e.g. `0.2 + 0.1i`.
pub fn numeric(s: &str, bits: u32) -> Result<BigComplex> {
    let e = parse(s)?;
    if e.needs_lattice() {
        return Err(Error::Parse(format!("{s:?} must be a plain number")));
    }
    let v = Env::plain(bits).eval(&e)?;
    if !v.is_finite() {
        return Err(Error::NonFinite(s.into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_literals() {
        let bits = 128;
        let v = numeric("1 + 2*3 - -0.5i", bits).unwrap();
        assert_eq!(v.to_f64_pair(), (7.0, 0.5));
        let v = numeric("(1+1i)*(1-1i)", bits).unwrap();
        assert_eq!(v.to_f64_pair(), (2.0, 0.0));
        assert_eq!(numeric("1e-3", bits).unwrap().to_f64_pair().0, 1e-3);
    }

    #[test]
    fn rejects_unknown_and_lattice_symbols_without_lattice() {
        assert!(parse("foo + 1").is_err());
        assert!(parse("(1 + 2").is_err());
        assert!(parse("1 2").is_err());
        assert!(numeric("eta1", 64).is_err());
        assert!(parse("eta1*lambda2 - eta2*lambda1").unwrap().needs_lattice());
    }

    #[test]
    fn legendre_expression_evaluates_to_two_pi_i() {
        let ctx = PrecisionContext::new(30).unwrap();
        let l = Lattice::from_tau(&realdescent::arith::parse_exact("i").unwrap()).unwrap();
        let env = Env::new(Some(&l), &ctx).unwrap();
        let v = env.eval(&parse("eta1*lambda2 - eta2*lambda1 - 2*pi*i").unwrap()).unwrap();
        assert!(v.abs() < 1e-30);
    }
}
