//! Shorthand syntax for exact complex numbers.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | atom
//! atom   := NUMBER ['i'] | 'i' | 'rho' | 'sqrt' NUMBER | 'sqrt' '(' ['-'] NUMBER ')' | '(' expr ')'
//! ```
//! `NUMBER` is an integer or a finite decimal, read exactly.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::exact::ExactComplex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
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
            let text: String = chars[start..k].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number {text:?}"));
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| bad())?;
    let den = Integer::from(10).pow(frac.len() as u32);
    Ok(Rational::from((n, den)))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
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

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<ExactComplex> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExactComplex> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| self.err("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExactComplex> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn sqrt_arg(&mut self) -> Result<ExactComplex> {
        let (neg, q) = match self.next() {
            Some(Tok::Num(q)) => (false, q),
            Some(Tok::Op('(')) => {
                let neg = matches!(self.peek(), Some(Tok::Op('-')));
                if neg {
                    self.pos += 1;
                }
                let Some(Tok::Num(q)) = self.next() else {
                    return Err(self.err("sqrt expects an integer"));
                };
                if self.next() != Some(Tok::Op(')')) {
                    return Err(self.err("missing ')'"));
                }
                (neg, q)
            }
            _ => return Err(self.err("sqrt expects an integer")),
        };
        if *q.denom() != 1 {
            return Err(self.err("sqrt of a non-integer"));
        }
        let n = q.numer().to_u64().ok_or_else(|| self.err("sqrt argument out of range"))?;
        let r = ExactComplex::sqrt_of(n)?;
        Ok(if neg { r.mul_i() } else { r })
    }

    fn atom(&mut self) -> Result<ExactComplex> {
        match self.next() {
            Some(Tok::Num(q)) => {
                let z = ExactComplex::from_rational(q);
                if let Some(Tok::Ident(id)) = self.peek() {
                    if id == "i" {
                        self.pos += 1;
                        return Ok(z.mul_i());
                    }
                }
                Ok(z)
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "i" => Ok(ExactComplex::i()),
                "rho" => Ok(ExactComplex::rho()),
                "sqrt" => self.sqrt_arg(),
                other => Err(self.err(&format!("unknown name {other:?}"))),
            },
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::Op(')')) {
                    return Err(self.err("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

/// Parses shorthand such as `"1+1i"`, `"sqrt3*(1+1i)"`, `"1/2 + sqrt5*1i"`.
pub fn parse_exact(s: &str) -> Result<ExactComplex> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, src: s.to_string() };
    let z = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_forms() {
        assert_eq!(parse_exact("1+1i").unwrap(), ExactComplex::from_gaussian(1, 1));
        assert_eq!(parse_exact("i").unwrap(), ExactComplex::i());
        let a = parse_exact("sqrt3*(1+1i)").unwrap();
        assert_eq!(a.abs_squared().to_rational(), Some(Rational::from(6)));
        let b = parse_exact("1/2 + sqrt5*1i").unwrap();
        assert_eq!(b.re().to_rational(), Some(Rational::from((1, 2))));
        assert_eq!(b.im().square().to_rational(), Some(Rational::from(5)));
        assert_eq!(parse_exact("sqrt(-2)").unwrap(), ExactComplex::sqrt_of(2).unwrap().mul_i());
        assert_eq!(parse_exact("0.25").unwrap(), ExactComplex::from_rational(Rational::from((1, 4))));
        let c = parse_exact("(sqrt2-1)/2 + sqrt2/2*1i").unwrap();
        assert_eq!(c.field().generators(), &[2]);
        assert_eq!(parse_exact("rho").unwrap(), ExactComplex::rho());
    }

    #[test]
    fn errors() {
        for bad in ["", "1+", "sqrt", "foo", "(1", "1)", "1/0", "2 # 3", "sqrt(1/2)"] {
            assert!(matches!(parse_exact(bad), Err(Error::Parse(_))), "{bad}");
        }
    }
}
