//! Text grammar for scalars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor | factor)*     -- juxtaposition multiplies
//! factor := ('+' | '-') factor | atom ('^' digits)?
//! atom   := digits | variable | '(' expr ')'
//! ```
//!
//! Juxtaposition has the same precedence as `*` and `/` and associates to
//! the left, so `1/2t` means `(1/2)·t` and `3t^2` means `3·t²`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use super::poly::{Coef, Poly};
use super::{FieldError, FieldSpec, Fp, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected {found} at byte {pos} in {input:?}")]
    Unexpected {
        input: String,
        pos: usize,
        found: String,
    },
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("exponent too large: {0}")]
    Exponent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].to_string())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphabetic() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Unexpected {
                input: s.to_string(),
                pos: i,
                found: format!("character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    k: &'a FieldSpec,
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err_here(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((p, t)) => ParseError::Unexpected {
                input: self.src.to_string(),
                pos: *p,
                found: format!("{t:?}"),
            },
            None => ParseError::Unexpected {
                input: self.src.to_string(),
                pos: self.src.len(),
                found: "end of input".into(),
            },
        }
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                acc.try_add(&rhs)?
            } else {
                acc.try_sub(&rhs)?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.try_mul(&rhs)?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.try_div(&rhs)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let rhs = self.factor()?;
                    acc = acc.try_mul(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(Tok::Op('^')) = self.peek() {
                    self.pos += 1;
                    let e = match self.peek() {
                        Some(Tok::Num(d)) => d.clone(),
                        _ => return Err(self.err_here()),
                    };
                    self.pos += 1;
                    let e: u32 = e
                        .parse()
                        .ok()
                        .filter(|&e| e <= 4096)
                        .ok_or(ParseError::Exponent(e))?;
                    let mut acc = base.one_like();
                    for _ in 0..e {
                        acc = acc.try_mul(&base)?;
                    }
                    Ok(acc)
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(d)) => {
                self.pos += 1;
                let n = BigInt::from_str(&d).expect("lexed digits");
                Ok(self.k.from_base_rational(&BigRational::from_integer(n))?)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.k.variable() == Some(name.as_str()) {
                    Ok(self.k.var()?)
                } else {
                    Err(ParseError::UnknownIdent(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(self.err_here()),
                }
            }
            _ => Err(self.err_here()),
        }
    }
}

pub(super) fn parse_scalar(k: &FieldSpec, s: &str) -> Result<Scalar, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser {
        k,
        src: s,
        toks,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here());
    }
    Ok(v)
}

/// How one base coefficient prints inside a polynomial.
trait CoefFmt: Coef {
    /// (is_negative, magnitude text, magnitude is one, magnitude is an integer)
    fn parts(&self) -> (bool, String, bool, bool);
}

impl CoefFmt for BigRational {
    fn parts(&self) -> (bool, String, bool, bool) {
        let a = self.abs();
        (
            self.is_negative(),
            a.to_string(),
            One::is_one(&a),
            a.is_integer(),
        )
    }
}

impl CoefFmt for Fp {
    fn parts(&self) -> (bool, String, bool, bool) {
        (false, self.value().to_string(), self.value() == 1, true)
    }
}

fn format_poly<C: CoefFmt>(p: &Poly<C>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (neg, mag, unit, integral) = c.parts();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&mag);
        } else if unit {
            out.push_str(&mono);
        } else if integral {
            out.push_str(&mag);
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

fn is_single_term<C: Coef>(p: &Poly<C>) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
}

fn format_fraction<C: CoefFmt>(num: &Poly<C>, den: &Poly<C>, var: &str) -> String {
    let n = format_poly(num, var);
    if den.is_one() {
        return n;
    }
    let n = if is_single_term(num) {
        n
    } else {
        format!("({n})")
    };
    let pure_power = is_single_term(den) && den.lc().is_some_and(|c| c.is_one());
    let d = format_poly(den, var);
    let d = if pure_power { d } else { format!("({d})") };
    format!("{n}/{d}")
}

pub(super) fn format_scalar(a: &Scalar, var: &str) -> String {
    match a {
        Scalar::Rational(q) => q.to_string(),
        Scalar::Residue(r) => r.value().to_string(),
        Scalar::RationalFn(f) => format_fraction(f.num(), f.den(), var),
        Scalar::ResidueFn(f) => format_fraction(f.num(), f.den(), var),
    }
}

pub(super) fn format_base(a: &Scalar) -> String {
    format_scalar(a, "t")
}
