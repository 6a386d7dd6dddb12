//! Polynomial text format.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := power ('*' power)*
//! power   := atom ['^' integer]
//! atom    := number | variable | '(' expr ')'
//! number  := integer ['/' integer]
//! ```
//!
//! A `/` is only accepted between two integer literals, so `2/3*X1` is a
//! rational coefficient while `X1/2` is rejected. Juxtaposition such as
//! `2X1` or `X1 X2` is an error.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::poly::{Monomial, MultiPoly, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(err(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: &'a [String],
    ctx: &'a F::Ctx,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MultiPoly<F>> {
        let mut acc = MultiPoly::zero(self.nvars(), self.ctx);
        let mut sign_neg = match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign_neg { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => sign_neg = false,
                Some(Tok::Minus) => sign_neg = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MultiPoly<F>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return Err(err(self.here(), "implicit multiplication is not allowed, use '*'"));
                }
                Some(Tok::Slash) => return Err(err(self.here(), "division is not supported")),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly<F>> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        let e = match self.peek() {
            Some(Tok::Int(v)) => v.clone(),
            _ => return Err(err(at, "expected a nonnegative integer exponent")),
        };
        self.pos += 1;
        let e: u32 = e
            .try_into()
            .ok()
            .filter(|&e: &u32| e <= MAX_DEGREE)
            .ok_or_else(|| err(at, format!("exponent exceeds {MAX_DEGREE}")))?;
        if let Some(deg) = base.degree() {
            if deg as u64 * e as u64 > MAX_DEGREE as u64 {
                return Err(err(at, format!("degree exceeds {MAX_DEGREE}")));
            }
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly<F>> {
        let at = self.here();
        let tok = self.peek().cloned().ok_or_else(|| err(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(num) => {
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let dat = self.here();
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) => {
                            self.pos += 1;
                            if den.is_zero() {
                                return Err(err(dat, "zero denominator"));
                            }
                            q /= Rational::from_integer(den);
                        }
                        _ => return Err(err(dat, "division is not supported; '/' only forms rational literals")),
                    }
                }
                let c = F::from_rational(self.ctx, &q)
                    .ok_or_else(|| err(at, format!("literal {q} is not defined in this field")))?;
                Ok(MultiPoly::constant(self.nvars(), c))
            }
            Tok::Ident(name) => match self.names.iter().position(|n| *n == name) {
                Some(i) => Ok(MultiPoly::var(self.nvars(), i, self.ctx)),
                None => Err(err(at, format!("unknown variable '{name}'"))),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Slash => Err(err(at, "division is not supported")),
            t => Err(err(at, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses `text` as a polynomial in the variables `names`.
pub fn parse_poly<F: Field>(text: &str, names: &[String], ctx: &F::Ctx) -> Result<MultiPoly<F>> {
    if names.len() > crate::poly::MAX_VARS {
        return Err(Error::Validation(format!("at most {} variables", crate::poly::MAX_VARS)));
    }
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut p = Parser::<F> { toks, pos: 0, end: text.len(), names, ctx };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        let at = p.here();
        return Err(match p.peek() {
            Some(Tok::RParen) => err(at, "unbalanced ')'"),
            Some(Tok::Slash) => err(at, "division is not supported"),
            _ => err(at, "unexpected trailing input"),
        });
    }
    Ok(out)
}

/// Prints in the same grammar, terms in decreasing graded lex order.
pub fn format_poly<F: Field>(p: &MultiPoly<F>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = c.signed_parts();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if *m == Monomial::ONE {
            s.push_str(&mag);
        } else if mag == "1" {
            s.push_str(&m.fmt_with(names));
        } else {
            s.push_str(&mag);
            s.push('*');
            s.push_str(&m.fmt_with(names));
        }
    }
    s
}

/// Default names `prefix{start}, prefix{start+1}, ...`.
pub fn default_names(prefix: &str, start: usize, count: usize) -> Vec<String> {
    (start..start + count).map(|i| format!("{prefix}{i}")).collect()
}
