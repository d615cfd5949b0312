//! Text grammar for polynomials:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := 'X' index ['^' exponent] | integer | '(' element ')'
//! ```
//!
//! Whitespace is ignored. `0` is the zero polynomial.

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

struct Parser<'a> {
    src: &'a str,
    bytes: Vec<(usize, u8)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let bytes = src
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        Self { src, bytes, pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).map(|(_, b)| *b)
    }

    fn offset(&self) -> usize {
        self.bytes
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.src.len())
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut n: u64 = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            n = n
                .checked_mul(10)
                .and_then(|n| n.checked_add((b - b'0') as u64))
                .ok_or_else(|| self.error("integer too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(n)
    }
}

pub(super) fn parse_polynomial(text: &str, field: &FieldSpec, nvars: usize) -> Result<Polynomial> {
    let mut ps = Parser::new(text);
    let mut out = Polynomial::zero(field, nvars);
    if ps.peek().is_none() {
        return Err(ps.error("empty polynomial"));
    }
    let mut first = true;
    while ps.peek().is_some() {
        let negative = match ps.peek() {
            Some(b'+') => {
                ps.pos += 1;
                false
            }
            Some(b'-') => {
                ps.pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(ps.error("expected '+' or '-'")),
        };
        first = false;
        let (m, c) = parse_term(&mut ps, field, nvars)?;
        out.add_term(m, if negative { field.neg(c) } else { c });
    }
    Ok(out)
}

fn parse_term(ps: &mut Parser<'_>, field: &FieldSpec, nvars: usize) -> Result<(Monomial, u64)> {
    let mut exps = [0u32; super::MAX_VARS];
    let mut coef = 1u64;
    loop {
        match ps.peek() {
            Some(b'X') | Some(b'x') => {
                ps.pos += 1;
                let idx = ps.number()? as usize;
                if idx >= nvars {
                    return Err(Error::VariableOutOfRange { index: idx, nvars });
                }
                let mut e = 1u64;
                if ps.peek() == Some(b'^') {
                    ps.pos += 1;
                    e = ps.number()?;
                }
                let e = u32::try_from(e).map_err(|_| ps.error("exponent too large"))?;
                exps[idx] += e;
            }
            Some(b) if b.is_ascii_digit() => {
                let n = ps.number()?;
                if n >= field.characteristic() {
                    return Err(Error::CoefficientOutOfField(n.to_string()));
                }
                coef = field.mul(coef, n);
            }
            Some(b'(') => {
                let start = ps.offset();
                let mut depth = 0;
                loop {
                    match ps.peek() {
                        Some(b'(') => depth += 1,
                        Some(b')') => {
                            depth -= 1;
                            if depth == 0 {
                                ps.pos += 1;
                                break;
                            }
                        }
                        None => return Err(ps.error("unclosed '('")),
                        _ => {}
                    }
                    ps.pos += 1;
                }
                let end = ps.bytes[ps.pos - 1].0 + 1;
                let v = field.parse_raw(&ps.src[start..end])?;
                coef = field.mul(coef, v);
            }
            _ => return Err(ps.error("expected a variable or coefficient")),
        }
        if ps.peek() == Some(b'*') {
            ps.pos += 1;
        } else {
            break;
        }
    }
    Ok((Monomial::from_exponents(&exps[..nvars]), coef))
}
