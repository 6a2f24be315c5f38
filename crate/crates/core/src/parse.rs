//! Text form of input polynomials: either an expression in one variable
//! like `x^3 - 2` or `2174026154062500000*x^25 - ...` (the `*` is
//! optional), or a bracketed coefficient list low-to-high like
//! `[-2, 0, 1]`. Coefficients are arbitrary-precision decimal integers.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyz::IntPoly;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_from = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_from {
            self.pos = start;
            return self.err("expected an integer");
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            return self.err("non-integer coefficient");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().expect("validated digits"))
    }

    fn unsigned(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an exponent");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::Parse {
            position: start,
            message: "exponent too large".to_string(),
        })
    }
}

fn parse_bracket_list(cur: &mut Cursor) -> Result<IntPoly> {
    cur.bump(); // consume '['
    let mut coeffs = Vec::new();
    if cur.peek() == Some(b']') {
        cur.bump();
        return Ok(IntPoly::new(coeffs));
    }
    loop {
        coeffs.push(cur.integer()?);
        match cur.bump() {
            Some(b',') => continue,
            Some(b']') => break,
            _ => return cur.err("expected ',' or ']'"),
        }
    }
    Ok(IntPoly::new(coeffs))
}

/// One term: optional sign handled by the caller; here
/// `coeff`, `coeff*x^k`, `coeff x^k`, `x^k`, `x`.
fn parse_term(cur: &mut Cursor) -> Result<(BigInt, usize)> {
    let mut coeff = BigInt::from(1);
    let mut saw_coeff = false;
    if cur.peek().map_or(false, |c| c.is_ascii_digit()) {
        coeff = cur.integer()?;
        saw_coeff = true;
        if cur.peek() == Some(b'*') {
            cur.bump();
        }
    }
    match cur.peek() {
        Some(b'x') | Some(b'X') => {
            cur.bump();
            if cur.peek() == Some(b'^') {
                cur.bump();
                let e = cur.unsigned()?;
                Ok((coeff, e))
            } else {
                Ok((coeff, 1))
            }
        }
        _ if saw_coeff => Ok((coeff, 0)),
        _ => cur.err("expected a coefficient or 'x'"),
    }
}

fn parse_expression(cur: &mut Cursor) -> Result<IntPoly> {
    let mut acc: Vec<BigInt> = Vec::new();
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            Some(b'+') => {
                cur.bump();
                1
            }
            Some(b'-') => {
                cur.bump();
                -1
            }
            Some(_) if first => 1,
            None if first => return cur.err("empty polynomial"),
            None => break,
            Some(_) => return cur.err("expected '+' or '-'"),
        };
        first = false;
        let (c, e) = parse_term(cur)?;
        if acc.len() <= e {
            acc.resize(e + 1, BigInt::zero());
        }
        acc[e] += c * BigInt::from(sign);
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(IntPoly::new(acc))
}

/// Parse a polynomial from either text form. Errors carry the byte
/// position; the zero polynomial is rejected.
pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let mut cur = Cursor::new(text);
    let poly = match cur.peek() {
        Some(b'[') => parse_bracket_list(&mut cur)?,
        Some(_) => parse_expression(&mut cur)?,
        None => return cur.err("empty input"),
    };
    cur.skip_ws();
    if cur.pos != cur.bytes.len() {
        return cur.err("trailing input");
    }
    if poly.is_zero() {
        return Err(Error::Parse {
            position: 0,
            message: "zero polynomial".to_string(),
        });
    }
    Ok(poly)
}
