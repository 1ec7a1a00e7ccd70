//! Recursive-descent parser for the canonical polynomial text form.
//!
//! Grammar: sums of products of powers, with rational literals `a` or
//! `a/b`, variable names `[A-Za-z_][A-Za-z0-9_.]*`, and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::PolyError;
use crate::poly::Poly;

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub fn parse_poly(input: &str) -> Result<Poly, PolyError> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err(format!("unexpected trailing input at byte {}", p.pos)));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, reason: String) -> PolyError {
        PolyError::Parse {
            input: self.input.to_owned(),
            reason,
        }
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

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.base()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            let e = self.uint()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`".to_owned())),
                }
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                Ok(Poly::var(name))
            }
            other => Err(self.err(format!("unexpected input: {other:?}"))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.input[start..self.pos].to_owned()
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent".to_owned()));
        }
        self.input[start..self.pos]
            .parse::<u32>()
            .map_err(|e| self.err(format!("bad exponent: {e}")))
    }

    fn bigint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer".to_owned()));
        }
        self.input[start..self.pos]
            .parse::<BigInt>()
            .map_err(|e| self.err(format!("bad integer: {e}")))
    }

    fn rational(&mut self) -> Result<Poly, PolyError> {
        let numer = self.bigint()?;
        if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let denom = self.bigint()?;
            if denom.is_zero() {
                return Err(self.err("zero denominator".to_owned()));
            }
            return Ok(Poly::constant(BigRational::new(numer, denom)));
        }
        Ok(Poly::constant(BigRational::from_integer(numer)))
    }
}

/// Parse a rational literal `a` or `a/b` (used for point coordinates).
pub fn parse_rat(input: &str) -> Result<BigRational, PolyError> {
    let s = input.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|e| PolyError::Parse {
            input: input.to_owned(),
            reason: format!("bad numerator: {e}"),
        })?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|e| PolyError::Parse {
            input: input.to_owned(),
            reason: format!("bad denominator: {e}"),
        })?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(PolyError::Parse {
            input: input.to_owned(),
            reason: "zero denominator".to_owned(),
        });
    }
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}
