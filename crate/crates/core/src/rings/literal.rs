//! Element literal grammar:
//!
//! ```text
//! integer  ::= '-'? digits
//! fraction ::= integer '/' digits        (Zloc only)
//! series   ::= '[' literal (',' literal)* ']'
//! ```
//!
//! Whitespace between tokens is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Elem, Ring, RingSpec};
use crate::error::{Error, Result};

pub(crate) struct LiteralParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> LiteralParser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, token: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(
                self.pos,
                format!("expected '{}'", token as char),
            ))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(Error::parse(self.pos, "unexpected trailing input"))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        Ok(self.text[start..self.pos].parse().expect("ascii digits"))
    }

    pub(crate) fn literal(&mut self, ring: &Ring) -> Result<Elem> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'[') {
            let (base, order) = match (ring.base(), ring.order()) {
                (Some(b), Some(o)) => (b, o),
                _ => {
                    return Err(Error::parse(
                        start,
                        format!("series literal in non-series ring {ring}"),
                    ))
                }
            };
            self.pos += 1;
            let mut coeffs = vec![self.literal(base)?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        coeffs.push(self.literal(base)?);
                    }
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(Error::parse(self.pos, "expected ',' or ']'")),
                }
            }
            if coeffs.len() > order {
                return Err(Error::parse(
                    start,
                    format!(
                        "{} coefficients exceed truncation order {order}",
                        coeffs.len()
                    ),
                ));
            }
            return ring.series_from_coeffs(coeffs);
        }

        if let Some(base) = ring.base() {
            // plain literal in a series ring: a constant
            let c = self.literal(base)?;
            return ring.series_from_coeffs(vec![c]);
        }

        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let mut num = self.digits()?;
        if negative {
            num = -num;
        }
        if self.peek() != Some(b'/') {
            return Ok(ring.from_bigint(&num));
        }
        if !matches!(ring.spec(), RingSpec::Zloc { .. }) {
            return Err(Error::parse(
                self.pos,
                format!("fraction literal in {ring}"),
            ));
        }
        self.pos += 1;
        let den = self.digits()?;
        if den.is_zero() {
            return Err(Error::parse(start, "zero denominator"));
        }
        ring.from_ratio(BigRational::new(num, den))
    }
}

impl Ring {
    /// Parses one element literal into this ring.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let mut parser = LiteralParser::new(text);
        let e = parser.literal(self)?;
        parser.finish()?;
        Ok(e)
    }
}
