//! Polynomial expressions in `x`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*'? factor)*
//! factor := base ('^' uint)?
//! base   := 'x' | number | '(' expr ')'
//! number := int | int '/' uint | decimal
//! ```
//!
//! Juxtaposition multiplies (`3x^2`, `2(x+1)`). Any decimal literal makes
//! the result a float polynomial; otherwise it is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use quadrat::scalars::Rational;
use quadrat::{AnyPoly, UniPoly};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// Parsed polynomial with exact coefficients, plus whether a decimal
/// literal appeared.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub poly: UniPoly<Rational>,
    pub has_decimal: bool,
}

impl Parsed {
    /// Float when a decimal appeared, exact otherwise.
    pub fn auto(self) -> AnyPoly {
        if self.has_decimal {
            AnyPoly::Float(self.poly.to_float())
        } else {
            AnyPoly::Exact(self.poly)
        }
    }
}

pub fn parse_poly(text: &str) -> Result<AnyPoly, ParseError> {
    Ok(parse_exact(text)?.auto())
}

pub fn parse_exact(text: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, has_decimal: false };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(Parsed { poly, has_decimal: p.has_decimal })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    has_decimal: bool,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<UniPoly<Rational>, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<UniPoly<Rational>, ParseError> {
        let negate = self.peek() == Some(b'-');
        if negate {
            self.pos += 1;
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'x' | b'(') => acc = &acc * &self.factor()?,
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    return Err(self.error("a number must come before `x`, not after"));
                }
                _ => break,
            }
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn factor(&mut self) -> Result<UniPoly<Rational>, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let is_fraction = self.src.get(self.pos).is_some_and(|c| *c == b'.' || *c == b'/');
        if start == self.pos || is_fraction {
            return Err(ParseError { pos: start, message: "exponent must be a nonnegative integer".into() });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let e: u32 = digits.parse().map_err(|_| ParseError { pos: start, message: "exponent is too large".into() })?;
        Ok(base.pow(e))
    }

    fn base(&mut self) -> Result<UniPoly<Rational>, ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(UniPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(UniPoly::constant(self.number()?)),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let int = self.digits().to_string();
        match self.src.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                let frac = self.digits().to_string();
                if int.is_empty() && frac.is_empty() {
                    return Err(ParseError { pos: start, message: "malformed decimal".into() });
                }
                self.has_decimal = true;
                let scale = BigInt::from(10u32).pow(frac.len() as u32);
                let whole: BigInt = format!("{int}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
                Ok(Rational::new(whole, scale))
            }
            Some(b'/') => {
                self.pos += 1;
                let den = self.digits().to_string();
                if den.is_empty() {
                    return Err(self.error("expected a denominator"));
                }
                let den: BigInt = den.parse().expect("digits");
                if den.is_zero() {
                    return Err(ParseError { pos: start, message: "zero denominator".into() });
                }
                Ok(Rational::new(int.parse().expect("digits"), den))
            }
            _ => Ok(Rational::from_integer(int.parse().unwrap_or_else(|_| BigInt::one()))),
        }
    }
}
