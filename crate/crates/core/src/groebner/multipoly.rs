//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::order::MonomialOrder;
use crate::scalars::{parse_rational, Rational};

/// An ordered list of variable names. Rings compare equal when the names do.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Arc<Vec<String>>,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Ring { names: Arc::new(names.into_iter().map(Into::into).collect()) }
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Exponents, Rational>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected `{found}` at position {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::from_terms(ring, [(vec![0; ring.arity()], c)])
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Ring, index: usize) -> Self {
        let mut e = vec![0; ring.arity()];
        e[index] = 1;
        Self::from_terms(ring, [(e, Rational::one())])
    }

    /// Panics when `name` is not in the ring.
    pub fn var_named(ring: &Ring, name: &str) -> Self {
        Self::var(ring, ring.index_of(name).unwrap_or_else(|| panic!("no variable `{name}`")))
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.arity(), "exponent vector does not match the ring");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.arity()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.arity());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Sets variable `index` to `value`.
    pub fn substitute(&self, index: usize, value: &Rational) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                let k = std::mem::take(&mut e[index]);
                (e, c * num_traits::pow(value.clone(), k as usize))
            }),
        )
    }

    /// Reinterprets this polynomial in `ring`, matching variables by name.
    /// Panics when a used variable is missing from `ring`.
    pub fn change_ring(&self, ring: &Ring) -> Self {
        let map: Vec<Option<usize>> = self.ring.names().iter().map(|n| ring.index_of(n)).collect();
        Self::from_terms(
            ring,
            self.terms.iter().map(|(e, c)| {
                let mut out = vec![0; ring.arity()];
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        let j =
                            map[i].unwrap_or_else(|| panic!("`{}` is not in the target ring", self.ring.names()[i]));
                        out[j] = k;
                    }
                }
                (out, c.clone())
            }),
        )
    }

    pub fn leading_coeff(&self, ord: &MonomialOrder) -> Option<&Rational> {
        self.leading_monomial(ord).map(|e| &self.terms[e])
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<&Exponents> {
        self.terms.keys().max_by(|a, b| ord.cmp(a, b))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ord: &MonomialOrder) -> Self {
        match self.leading_coeff(ord) {
            Some(c) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    /// Terms sorted from largest to smallest under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { ring, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        match p.peek() {
            None => Ok(out),
            Some(c) => Err(ParseError::Unexpected { found: (c as char).to_string(), pos: p.pos }),
        }
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &-rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = MultiPoly::zero(&self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// Display order: degree-reverse-lexicographic with later ring variables
/// ranked higher, so output does not depend on the map layout.
fn display_order(ring: &Ring) -> MonomialOrder {
    MonomialOrder::degrevlex((0..ring.arity()).rev().collect())
}

fn monomial_text(ring: &Ring, e: &[u32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            let name = &ring.names()[i];
            if k == 1 {
                name.clone()
            } else {
                format!("{name}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.sorted_terms(&display_order(&self.ring)).into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (n, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            let abs = c.abs();
            let mono = monomial_text(&self.ring, e);
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'(' => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let k: u32 = digits.parse().map_err(|_| self.unexpected())?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&c) => ParseError::Unexpected { found: (c as char).to_string(), pos: self.pos },
            None => ParseError::UnexpectedEnd,
        }
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == b'/') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let q =
                    parse_rational(text).map_err(|_| ParseError::Unexpected { found: text.to_string(), pos: start })?;
                Ok(MultiPoly::constant(self.ring, q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self
                    .ring
                    .index_of(name)
                    .ok_or_else(|| ParseError::UnknownVariable { name: name.to_string(), pos: start })?;
                Ok(MultiPoly::var(self.ring, i))
            }
            _ => Err(self.unexpected()),
        }
    }
}
