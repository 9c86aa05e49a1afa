//! Dense univariate polynomials in `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalars::{Complex, Field, Mode, Rational, Scalar, ScalarError};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("substitution scale must be nonzero")]
    ZeroScale,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Degree of a polynomial; the zero polynomial has degree `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficients lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    /// `c * x^d`.
    pub fn monomial(c: F, d: usize) -> Self {
        let mut coeffs = vec![F::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// Builds from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an integer; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, at: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * F::from_i64(i as i64)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(x + shift)`, by repeated synthetic division.
    pub fn taylor_shift(&self, shift: &F) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // after pass k, c[k] holds the k-th Taylor coefficient at `shift`
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let carry = c[i + 1].clone() * shift.clone();
                c[i] = c[i].clone() + carry;
            }
        }
        Self::new(c)
    }

    /// `p(scale * y + offset)` as a polynomial in `y`.
    pub fn linear_substitute(&self, scale: &F, offset: &F) -> Result<Self, PolyError> {
        if scale.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        let shifted = self.taylor_shift(offset);
        let mut power = F::one();
        let coeffs = shifted
            .coeffs
            .into_iter()
            .map(|c| {
                let out = c * power.clone();
                power = power.clone() * scale.clone();
                out
            })
            .collect();
        Ok(Self::new(coeffs))
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    /// Coefficientwise comparison: exact for rationals, `tol`-relative for floats.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i).approx_eq(&other.coeff(i), tol))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_complex(&self) -> UniPoly<Complex> {
        self.map(Field::to_complex)
    }

    /// Drops the constant and linear terms.
    pub fn without_affine_part(&self) -> Self {
        let mut c = self.coeffs.clone();
        for slot in c.iter_mut().take(2) {
            *slot = F::zero();
        }
        Self::new(c)
    }
}

impl UniPoly<Rational> {
    pub fn to_float(&self) -> UniPoly<Complex> {
        self.to_complex()
    }
}

impl<F: Field> Add for &UniPoly<F> {
    type Output = UniPoly<F>;

    fn add(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &UniPoly<F> {
    type Output = UniPoly<F>;

    fn sub(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &UniPoly<F> {
    type Output = UniPoly<F>;

    fn mul(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;

    fn neg(self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> Add for UniPoly<F> {
    type Output = UniPoly<F>;

    fn add(self, rhs: UniPoly<F>) -> UniPoly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for UniPoly<F> {
    type Output = UniPoly<F>;

    fn sub(self, rhs: UniPoly<F>) -> UniPoly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for UniPoly<F> {
    type Output = UniPoly<F>;

    fn mul(self, rhs: UniPoly<F>) -> UniPoly<F> {
        &self * &rhs
    }
}

/// Canonical text: decreasing degree, signs folded into the separators,
/// e.g. `2x^5 - 20x^3 + 40x^2 - 30x + 8`.
impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, abs) = c.split_sign();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let body = if d > 0 && abs.is_unit_literal() { String::new() } else { abs.render() };
            f.write_str(&body)?;
            match d {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

/// A polynomial whose coefficient backend is chosen at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(UniPoly<Rational>),
    Float(UniPoly<Complex>),
}

impl AnyPoly {
    pub fn mode(&self) -> Mode {
        match self {
            AnyPoly::Exact(_) => Mode::Exact,
            AnyPoly::Float(_) => Mode::Float,
        }
    }

    pub fn degree(&self) -> Degree {
        match self {
            AnyPoly::Exact(p) => p.degree(),
            AnyPoly::Float(p) => p.degree(),
        }
    }

    pub fn to_float(&self) -> UniPoly<Complex> {
        match self {
            AnyPoly::Exact(p) => p.to_float(),
            AnyPoly::Float(p) => p.clone(),
        }
    }

    pub fn taylor_shift(&self, shift: &Scalar) -> Result<AnyPoly, PolyError> {
        match (self, shift) {
            (AnyPoly::Exact(p), Scalar::Exact(s)) => Ok(AnyPoly::Exact(p.taylor_shift(s))),
            (AnyPoly::Float(p), Scalar::Float(s)) => Ok(AnyPoly::Float(p.taylor_shift(s))),
            _ => Err(ScalarError::ModeMismatch.into()),
        }
    }

    pub fn linear_substitute(&self, scale: &Scalar, offset: &Scalar) -> Result<AnyPoly, PolyError> {
        match (self, scale, offset) {
            (AnyPoly::Exact(p), Scalar::Exact(c), Scalar::Exact(d)) => p.linear_substitute(c, d).map(AnyPoly::Exact),
            (AnyPoly::Float(p), Scalar::Float(c), Scalar::Float(d)) => p.linear_substitute(c, d).map(AnyPoly::Float),
            _ => Err(ScalarError::ModeMismatch.into()),
        }
    }

    pub fn derivative(&self) -> AnyPoly {
        match self {
            AnyPoly::Exact(p) => AnyPoly::Exact(p.derivative()),
            AnyPoly::Float(p) => AnyPoly::Float(p.derivative()),
        }
    }
}

impl fmt::Display for AnyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyPoly::Exact(p) => p.fmt(f),
            AnyPoly::Float(p) => p.fmt(f),
        }
    }
}
