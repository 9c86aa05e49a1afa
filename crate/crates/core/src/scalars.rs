//! Coefficient arithmetic.
//!
//! Polynomials are generic over a [`Field`], with two implementations:
//! [`Rational`] (exact, arbitrary precision) and [`Complex`] (two `f64`s).
//! Code that picks its backend at run time goes through the mode-tagged
//! [`Scalar`], where combining an exact value with a float value is an error.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, SolveError};

pub type Rational = num_rational::BigRational;
pub type Complex = num_complex::Complex64;

/// Default tolerance for float equality and rank decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Tolerance used when refining float roots.
pub const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ScalarError {
    #[error("cannot combine an exact and a float value")]
    ModeMismatch,
    #[error("{value} has no exact rational {k}-th root")]
    ExactRootUnavailable { value: String, k: u32 },
    #[error("root index must be positive")]
    InvalidRootIndex,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    InvalidLiteral(String),
}

/// Field operations shared by both coefficient backends.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Absolute value as a float; used for pivoting and residual norms.
    fn magnitude(&self) -> f64;

    /// Zero test. Exact values ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    /// `|a - b| <= tol * max(1, |a|, |b|)` for floats, equality for exact values.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// A `k`-th root, or `None` if the backend cannot represent one.
    fn nth_root(&self, k: u32) -> Option<Self>;

    fn to_complex(&self) -> Complex;

    fn to_scalar(&self) -> Scalar;

    /// Solves `sum_j c_j * columns[j] = target`; see [`crate::linalg`].
    fn solve_span(columns: &[Vec<Self>], target: &[Self], tol: f64) -> Result<Option<Vec<Self>>, SolveError>;

    /// Splits off a leading minus sign for rendering: `(negative, |self|)`.
    /// Values without a meaningful sign (non-real complex) return `(false, self)`.
    fn split_sign(&self) -> (bool, Self);

    /// Whether the coefficient can be omitted in front of a power of `x`.
    fn is_unit_literal(&self) -> bool;

    /// Text form used by the polynomial renderer.
    fn render(&self) -> String;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Field for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        exact_nth_root(self, k)
    }

    fn to_complex(&self) -> Complex {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn solve_span(columns: &[Vec<Self>], target: &[Self], _tol: f64) -> Result<Option<Vec<Self>>, SolveError> {
        Ok(linalg::solve_exact(columns, target))
    }

    fn split_sign(&self) -> (bool, Self) {
        (self.is_negative(), self.abs())
    }

    fn is_unit_literal(&self) -> bool {
        self.is_one()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for Complex {
    const MODE: Mode = Mode::Float;

    fn from_rational(q: &Rational) -> Self {
        Complex::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        float_approx_eq(*self, *other, tol)
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        Some(principal_root(*self, k))
    }

    fn to_complex(&self) -> Complex {
        *self
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }

    fn solve_span(columns: &[Vec<Self>], target: &[Self], tol: f64) -> Result<Option<Vec<Self>>, SolveError> {
        linalg::solve_float(columns, target, tol)
    }

    fn split_sign(&self) -> (bool, Self) {
        if self.im == 0.0 && self.re.is_sign_negative() && self.re != 0.0 {
            (true, -*self)
        } else {
            (false, *self)
        }
    }

    fn is_unit_literal(&self) -> bool {
        false
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{:?}", self.re)
        } else {
            let sign = if self.im.is_sign_negative() { '-' } else { '+' };
            format!("({:?}{}{:?}i)", self.re, sign, self.im.abs())
        }
    }
}

fn float_approx_eq(a: Complex, b: Complex, tol: f64) -> bool {
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= tol * scale
}

/// Principal branch root, Newton-polished to [`ROOT_TOLERANCE`].
fn principal_root(s: Complex, k: u32) -> Complex {
    if s == Complex::zero() {
        return s;
    }
    let mut arg = s.arg();
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    let mut w = Complex::from_polar(s.norm().powf(1.0 / k as f64), arg / k as f64);
    let kf = k as f64;
    for _ in 0..8 {
        let wk1 = w.powu(k - 1);
        let step = (wk1 * w - s) / (wk1 * kf);
        w -= step;
        if step.norm() <= ROOT_TOLERANCE * w.norm() {
            break;
        }
    }
    w
}

fn exact_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let negative = q.is_negative();
    if negative && k.is_multiple_of(2) {
        return None;
    }
    let root_of = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
    };
    let num = root_of(&q.numer().abs())?;
    let den = root_of(q.denom())?;
    let r = Rational::new(num, den);
    Some(if negative { -r } else { r })
}

/// Parses `"a/b"` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::InvalidLiteral(text.to_string());
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// JSON rendering of a complex float: `re±im i`, 17 significant digits.
pub fn format_complex(c: Complex) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", c.re, sign, c.im.abs())
}

/// A mode-tagged coefficient.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(Complex),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex::new(re, im))
    }

    /// Converts to float mode. Float values pass through unchanged.
    pub fn to_float(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Float(Complex::from_rational(q)),
            Scalar::Float(c) => Scalar::Float(*c),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn as_float(&self) -> Option<Complex> {
        match self {
            Scalar::Float(c) => Some(*c),
            Scalar::Exact(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(c) => c.is_zero(),
        }
    }

    fn binary(
        &self,
        other: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(Complex, Complex) -> Complex,
    ) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(ScalarError::ModeMismatch),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.binary(other, |a, b| a / b, |a, b| a / b)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Float(c) => Scalar::Float(-c),
        }
    }

    /// Tolerance-aware equality; exact values compare exactly.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> Result<bool, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a == b),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(float_approx_eq(*a, *b, tol)),
            _ => Err(ScalarError::ModeMismatch),
        }
    }

    /// `k`-th root. Exact mode requires a rational root; float mode returns
    /// the principal branch (argument in `(-pi/k, pi/k]`).
    pub fn nth_root(&self, k: u32) -> Result<Scalar, ScalarError> {
        if k == 0 {
            return Err(ScalarError::InvalidRootIndex);
        }
        match self {
            Scalar::Exact(q) => exact_nth_root(q, k)
                .map(Scalar::Exact)
                .ok_or_else(|| ScalarError::ExactRootUnavailable { value: q.to_string(), k }),
            Scalar::Float(c) => Ok(Scalar::Float(principal_root(*c, k))),
        }
    }

    pub fn powu(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Field::pow(q, e)),
            Scalar::Float(c) => Scalar::Float(c.powu(e)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(c) => f.write_str(&format_complex(*c)),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<Complex> for Scalar {
    fn from(c: Complex) -> Self {
        Scalar::Float(c)
    }
}

/// Shorthand for `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
