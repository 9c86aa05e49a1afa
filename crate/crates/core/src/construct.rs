//! Explicit quadratization constructors and the dispatcher that picks one.
//!
//! Every constructor derives its right-hand sides from the span solver and
//! re-checks the result against the input before returning it.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::monosearch::{search_monomial, SearchConfig, SearchError};
use crate::quadsys::{verify_quadratization_with, NewVarSet, QuadError, QuadExpr, Quadratization};
use crate::scalars::{Complex, Field, Mode, Rational, ScalarError};
use crate::unipoly::{AnyPoly, UniPoly};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error("the zero polynomial has no leading coefficient")]
    ZeroPolynomial,
    #[error("constant polynomials have no shift normal form")]
    ConstantPolynomial,
    #[error("degree {degree} is outside the supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    #[error("{0}")]
    Infeasible(String),
    #[error("constructed variables failed verification")]
    Unverified,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// `p(x + lambda)` with the `x^(n-1)` coefficient removed.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftNormalForm<F> {
    pub lambda: F,
    pub shifted: UniPoly<F>,
    pub original_degree: usize,
}

pub fn normalize_shift<F: Field>(p: &UniPoly<F>) -> Result<ShiftNormalForm<F>, ConstructError> {
    let n = p.deg().ok_or(ConstructError::ZeroPolynomial)?;
    if n == 0 {
        return Err(ConstructError::ConstantPolynomial);
    }
    let lambda = -(p.coeff(n - 1) / (F::from_i64(n as i64) * p.coeff(n)));
    let mut coeffs = p.taylor_shift(&lambda).into_coeffs();
    // in float mode the shift leaves roundoff here
    coeffs[n - 1] = F::zero();
    Ok(ShiftNormalForm { lambda, shifted: UniPoly::new(coeffs), original_degree: n })
}

/// Outcome of the one-variable test for `deg p >= 5`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneVarVerdict<F> {
    pub normal_form: ShiftNormalForm<F>,
    /// Degrees among `0, 3, ..., n-2` where the shifted form is nonzero.
    pub offending: Vec<usize>,
    pub quadratization: Option<Quadratization<F>>,
}

impl<F: Field> OneVarVerdict<F> {
    pub fn accepted(&self) -> bool {
        self.quadratization.is_some()
    }

    pub fn reason(&self) -> Option<String> {
        if self.offending.is_empty() {
            return None;
        }
        let names: Vec<String> =
            self.offending.iter().map(|&d| if d == 0 { "constant".to_string() } else { format!("x^{d}") }).collect();
        let noun = if names.len() == 1 { "coefficient" } else { "coefficients" };
        Some(format!("shifted form has nonzero {} {noun}", names.join(", ")))
    }
}

/// Shifts `p` and checks that only `x^n`, `x^2` and `x` survive. When they
/// do, builds the order-one quadratization with `z = (x - lambda)^(n-1)`.
pub fn check_one_variable<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<OneVarVerdict<F>, ConstructError> {
    let n = p.deg().ok_or(ConstructError::ZeroPolynomial)?;
    if n < 5 {
        return Err(ConstructError::DegreeOutOfRange { degree: n, min: 5, max: usize::MAX });
    }
    let normal_form = normalize_shift(p)?;
    let scale = tol * (1.0 + normal_form.shifted.max_norm());
    let offending: Vec<usize> =
        std::iter::once(0).chain(3..n - 1).filter(|&d| !normal_form.shifted.coeff(d).is_negligible(scale)).collect();
    let quadratization = if offending.is_empty() {
        let mut coeffs = normal_form.shifted.coeffs().to_vec();
        for d in std::iter::once(0).chain(3..n) {
            coeffs[d] = F::zero();
        }
        let g = UniPoly::new(coeffs);
        let z = NewVarSet::monomials(&[n - 1]);
        let local = verify_quadratization_with(&g, &z, tol)?.ok_or(ConstructError::Unverified)?;
        let moved = local.transport_affine(&F::one(), &-normal_form.lambda.clone());
        Some(checked(moved, p, tol)?)
    } else {
        None
    };
    Ok(OneVarVerdict { normal_form, offending, quadratization })
}

pub fn try_one_variable<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Option<Quadratization<F>>, ConstructError> {
    Ok(check_one_variable(p, tol)?.quadratization)
}

fn checked<F: Field>(q: Quadratization<F>, p: &UniPoly<F>, tol: f64) -> Result<Quadratization<F>, ConstructError> {
    if q.is_sound(p, tol) {
        Ok(q)
    } else {
        Err(ConstructError::Unverified)
    }
}

fn verified_monomials<F: Field>(
    p: &UniPoly<F>,
    degrees: &[usize],
    tol: f64,
) -> Result<Quadratization<F>, ConstructError> {
    verify_quadratization_with(p, &NewVarSet::monomials(degrees), tol)?.ok_or(ConstructError::Unverified)
}

/// Degree 3: `{x^2}`. Degree 4: `{y^3}` in the shifted frame. Degree 5: one
/// variable when possible, else `{x^4, x^3}`.
pub fn quadratize_low_degree<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Quadratization<F>, ConstructError> {
    let n = p.deg().ok_or(ConstructError::ZeroPolynomial)?;
    match n {
        3 => verified_monomials(p, &[2], tol),
        4 => {
            let nf = normalize_shift(p)?;
            let local = verified_monomials(&nf.shifted, &[3], tol)?;
            checked(local.transport_affine(&F::one(), &-nf.lambda), p, tol)
        }
        5 => match try_one_variable(p, tol)? {
            Some(q) => Ok(q),
            None => verified_monomials(p, &[4, 3], tol),
        },
        _ => Err(ConstructError::DegreeOutOfRange { degree: n, min: 3, max: 5 }),
    }
}

/// Two-variable construction for degree 6. With `r = p6^(1/6)` and
/// `s = p5 / (6 p6)`, `x = y/r - s` turns `p` into a monic `g(y)` with no
/// `y^5` term, and `z1 = y^5 + (5 q3 / 8) y^2`, `z2 = y^3` quadratize it.
/// Returns `None` when `p6` has no sixth root in `F`.
pub fn quadratize_degree6<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Option<Quadratization<F>>, ConstructError> {
    let n = p.deg().ok_or(ConstructError::ZeroPolynomial)?;
    if n != 6 {
        return Err(ConstructError::DegreeOutOfRange { degree: n, min: 6, max: 6 });
    }
    let p6 = p.coeff(6);
    let Some(r) = p6.nth_root(6) else {
        return Ok(None);
    };
    let s = p.coeff(5) / (F::from_i64(6) * p6);
    let inv_r = F::one() / r.clone();
    let mut coeffs = p.linear_substitute(&inv_r, &-s.clone()).map_err(|_| ConstructError::Unverified)?.into_coeffs();
    coeffs[5] = F::zero();
    coeffs[6] = F::one();
    let g = UniPoly::new(coeffs);

    let correction = F::from_i64(5) * g.coeff(3) / F::from_i64(8);
    let z1 = &UniPoly::monomial(F::one(), 5) + &UniPoly::monomial(correction, 2);
    let z2 = UniPoly::monomial(F::one(), 3);
    let local =
        verify_quadratization_with(&g, &NewVarSet::new(vec![z1, z2]), tol)?.ok_or(ConstructError::Unverified)?;
    let beta = r.clone() * s;
    let moved = local.scale(&r).transport_affine(&r, &beta).monic_vars();
    Ok(Some(checked(moved, p, tol)?))
}

/// Three monomial variables `{x^5, x^4, x^3}` for degree 6.
pub fn quadratize_degree6_monomial<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Quadratization<F>, ConstructError> {
    let n = p.deg().ok_or(ConstructError::ZeroPolynomial)?;
    if n != 6 {
        return Err(ConstructError::DegreeOutOfRange { degree: n, min: 6, max: 6 });
    }
    verified_monomials(p, &[5, 4, 3], tol)
}

/// A quadratization in either coefficient mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyQuadratization {
    Exact(Quadratization<Rational>),
    Float(Quadratization<Complex>),
}

impl AnyQuadratization {
    pub fn mode(&self) -> Mode {
        match self {
            AnyQuadratization::Exact(_) => Mode::Exact,
            AnyQuadratization::Float(_) => Mode::Float,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AnyQuadratization::Exact(q) => q.order(),
            AnyQuadratization::Float(q) => q.order(),
        }
    }

    pub fn to_float(&self) -> Quadratization<Complex> {
        match self {
            AnyQuadratization::Exact(q) => q.to_complex(),
            AnyQuadratization::Float(q) => q.clone(),
        }
    }

    /// Variable definitions rendered as polynomials in `x`.
    pub fn var_strings(&self) -> Vec<String> {
        match self {
            AnyQuadratization::Exact(q) => q.new_vars().vars().iter().map(|v| v.to_string()).collect(),
            AnyQuadratization::Float(q) => q.new_vars().vars().iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn rhs_strings(&self) -> Vec<String> {
        match self {
            AnyQuadratization::Exact(q) => q.rhs().iter().map(QuadExpr::to_string).collect(),
            AnyQuadratization::Float(q) => q.rhs().iter().map(QuadExpr::to_string).collect(),
        }
    }
}

impl fmt::Display for AnyQuadratization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyQuadratization::Exact(q) => q.fmt(f),
            AnyQuadratization::Float(q) => q.fmt(f),
        }
    }
}

/// The construction that produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Trivial,
    OneVar,
    LowDegree,
    Degree6,
    Degree6Monomial,
    Search,
    PowerFallback,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Trivial => "trivial",
            Strategy::OneVar => "one-var",
            Strategy::LowDegree => "low-degree",
            Strategy::Degree6 => "degree6",
            Strategy::Degree6Monomial => "degree6-monomial",
            Strategy::Search => "search",
            Strategy::PowerFallback => "power-fallback",
        })
    }
}

/// Which construction the dispatcher may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrategyChoice {
    #[default]
    Auto,
    OneVar,
    LowDegree,
    Degree6,
    Degree6Monomial,
    Search,
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "auto" => StrategyChoice::Auto,
            "one-var" => StrategyChoice::OneVar,
            "low-degree" => StrategyChoice::LowDegree,
            "degree6" => StrategyChoice::Degree6,
            "degree6-monomial" => StrategyChoice::Degree6Monomial,
            "search" => StrategyChoice::Search,
            other => return Err(format!("unknown strategy `{other}`")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct QuadratizeOptions {
    pub strategy: StrategyChoice,
    pub tolerance: f64,
    /// Permit switching an exact input to float when a radical is irrational.
    pub allow_mode_switch: bool,
    pub search: SearchConfig,
}

impl Default for QuadratizeOptions {
    fn default() -> Self {
        QuadratizeOptions {
            strategy: StrategyChoice::Auto,
            tolerance: crate::scalars::DEFAULT_TOLERANCE,
            allow_mode_switch: true,
            search: SearchConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub quadratization: AnyQuadratization,
    pub strategy: Strategy,
    /// The input was exact but the result is in float mode.
    pub mode_switched: bool,
}

trait Wrap: Field {
    fn wrap(q: Quadratization<Self>) -> AnyQuadratization;
}

impl Wrap for Rational {
    fn wrap(q: Quadratization<Self>) -> AnyQuadratization {
        AnyQuadratization::Exact(q)
    }
}

impl Wrap for Complex {
    fn wrap(q: Quadratization<Self>) -> AnyQuadratization {
        AnyQuadratization::Float(q)
    }
}

fn done<F: Wrap>(q: Quadratization<F>, strategy: Strategy) -> Construction {
    Construction { quadratization: F::wrap(q), strategy, mode_switched: false }
}

/// Quadratizes `p` with the lowest-order construction available, or with
/// the one named in `opts.strategy`.
pub fn quadratize(p: &AnyPoly, opts: &QuadratizeOptions) -> Result<Construction, ConstructError> {
    let result = match p {
        AnyPoly::Exact(q) => dispatch(q, opts),
        AnyPoly::Float(q) => dispatch(q, opts),
    };
    match (p, result) {
        (AnyPoly::Exact(q), Err(ConstructError::Scalar(ScalarError::ExactRootUnavailable { .. })))
            if opts.allow_mode_switch =>
        {
            let mut c = dispatch(&q.to_float(), opts)?;
            c.mode_switched = true;
            Ok(c)
        }
        (_, r) => r,
    }
}

fn degree6_or_root_error<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Quadratization<F>, ConstructError> {
    quadratize_degree6(p, tol)?
        .ok_or_else(|| ConstructError::Scalar(ScalarError::ExactRootUnavailable { value: p.coeff(6).render(), k: 6 }))
}

fn powers_fallback<F: Field>(p: &UniPoly<F>, tol: f64) -> Result<Quadratization<F>, ConstructError> {
    let n = p.deg().unwrap_or(0);
    let degrees: Vec<usize> = (2..n).collect();
    verified_monomials(p, &degrees, tol)
}

fn dispatch<F: Wrap>(p: &UniPoly<F>, opts: &QuadratizeOptions) -> Result<Construction, ConstructError> {
    let tol = opts.tolerance;
    let Some(n) = p.deg() else {
        let q = Quadratization::<F>::from_parts(NewVarSet::empty(), vec![QuadExpr::new()]);
        return Ok(done(q, Strategy::Trivial));
    };
    match opts.strategy {
        StrategyChoice::Auto => {}
        StrategyChoice::OneVar => {
            let verdict = check_one_variable(p, tol)?;
            return match verdict.quadratization {
                Some(q) => Ok(done(q, Strategy::OneVar)),
                None => Err(ConstructError::Infeasible(verdict.reason().unwrap_or_default())),
            };
        }
        StrategyChoice::LowDegree => return Ok(done(quadratize_low_degree(p, tol)?, Strategy::LowDegree)),
        StrategyChoice::Degree6 => return Ok(done(degree6_or_root_error(p, tol)?, Strategy::Degree6)),
        StrategyChoice::Degree6Monomial => {
            return Ok(done(quadratize_degree6_monomial(p, tol)?, Strategy::Degree6Monomial))
        }
        StrategyChoice::Search => {
            let found = search_monomial(p, &opts.search, tol)?;
            return match found.found {
                Some(f) => Ok(done(f.quadratization, Strategy::Search)),
                None => Err(ConstructError::Infeasible(found.label())),
            };
        }
    }
    if n <= 2 {
        let q = verify_quadratization_with(p, &NewVarSet::empty(), tol)?.ok_or(ConstructError::Unverified)?;
        return Ok(done(q, Strategy::Trivial));
    }
    if n <= 4 {
        return Ok(done(quadratize_low_degree(p, tol)?, Strategy::LowDegree));
    }
    if let Some(q) = try_one_variable(p, tol)? {
        return Ok(done(q, Strategy::OneVar));
    }
    match n {
        5 => Ok(done(quadratize_low_degree(p, tol)?, Strategy::LowDegree)),
        6 => Ok(done(degree6_or_root_error(p, tol)?, Strategy::Degree6)),
        _ => {
            let found = search_monomial(p, &opts.search, tol)?;
            match found.found {
                Some(f) => Ok(done(f.quadratization, Strategy::Search)),
                None => Ok(done(powers_fallback(p, tol)?, Strategy::PowerFallback)),
            }
        }
    }
}
