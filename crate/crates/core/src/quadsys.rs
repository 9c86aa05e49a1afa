//! Quadratizations and the span-membership check behind them.
//!
//! New variables `z_1(x), ..., z_m(x)` quadratize `x' = p(x)` when `p` and
//! every `z_i'(x) * p(x)` lie in the linear span of the pairwise products of
//! the generators `1, x, z_1, ..., z_m`. Generator `0` is `1`, generator `1`
//! is `x`, and generator `k + 1` is `z_k`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::SolveError;
use crate::scalars::{Complex, Field, DEFAULT_TOLERANCE};
use crate::unipoly::UniPoly;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("generator index {index} out of range ({generators} generators)")]
    GeneratorOutOfRange { index: usize, generators: usize },
    #[error("the right-hand side is the zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Display name of generator `index`: `1`, `x`, `z1`, `z2`, ...
pub fn generator_name(index: usize) -> String {
    match index {
        0 => "1".to_string(),
        1 => "x".to_string(),
        k => format!("z{}", k - 1),
    }
}

/// The new variables `z_i(x)`, in order.
#[derive(Clone, Debug, PartialEq)]
pub struct NewVarSet<F> {
    vars: Vec<UniPoly<F>>,
}

impl<F: Field> NewVarSet<F> {
    pub fn new(vars: Vec<UniPoly<F>>) -> Self {
        NewVarSet { vars }
    }

    pub fn empty() -> Self {
        NewVarSet { vars: Vec::new() }
    }

    /// `{x^d : d in degrees}`.
    pub fn monomials(degrees: &[usize]) -> Self {
        Self::new(degrees.iter().map(|&d| UniPoly::monomial(F::one(), d)).collect())
    }

    pub fn vars(&self) -> &[UniPoly<F>] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.vars.len() + 2
    }

    /// The polynomial in `x` that generator `index` stands for.
    pub fn generator(&self, index: usize) -> Result<UniPoly<F>, QuadError> {
        match index {
            0 => Ok(UniPoly::constant(F::one())),
            1 => Ok(UniPoly::x()),
            k => self
                .vars
                .get(k - 2)
                .cloned()
                .ok_or(QuadError::GeneratorOutOfRange { index, generators: self.num_generators() }),
        }
    }

    /// Every variable has degree at least two, and the degrees are pairwise distinct.
    pub fn is_reduced(&self) -> bool {
        let mut degrees: Vec<usize> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match v.deg() {
                Some(d) if d >= 2 && v.coeff(0).is_zero() && v.coeff(1).is_zero() => {
                    if degrees.contains(&d) {
                        return false;
                    }
                    degrees.push(d);
                }
                _ => return false,
            }
        }
        true
    }

    pub fn to_complex(&self) -> NewVarSet<Complex> {
        NewVarSet::new(self.vars.iter().map(UniPoly::to_complex).collect())
    }
}

/// A polynomial of degree at most two in the generators, keyed by
/// generator pairs `(i, j)` with `i <= j`. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExpr<F> {
    terms: BTreeMap<(usize, usize), F>,
}

impl<F: Field> Default for QuadExpr<F> {
    fn default() -> Self {
        QuadExpr { terms: BTreeMap::new() }
    }
}

impl<F: Field> QuadExpr<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), F)>) -> Self {
        let mut e = Self::new();
        for ((i, j), c) in terms {
            e.add_term(i, j, c);
        }
        e
    }

    /// Adds `c * g_i * g_j`.
    pub fn add_term(&mut self, i: usize, j: usize, c: F) {
        let key = (i.min(j), i.max(j));
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> F {
        self.terms.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &F)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())))
    }

    /// Replaces generator `x` by `alpha * x + beta`.
    pub fn substitute_x(&self, alpha: &F, beta: &F) -> Self {
        let mut out = Self::new();
        for (&(i, j), c) in &self.terms {
            let c = c.clone();
            match (i, j) {
                (0, 1) => {
                    out.add_term(0, 1, c.clone() * alpha.clone());
                    out.add_term(0, 0, c * beta.clone());
                }
                (1, 1) => {
                    let two = F::from_i64(2);
                    out.add_term(1, 1, c.clone() * alpha.clone() * alpha.clone());
                    out.add_term(0, 1, c.clone() * two * alpha.clone() * beta.clone());
                    out.add_term(0, 0, c * beta.clone() * beta.clone());
                }
                (1, k) => {
                    out.add_term(1, k, c.clone() * alpha.clone());
                    out.add_term(0, k, c * beta.clone());
                }
                _ => out.add_term(i, j, c),
            }
        }
        out
    }

    pub fn to_complex(&self) -> QuadExpr<Complex> {
        QuadExpr::from_terms(self.terms.iter().map(|(k, v)| (*k, v.to_complex())))
    }
}

fn pair_name(i: usize, j: usize) -> String {
    match (i, j) {
        (0, 0) => "1".to_string(),
        (0, k) => generator_name(k),
        (a, b) if a == b => format!("{}^2", generator_name(a)),
        (a, b) => format!("{}*{}", generator_name(b), generator_name(a)),
    }
}

impl<F: Field> fmt::Display for QuadExpr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((j, i)));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let (negative, abs) = self.terms[&(i, j)].split_sign();
            match (n == 0, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let name = pair_name(i, j);
            if (i, j) == (0, 0) {
                f.write_str(&abs.render())?;
            } else if abs.is_unit_literal() {
                f.write_str(&name)?;
            } else {
                write!(f, "{}*{}", abs.render(), name)?;
            }
        }
        Ok(())
    }
}

/// New variables together with quadratic right-hand sides: entry 0 is for
/// `x'`, entry `i` for `z_i'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratization<F> {
    new_vars: NewVarSet<F>,
    rhs: Vec<QuadExpr<F>>,
}

impl<F: Field> Quadratization<F> {
    /// Pairs variables with right-hand sides; `rhs` must have one more entry
    /// than there are variables.
    pub fn from_parts(new_vars: NewVarSet<F>, rhs: Vec<QuadExpr<F>>) -> Self {
        assert_eq!(rhs.len(), new_vars.len() + 1, "one right-hand side per equation");
        Quadratization { new_vars, rhs }
    }

    pub fn order(&self) -> usize {
        self.new_vars.len()
    }

    pub fn new_vars(&self) -> &NewVarSet<F> {
        &self.new_vars
    }

    pub fn rhs(&self) -> &[QuadExpr<F>] {
        &self.rhs
    }

    /// The polynomials each right-hand side must expand to: `p`, then `z_i' * p`.
    pub fn targets(&self, p: &UniPoly<F>) -> Vec<UniPoly<F>> {
        derivative_targets(p, &self.new_vars)
    }

    /// Largest coefficient of `expand(rhs[i]) - target_i` over all equations.
    pub fn residual(&self, p: &UniPoly<F>) -> Result<f64, QuadError> {
        let mut worst = 0.0f64;
        for (e, t) in self.rhs.iter().zip(self.targets(p)) {
            let diff = &expand_quad_expr(e, &self.new_vars)? - &t;
            worst = worst.max(diff.max_norm());
        }
        Ok(worst)
    }

    /// The defining identities hold: exactly in exact mode, within
    /// `tol * (1 + |p|_inf)` per coefficient in float mode.
    pub fn is_sound(&self, p: &UniPoly<F>, tol: f64) -> bool {
        let mut ok = true;
        for (e, t) in self.rhs.iter().zip(self.targets(p)) {
            let Ok(expanded) = expand_quad_expr(e, &self.new_vars) else {
                return false;
            };
            let diff = &expanded - &t;
            ok &= diff.coeffs().iter().all(|c| c.is_negligible(tol * (1.0 + p.max_norm())));
        }
        ok
    }

    /// Multiplies every right-hand side by `c`: a quadratization of `c * p`.
    pub fn scale(&self, c: &F) -> Self {
        Quadratization { new_vars: self.new_vars.clone(), rhs: self.rhs.iter().map(|e| e.scale(c)).collect() }
    }

    /// Divides each new variable by its leading coefficient, rewriting the
    /// right-hand sides to match. Describes the same lifted system up to a
    /// diagonal change of coordinates.
    pub fn monic_vars(&self) -> Self {
        let mut scale = vec![F::one(), F::one()];
        scale.extend(self.new_vars.vars().iter().map(|z| z.leading_coeff().cloned().unwrap_or_else(F::one)));
        let new_vars = NewVarSet::new(
            self.new_vars.vars().iter().zip(&scale[2..]).map(|(z, c)| z.scale(&(F::one() / c.clone()))).collect(),
        );
        let rhs = self
            .rhs
            .iter()
            .enumerate()
            .map(|(k, e)| {
                // generator k + 1 is the one differentiated; old g_a = c_a * new g_a
                let outer = F::one() / scale[k + 1].clone();
                QuadExpr::from_terms(
                    e.terms()
                        .map(|((i, j), c)| ((i, j), c.clone() * scale[i].clone() * scale[j].clone() * outer.clone())),
                )
            })
            .collect();
        Quadratization { new_vars, rhs }
    }

    /// Moves a quadratization of `y' = g(y)` to `x' = g(alpha * x + beta) / alpha`
    /// through `y = alpha * x + beta`. Variables become `z_i(alpha * x + beta)`.
    pub fn transport_affine(&self, alpha: &F, beta: &F) -> Self {
        let new_vars = NewVarSet::new(
            self.new_vars
                .vars()
                .iter()
                .map(|z| z.linear_substitute(alpha, beta).expect("transport scale is nonzero"))
                .collect(),
        );
        let inv = F::one() / alpha.clone();
        let rhs = self
            .rhs
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let moved = e.substitute_x(alpha, beta);
                if k == 0 {
                    moved.scale(&inv)
                } else {
                    moved
                }
            })
            .collect();
        Quadratization { new_vars, rhs }
    }

    pub fn to_complex(&self) -> Quadratization<Complex> {
        Quadratization {
            new_vars: self.new_vars.to_complex(),
            rhs: self.rhs.iter().map(QuadExpr::to_complex).collect(),
        }
    }
}

impl<F: Field> fmt::Display for Quadratization<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, z) in self.new_vars.vars().iter().enumerate() {
            writeln!(f, "z{} = {}", k + 1, z)?;
        }
        for (k, e) in self.rhs.iter().enumerate() {
            let lhs = if k == 0 { "x".to_string() } else { format!("z{k}") };
            writeln!(f, "{lhs}' = {e}")?;
        }
        Ok(())
    }
}

fn derivative_targets<F: Field>(p: &UniPoly<F>, vars: &NewVarSet<F>) -> Vec<UniPoly<F>> {
    std::iter::once(p.clone()).chain(vars.vars().iter().map(|z| &z.derivative() * p)).collect()
}

/// Substitutes each generator by its polynomial and expands.
pub fn expand_quad_expr<F: Field>(e: &QuadExpr<F>, vars: &NewVarSet<F>) -> Result<UniPoly<F>, QuadError> {
    let mut acc = UniPoly::zero();
    for ((i, j), c) in e.terms() {
        let prod = &vars.generator(i)? * &vars.generator(j)?;
        acc = &acc + &prod.scale(c);
    }
    Ok(acc)
}

/// Pairwise generator products, columns in lexicographic `(i, j)` order.
struct QuadraticSpan<F> {
    pairs: Vec<(usize, usize)>,
    products: Vec<UniPoly<F>>,
}

impl<F: Field> QuadraticSpan<F> {
    fn new(vars: &NewVarSet<F>) -> Self {
        let gens: Vec<UniPoly<F>> =
            (0..vars.num_generators()).map(|k| vars.generator(k).expect("index in range")).collect();
        let mut pairs = Vec::new();
        let mut products = Vec::new();
        for i in 0..gens.len() {
            for j in i..gens.len() {
                pairs.push((i, j));
                products.push(&gens[i] * &gens[j]);
            }
        }
        QuadraticSpan { pairs, products }
    }

    fn solve(&self, target: &UniPoly<F>, tol: f64) -> Result<Option<QuadExpr<F>>, QuadError> {
        let rows = self.products.iter().chain([target]).map(|p| p.coeffs().len()).max().unwrap_or(0);
        let pad = |p: &UniPoly<F>| (0..rows).map(|r| p.coeff(r)).collect::<Vec<F>>();
        let columns: Vec<Vec<F>> = self.products.iter().map(pad).collect();
        let Some(solution) = F::solve_span(&columns, &pad(target), tol)? else {
            return Ok(None);
        };
        Ok(Some(QuadExpr::from_terms(self.pairs.iter().copied().zip(solution))))
    }
}

/// One quadratic expression in the generators equal to `target`, or `None`
/// when `target` is outside their quadratic span. Free coefficients are zero.
pub fn solve_quadratic_representation<F: Field>(
    target: &UniPoly<F>,
    vars: &NewVarSet<F>,
) -> Result<Option<QuadExpr<F>>, QuadError> {
    solve_quadratic_representation_with(target, vars, DEFAULT_TOLERANCE)
}

pub fn solve_quadratic_representation_with<F: Field>(
    target: &UniPoly<F>,
    vars: &NewVarSet<F>,
    tol: f64,
) -> Result<Option<QuadExpr<F>>, QuadError> {
    QuadraticSpan::new(vars).solve(target, tol)
}

/// Checks whether `vars` quadratize `x' = p(x)` and assembles the system.
pub fn verify_quadratization<F: Field>(
    p: &UniPoly<F>,
    vars: &NewVarSet<F>,
) -> Result<Option<Quadratization<F>>, QuadError> {
    verify_quadratization_with(p, vars, DEFAULT_TOLERANCE)
}

pub fn verify_quadratization_with<F: Field>(
    p: &UniPoly<F>,
    vars: &NewVarSet<F>,
    tol: f64,
) -> Result<Option<Quadratization<F>>, QuadError> {
    if p.is_zero() {
        return Err(QuadError::ZeroPolynomial);
    }
    let span = QuadraticSpan::new(vars);
    let targets = derivative_targets(p, vars);
    let solved: Vec<Option<QuadExpr<F>>> = targets.par_iter().map(|t| span.solve(t, tol)).collect::<Result<_, _>>()?;
    let rhs: Option<Vec<QuadExpr<F>>> = solved.into_iter().collect();
    Ok(rhs.map(|rhs| Quadratization { new_vars: vars.clone(), rhs }))
}

/// Drops constant and linear terms, removes variables that vanish, and
/// combines variables until leading degrees are distinct and no variable has
/// a term at another's leading degree. The quadratic span is unchanged.
pub fn reduce_new_vars<F: Field>(vars: &NewVarSet<F>) -> NewVarSet<F> {
    let mut reduced: Vec<UniPoly<F>> = Vec::new();
    for v in vars.vars() {
        let mut w = v.without_affine_part();
        for r in &reduced {
            let d = r.deg().expect("reduced variables are nonzero");
            let c = w.coeff(d);
            if !c.is_zero() {
                let factor = c / r.coeff(d);
                w = &w - &r.scale(&factor);
            }
        }
        let Some(d) = w.deg() else {
            continue;
        };
        let lead = w.coeff(d);
        for r in reduced.iter_mut() {
            let c = r.coeff(d);
            if !c.is_zero() {
                *r = &*r - &w.scale(&(c / lead.clone()));
            }
        }
        reduced.push(w);
    }
    NewVarSet::new(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Rational};

    type Q = UniPoly<Rational>;

    fn xpow(d: usize) -> Q {
        Q::monomial(rat(1, 1), d)
    }

    fn q(c: &[i64]) -> Q {
        Q::from_ints(c)
    }

    fn expr(terms: &[((usize, usize), i64)]) -> QuadExpr<Rational> {
        QuadExpr::from_terms(terms.iter().map(|&(k, c)| (k, rat(c, 1))))
    }

    #[test]
    fn expand_examples() {
        let vars = NewVarSet::new(vec![xpow(9)]);
        assert_eq!(expand_quad_expr(&expr(&[((1, 2), 1)]), &vars).unwrap(), xpow(10));
        assert!(expand_quad_expr(&QuadExpr::new(), &vars).unwrap().is_zero());
        assert_eq!(expand_quad_expr(&expr(&[((2, 2), 9)]), &vars).unwrap(), Q::monomial(rat(9, 1), 18));
        assert_eq!(
            expand_quad_expr(&expr(&[((1, 5), 1)]), &vars),
            Err(QuadError::GeneratorOutOfRange { index: 5, generators: 3 })
        );
    }

    #[test]
    fn solve_examples() {
        let z5 = NewVarSet::new(vec![xpow(5)]);
        assert_eq!(solve_quadratic_representation(&xpow(6), &z5).unwrap(), Some(expr(&[((1, 2), 1)])));
        let z8 = NewVarSet::new(vec![xpow(8)]);
        assert_eq!(solve_quadratic_representation(&xpow(10), &z8).unwrap(), None);
    }

    #[test]
    fn example_two_derivative_row() {
        let vars = NewVarSet::monomials(&[4, 3]);
        let p = q(&[1, 1, 1, 1, 1, 1]);
        let target = &Q::monomial(rat(4, 1), 3) * &p;
        let got = solve_quadratic_representation(&target, &vars).unwrap().unwrap();
        // 4(z1^2 + z1 z2 + z2^2 + z1 x + z1 + z2)
        let want = expr(&[((2, 2), 4), ((2, 3), 4), ((3, 3), 4), ((1, 2), 4), ((0, 2), 4), ((0, 3), 4)]);
        assert_eq!(got, want);
    }

    #[test]
    fn verify_examples() {
        let quad = verify_quadratization(&xpow(10), &NewVarSet::new(vec![xpow(9)])).unwrap().unwrap();
        assert_eq!(quad.order(), 1);
        assert_eq!(quad.rhs()[0], expr(&[((1, 2), 1)]));
        assert_eq!(quad.rhs()[1], expr(&[((2, 2), 9)]));
        assert_eq!(quad.to_string(), "z1 = x^9\nx' = z1*x\nz1' = 9*z1^2\n");

        let quad = verify_quadratization(&q(&[1, 0, 1]), &NewVarSet::empty()).unwrap().unwrap();
        assert_eq!(quad.order(), 0);
        assert_eq!(quad.rhs()[0], expr(&[((0, 0), 1), ((1, 1), 1)]));

        assert_eq!(verify_quadratization(&Q::zero(), &NewVarSet::empty()), Err(QuadError::ZeroPolynomial));
        assert_eq!(verify_quadratization(&xpow(3), &NewVarSet::empty()).unwrap(), None);
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_new_vars(&NewVarSet::new(vec![q(&[2, 3, 0, 0, 1])]));
        assert_eq!(r.vars(), &[xpow(4)]);
        let r = reduce_new_vars(&NewVarSet::new(vec![q(&[0, 0, 0, 1, 0, 1]), xpow(3)]));
        assert_eq!(r.vars(), &[xpow(5), xpow(3)]);
        let r = reduce_new_vars(&NewVarSet::new(vec![xpow(3)]));
        assert_eq!(r.vars(), &[xpow(3)]);
        let r = reduce_new_vars(&NewVarSet::new(vec![q(&[1, 5]), xpow(3), q(&[0, 0, 0, 2])]));
        assert_eq!(r.vars(), &[xpow(3)]);
        assert!(r.is_reduced());
    }

    #[test]
    fn transport_moves_the_frame() {
        // y' = y^4 - 6y^2 + 8y - 3 with z = y^3, y = x + 1
        let g = q(&[-3, 8, -6, 0, 1]);
        let local = verify_quadratization(&g, &NewVarSet::new(vec![xpow(3)])).unwrap().unwrap();
        let moved = local.transport_affine(&rat(1, 1), &rat(1, 1));
        let p = g.taylor_shift(&rat(1, 1));
        assert!(moved.is_sound(&p, 0.0));
        assert_eq!(moved.new_vars().vars()[0], q(&[1, 3, 3, 1]));
    }

    #[test]
    fn monic_vars_keeps_soundness() {
        let p = q(&[1, 1, 1, 1, 1, 1]);
        let vars = NewVarSet::new(vec![q(&[0, 0, 0, 0, 3]), q(&[0, 0, 1, -2])]);
        let quad = verify_quadratization(&p, &vars).unwrap().unwrap();
        let monic = quad.monic_vars();
        assert!(monic.is_sound(&p, 0.0));
        assert_eq!(monic.new_vars().vars()[0], xpow(4));
        let z2 = UniPoly::new(vec![rat(0, 1), rat(0, 1), rat(-1, 2), rat(1, 1)]);
        assert_eq!(monic.new_vars().vars()[1], z2);
    }

    #[test]
    fn quad_expr_rendering() {
        let e = QuadExpr::from_terms([((0, 0), rat(-1, 1)), ((1, 2), rat(3, 2)), ((3, 3), rat(-1, 1))]);
        assert_eq!(e.to_string(), "-z2^2 + 3/2*z1*x - 1");
        assert_eq!(QuadExpr::<Rational>::new().to_string(), "0");
    }
}
