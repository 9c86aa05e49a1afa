//! Symbolic feasibility of one-variable quadratizations.
//!
//! For `x' = x^n + p_(n-1) x^(n-1) + ... + p_0` and a candidate
//! `z = x^(n-1) + q_(n-2) x^(n-2) + ... + q_2 x^2`, `x'` must lie in the span
//! of `{1, x, x^2, z, xz}` and `z'` in the span of those together with
//! `z^2`. Each condition says the target column is dependent on the basis
//! columns, so the maximal minors of the augmented coefficient matrices
//! vanish. Eliminating the `q`s leaves conditions on the `p`s alone.

use thiserror::Error;

use super::buchberger::elimination_ideal;
use super::matrix::SymbolicMatrix;
use super::multipoly::{MultiPoly, Ring};
use crate::scalars::Rational;

/// Largest degree accepted without `allow_large`.
pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WorkbenchError {
    #[error("degree must be at least 5, got {0}")]
    DegreeTooSmall(usize),
    #[error("degree {degree} exceeds the cap of {cap}; pass the override to run anyway")]
    DegreeTooLarge { degree: usize, cap: usize },
}

/// `p0, ..., p_(n-1), q2, ..., q_(n-2)`.
pub fn workbench_ring(n: usize) -> Ring {
    let ps = (0..n).map(|i| format!("p{i}"));
    let qs = (2..n - 1).map(|i| format!("q{i}"));
    Ring::new(ps.chain(qs))
}

fn power_label(k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => "x".to_string(),
        k => format!("x^{k}"),
    }
}

type XPoly = Vec<MultiPoly>;

fn x_mul(a: &XPoly, b: &XPoly, ring: &Ring) -> XPoly {
    let mut out = vec![MultiPoly::zero(ring); a.len() + b.len() - 1];
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            if !u.is_zero() && !v.is_zero() {
                out[i + j] = &out[i + j] + &(u * v);
            }
        }
    }
    out
}

fn x_power(k: usize, ring: &Ring) -> XPoly {
    let mut v = vec![MultiPoly::zero(ring); k + 1];
    v[k] = MultiPoly::one(ring);
    v
}

fn columns_to_matrix(cols: &[XPoly], col_labels: &[&str], rows: usize, ring: &Ring) -> SymbolicMatrix {
    let entries = (0..rows)
        .map(|r| cols.iter().map(|c| c.get(r).cloned().unwrap_or_else(|| MultiPoly::zero(ring))).collect())
        .collect();
    SymbolicMatrix::new(
        (0..rows).map(power_label).collect(),
        col_labels.iter().map(|s| s.to_string()).collect(),
        entries,
    )
}

fn check_degree(n: usize, allow_large: bool) -> Result<(), WorkbenchError> {
    if n < 5 {
        return Err(WorkbenchError::DegreeTooSmall(n));
    }
    if n > DEFAULT_DEGREE_CAP && !allow_large {
        return Err(WorkbenchError::DegreeTooLarge { degree: n, cap: DEFAULT_DEGREE_CAP });
    }
    Ok(())
}

/// The `x'` matrix (rows `1..x^n`, columns `1, x, x^2, z, xz, xdot`) and the
/// `z'` matrix (rows `1..x^(2n-2)`, columns `1, x, x^2, z, xz, z^2, zdot`).
/// The `zdot` column has its entries in rows `1, x, x^2` cleared against the
/// unit columns, which leaves the minor ideal unchanged.
pub fn build_single_var_matrices(n: usize) -> Result<(SymbolicMatrix, SymbolicMatrix), WorkbenchError> {
    check_degree(n, true)?;
    Ok(build(n, true))
}

fn build(n: usize, clear_zdot: bool) -> (SymbolicMatrix, SymbolicMatrix) {
    let ring = workbench_ring(n);
    let var = |name: String| MultiPoly::var_named(&ring, &name);
    let mut xdot: XPoly = (0..n).map(|i| var(format!("p{i}"))).collect();
    xdot.push(MultiPoly::one(&ring));
    let mut z: XPoly = vec![MultiPoly::zero(&ring); 2];
    z.extend((2..n - 1).map(|i| var(format!("q{i}"))));
    z.push(MultiPoly::one(&ring));

    let xz = x_mul(&x_power(1, &ring), &z, &ring);
    let z2 = x_mul(&z, &z, &ring);
    let dz: XPoly =
        z.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into()))).collect();
    let mut zdot = x_mul(&dz, &xdot, &ring);
    if clear_zdot {
        for e in zdot.iter_mut().take(3) {
            *e = MultiPoly::zero(&ring);
        }
    }

    let basis = [x_power(0, &ring), x_power(1, &ring), x_power(2, &ring), z.clone(), xz];
    let mut xcols = basis.to_vec();
    xcols.push(xdot);
    let mut zcols = basis.to_vec();
    zcols.push(z2);
    zcols.push(zdot);
    let xm = columns_to_matrix(&xcols, &["1", "x", "x^2", "z", "xz", "xdot"], n + 1, &ring);
    let zm = columns_to_matrix(&zcols, &["1", "x", "x^2", "z", "xz", "z^2", "zdot"], 2 * n - 1, &ring);
    (xm, zm)
}

/// Ring of the eliminants: `p0, ..., p_(n-2)`.
pub fn eliminant_ring(n: usize) -> Ring {
    Ring::new((0..n - 1).map(|i| format!("p{i}")))
}

/// Ring of the generators once `p_(n-1)` is set to zero.
fn shifted_ring(n: usize) -> Ring {
    let ps = (0..n - 1).map(|i| format!("p{i}"));
    let qs = (2..n - 1).map(|i| format!("q{i}"));
    Ring::new(ps.chain(qs))
}

/// Minors whose common zeros are the `(p, q)` with a one-variable
/// quadratization, for the shifted form (`p_(n-1) = 0`).
pub fn single_var_generators(n: usize) -> Result<Vec<MultiPoly>, WorkbenchError> {
    check_degree(n, true)?;
    let (xm, zm) = build(n, true);
    let ring = shifted_ring(n);
    let shift = xm.ring().index_of(&format!("p{}", n - 1)).expect("ring has p_(n-1)");
    let zero = Rational::from_integer(0.into());
    let restrict = |m: &SymbolicMatrix| m.map(|e| e.substitute(shift, &zero).change_ring(&ring));
    let (xm, zm) = (restrict(&xm), restrict(&zm));
    let mut gens = if xm.rows() == xm.cols() { vec![xm.determinant()] } else { xm.maximal_minors() };
    gens.extend(zm.maximal_minors());
    gens.retain(|g| !g.is_zero());
    Ok(gens)
}

/// Conditions on `p0, ..., p_(n-2)` for the shifted monic degree-`n` input
/// to admit a one-variable quadratization: the elimination ideal of the
/// minors with the `q`s removed. Refuses `n > 8` unless `allow_large`.
pub fn single_var_feasibility_conditions(n: usize, allow_large: bool) -> Result<Vec<MultiPoly>, WorkbenchError> {
    check_degree(n, allow_large)?;
    let gens = single_var_generators(n)?;
    let keep: Vec<usize> = (0..n - 1).collect();
    let out = eliminant_ring(n);
    Ok(elimination_ideal(&gens, &keep).into_iter().map(|g| g.change_ring(&out)).collect())
}

#[cfg(test)]
pub(crate) fn build_uncleared(n: usize) -> (SymbolicMatrix, SymbolicMatrix) {
    build(n, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger::{buchberger, reduce};
    use crate::groebner::order::MonomialOrder;

    fn parse_grid(ring: &Ring, rows: &[&[&str]]) -> Vec<Vec<MultiPoly>> {
        rows.iter().map(|r| r.iter().map(|s| MultiPoly::parse(ring, s).unwrap()).collect()).collect()
    }

    #[test]
    fn degree_five_matrices_match_the_reference_grids() {
        let (xm, zm) = build_single_var_matrices(5).unwrap();
        let ring = workbench_ring(5);
        let xdot = parse_grid(
            &ring,
            &[
                &["1", "0", "0", "0", "0", "p0"],
                &["0", "1", "0", "0", "0", "p1"],
                &["0", "0", "1", "q2", "0", "p2"],
                &["0", "0", "0", "q3", "q2", "p3"],
                &["0", "0", "0", "1", "q3", "p4"],
                &["0", "0", "0", "0", "1", "1"],
            ],
        );
        assert_eq!(xm.entries, xdot);
        let zdot = parse_grid(
            &ring,
            &[
                &["1", "0", "0", "0", "0", "0", "0"],
                &["0", "1", "0", "0", "0", "0", "0"],
                &["0", "0", "1", "q2", "0", "0", "0"],
                &["0", "0", "0", "q3", "q2", "0", "2*p2*q2 + 3*p1*q3 + 4*p0"],
                &["0", "0", "0", "1", "q3", "q2^2", "2*p3*q2 + 3*p2*q3 + 4*p1"],
                &["0", "0", "0", "0", "1", "2*q2*q3", "2*p4*q2 + 3*p3*q3 + 4*p2"],
                &["0", "0", "0", "0", "0", "q3^2 + 2*q2", "4*p3 + 3*p4*q3 + 2*q2"],
                &["0", "0", "0", "0", "0", "2q3", "3*q3 + 4*p4"],
                &["0", "0", "0", "0", "0", "1", "4"],
            ],
        );
        assert_eq!(zm.entries, zdot);
        assert_eq!(zm.row_labels[3], "x^3");
        assert_eq!(zm.entry(3, 6).to_string(), "2*p2*q2 + 3*p1*q3 + 4*p0");
    }

    #[test]
    fn zero_coefficients_make_the_target_a_basis_column() {
        let (xm, _) = build_single_var_matrices(5).unwrap();
        let ring = xm.ring().clone();
        let origin = vec![Rational::from_integer(0.into()); ring.arity()];
        let at = |r: usize, c: usize| xm.entry(r, c).eval(&origin);
        for r in 0..xm.rows() {
            assert_eq!(at(r, 5), at(r, 4));
        }
        assert_eq!(xm.determinant().eval(&origin), Rational::from_integer(0.into()));
    }

    #[test]
    fn clearing_the_low_rows_keeps_the_minor_ideal() {
        let (_, cleared) = build_single_var_matrices(5).unwrap();
        let (_, raw) = build_uncleared(5);
        let ring = cleared.ring().clone();
        let ord = MonomialOrder::degrevlex((0..ring.arity()).rev().collect());
        let a = buchberger(&cleared.maximal_minors(), &ord);
        let b = buchberger(&raw.maximal_minors(), &ord);
        assert_eq!(a, b);
        for g in &raw.maximal_minors() {
            assert!(reduce(g, &a, &ord).is_zero());
        }
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(build_single_var_matrices(4).unwrap_err(), WorkbenchError::DegreeTooSmall(4));
        assert_eq!(
            single_var_feasibility_conditions(9, false).unwrap_err(),
            WorkbenchError::DegreeTooLarge { degree: 9, cap: 8 }
        );
        let (xm, zm) = build_single_var_matrices(7).unwrap();
        assert_eq!((xm.rows(), xm.cols()), (8, 6));
        assert_eq!((zm.rows(), zm.cols()), (13, 7));
    }
}
