//! Span membership solvers for column-vector systems `sum_j c_j * col_j = target`.
//!
//! Columns are processed in order and the first linearly independent ones
//! become pivots; coefficients of the remaining (free) columns are zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalars::{Complex, Rational};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("numerical rank is indeterminate: magnitude {magnitude:e} is within the ambiguity band above threshold {threshold:e}")]
    Indeterminate { magnitude: f64, threshold: f64 },
}

/// Multiplier above the zero threshold inside which a pivot or residual is
/// reported as indeterminate instead of being classified.
pub const AMBIGUITY_BAND: f64 = 1e3;

/// Exact solve by fraction-free (Bareiss) elimination on integer-scaled rows.
pub fn solve_exact(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = columns.len();
    let nrows = columns.iter().map(Vec::len).chain([target.len()]).max().unwrap_or(0);
    let mut m: Vec<Vec<BigInt>> = (0..nrows)
        .map(|r| {
            let row: Vec<Rational> = columns
                .iter()
                .map(|c| c.get(r).cloned().unwrap_or_else(Rational::zero))
                .chain([target.get(r).cloned().unwrap_or_else(Rational::zero)])
                .collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();

    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..=ncols {
        let Some(found) = (pr..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if col == ncols {
            return None;
        }
        m.swap(pr, found);
        let (head, tail) = m.split_at_mut(pr + 1);
        let prow = &head[pr];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                for entry in &mut row[col + 1..] {
                    *entry = &*entry * &prow[col] / &prev;
                }
                continue;
            }
            for j in col + 1..=ncols {
                let v = &prow[col] * &row[j] - &row[col] * &prow[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = head[pr][col].clone();
        pivots.push(col);
        pr += 1;
    }

    let mut x = vec![Rational::zero(); ncols];
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let row = &m[k];
        let mut acc = Rational::from_integer(row[ncols].clone());
        for j in pc + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rational::from_integer(row[pc].clone());
    }
    Some(x)
}

/// Float solve with column-ordered elimination and partial row pivoting.
/// Magnitudes at or below `tol * scale` count as zero; magnitudes within
/// [`AMBIGUITY_BAND`] of that threshold are reported as indeterminate.
pub fn solve_float(columns: &[Vec<Complex>], target: &[Complex], tol: f64) -> Result<Option<Vec<Complex>>, SolveError> {
    let ncols = columns.len();
    let nrows = columns.iter().map(Vec::len).chain([target.len()]).max().unwrap_or(0);
    let mut m: Vec<Vec<Complex>> = (0..nrows)
        .map(|r| {
            columns
                .iter()
                .map(|c| c.get(r).copied().unwrap_or_default())
                .chain([target.get(r).copied().unwrap_or_default()])
                .collect()
        })
        .collect();

    let matrix_scale = m.iter().flat_map(|row| row[..ncols].iter()).map(|c| c.norm()).fold(1.0, f64::max);
    let target_scale = target.iter().map(|c| c.norm()).fold(matrix_scale, f64::max);
    let threshold = tol * matrix_scale;

    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        if pr == nrows {
            break;
        }
        let (best, magnitude) =
            (pr..nrows)
                .map(|r| (r, m[r][col].norm()))
                .fold((pr, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if magnitude <= threshold {
            continue;
        }
        if magnitude <= threshold * AMBIGUITY_BAND {
            return Err(SolveError::Indeterminate { magnitude, threshold });
        }
        m.swap(pr, best);
        let (head, tail) = m.split_at_mut(pr + 1);
        let prow = &head[pr];
        for row in tail.iter_mut() {
            let factor = row[col] / prow[col];
            if factor == Complex::zero() {
                continue;
            }
            for j in col..=ncols {
                row[j] -= factor * prow[j];
            }
        }
        pivots.push(col);
        pr += 1;
    }

    let residual_threshold = tol * target_scale;
    let residual = (pr..nrows).map(|r| m[r][ncols].norm()).fold(0.0, f64::max);
    if residual > residual_threshold * AMBIGUITY_BAND {
        return Ok(None);
    }
    if residual > residual_threshold {
        return Err(SolveError::Indeterminate { magnitude: residual, threshold: residual_threshold });
    }

    let mut x = vec![Complex::zero(); ncols];
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let row = &m[k];
        let mut acc = row[ncols];
        for j in pc + 1..ncols {
            acc -= row[j] * x[j];
        }
        x[pc] = acc / row[pc];
    }
    Ok(Some(x))
}
