//! Matrices with polynomial entries.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::multipoly::{MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Row-major.
    pub entries: Vec<Vec<MultiPoly>>,
}

/// Strings instead of polynomials, for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenderedMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl SymbolicMatrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, entries: Vec<Vec<MultiPoly>>) -> Self {
        assert_eq!(entries.len(), row_labels.len());
        assert!(entries.iter().all(|r| r.len() == col_labels.len()));
        SymbolicMatrix { row_labels, col_labels, entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn ring(&self) -> &Ring {
        self.entries[0][0].ring()
    }

    pub fn entry(&self, row: usize, col: usize) -> &MultiPoly {
        &self.entries[row][col]
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        SymbolicMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Determinant of the square submatrix on `rows` x `cols`, built up one
    /// row at a time over subsets of columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        assert_eq!(rows.len(), cols.len());
        let ring = self.ring().clone();
        let k = cols.len();
        let mut layer: HashMap<u32, MultiPoly> = HashMap::from([(0, MultiPoly::one(&ring))]);
        for &r in rows {
            let mut next: HashMap<u32, MultiPoly> = HashMap::new();
            for (mask, det) in &layer {
                if det.is_zero() {
                    continue;
                }
                for (c, &col) in cols.iter().enumerate() {
                    if mask & (1 << c) != 0 {
                        continue;
                    }
                    let a = &self.entries[r][col];
                    if a.is_zero() {
                        continue;
                    }
                    // columns of the mask to the right of c count the transpositions
                    let sign = (mask >> c).count_ones() % 2 == 1;
                    let mut term = a * det;
                    if sign {
                        term = -&term;
                    }
                    let slot = next.entry(mask | (1 << c)).or_insert_with(|| MultiPoly::zero(&ring));
                    *slot = &*slot + &term;
                }
            }
            layer = next;
        }
        layer.remove(&((1u32 << k) - 1)).unwrap_or_else(|| MultiPoly::zero(&ring))
    }

    pub fn determinant(&self) -> MultiPoly {
        assert_eq!(self.rows(), self.cols(), "determinant of a non-square matrix");
        let all: Vec<usize> = (0..self.rows()).collect();
        self.minor(&all, &all)
    }

    /// All nonzero minors of size `min(rows, cols)`, in lexicographic order of
    /// the chosen rows (or columns).
    pub fn maximal_minors(&self) -> Vec<MultiPoly> {
        let (r, c) = (self.rows(), self.cols());
        let k = r.min(c);
        let all_rows: Vec<usize> = (0..r).collect();
        let all_cols: Vec<usize> = (0..c).collect();
        let choices: Vec<Vec<usize>> =
            if r >= c { (0..r).combinations(k).collect() } else { (0..c).combinations(k).collect() };
        choices
            .par_iter()
            .map(|s| if r >= c { self.minor(s, &all_cols) } else { self.minor(&all_rows, s) })
            .filter(|m| !m.is_zero())
            .collect()
    }

    pub fn render(&self) -> RenderedMatrix {
        RenderedMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
        }
    }
}

/// One line per row: the row label, then the entries, separated by tabs,
/// after a header line of column labels.
impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "\t{}", self.col_labels.join("\t"))?;
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{label}\t{}", cells.join("\t"))?;
        }
        Ok(())
    }
}
