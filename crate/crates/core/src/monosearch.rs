//! Exhaustive search for the smallest set of monomial new variables.
//!
//! Subsets `{d_1 < ... < d_k}` of `{2, ..., D}` are enumerated by size and
//! then lexicographically, so the first success is a canonical minimum.
//! Products of monomials are monomials, so a subset is feasible exactly when
//! the supports of `p` and of each `d x^(d-1) p` lie in the set of pairwise
//! degree sums. That test runs first; survivors go through the span solver.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quadsys::{verify_quadratization_with, NewVarSet, QuadError, Quadratization};
use crate::scalars::Field;
use crate::unipoly::UniPoly;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("search needs degree at least 3, got {0}")]
    DegreeTooLow(usize),
    #[error("degree bound {max_degree} is below n - 1 = {required}")]
    BoundTooSmall { max_degree: usize, required: usize },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Smallest `k` with `C(k + 3, 2) >= num_rhs_monomials`: with `k` monomial
/// variables there are at most that many distinct pairwise products.
pub fn monomial_lower_bound(num_rhs_monomials: usize) -> usize {
    (0..).find(|k| (k + 3) * (k + 2) / 2 >= num_rhs_monomials).expect("bound grows without limit")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest candidate degree; `None` means `2(n - 1)`.
    pub max_degree: Option<usize>,
    pub max_order: usize,
    pub parallel: bool,
    /// Skip subsets ruled out by the counting bound and the degree conditions.
    pub pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_degree: None, max_order: 6, parallel: true, pruning: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeStats {
    pub size: usize,
    pub tested: usize,
    pub pruned: usize,
    pub total: usize,
}

impl fmt::Display for SizeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size {}: {}/{}/{}", self.size, self.tested, self.pruned, self.total)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoundSet<F> {
    pub degrees: Vec<usize>,
    pub quadratization: Quadratization<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult<F> {
    pub found: Option<FoundSet<F>>,
    pub max_degree: usize,
    pub max_order: usize,
    /// One entry per subset size visited, as tested/pruned/total counts.
    pub certificate: Vec<SizeStats>,
}

impl<F> SearchResult<F> {
    pub fn order(&self) -> Option<usize> {
        self.found.as_ref().map(|f| f.degrees.len())
    }

    pub fn label(&self) -> String {
        match &self.found {
            Some(f) => format!("found order {} with degrees {:?}", f.degrees.len(), f.degrees),
            None => format!("none within bounds (degrees <= {}, order <= {})", self.max_degree, self.max_order),
        }
    }
}

fn support<F: Field>(p: &UniPoly<F>, tol: f64) -> Vec<usize> {
    let scale = tol * (1.0 + p.max_norm());
    p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_negligible(scale)).map(|(d, _)| d).collect()
}

fn support_feasible(p_support: &[usize], degrees: &[usize]) -> bool {
    let gens: Vec<usize> = [0, 1].iter().chain(degrees).copied().collect();
    let max = 2 * gens.iter().max().copied().unwrap_or(1);
    let mut sums = vec![false; max + 1];
    for (a, &i) in gens.iter().enumerate() {
        for &j in &gens[a..] {
            sums[i + j] = true;
        }
    }
    let covered = |shift: usize| p_support.iter().all(|&e| sums.get(e + shift).copied().unwrap_or(false));
    // `d x^(d-1) p` has support `supp(p) + d - 1`
    covered(0) && degrees.iter().all(|&d| covered(d - 1))
}

fn pruned(subset: &[usize], n: usize, lower_bound: usize) -> bool {
    let k = subset.len();
    if k < lower_bound {
        return true;
    }
    // the degree conditions hold from degree five on
    if n < 5 {
        return false;
    }
    match k {
        1 => subset[0] != n - 1,
        2 => subset.iter().all(|&d| d < n) && !subset.contains(&(n - 1)),
        _ => false,
    }
}

/// Smallest monomial quadratization of `x' = p(x)` within the configured bounds.
pub fn search_monomial<F: Field>(p: &UniPoly<F>, cfg: &SearchConfig, tol: f64) -> Result<SearchResult<F>, SearchError> {
    let n = p.deg().unwrap_or(0);
    if n < 3 {
        return Err(SearchError::DegreeTooLow(n));
    }
    let max_degree = cfg.max_degree.unwrap_or(2 * (n - 1));
    if max_degree < n - 1 {
        return Err(SearchError::BoundTooSmall { max_degree, required: n - 1 });
    }
    let p_support = support(p, tol);
    let lower_bound = if cfg.pruning { monomial_lower_bound(p_support.len()) } else { 0 };

    let mut certificate = Vec::new();
    for k in 1..=cfg.max_order.min(max_degree - 1) {
        let all: Vec<Vec<usize>> = (2..=max_degree).combinations(k).collect();
        let total = all.len();
        let candidates: Vec<&Vec<usize>> = all.iter().filter(|s| !(cfg.pruning && pruned(s, n, lower_bound))).collect();
        let pruned_count = total - candidates.len();

        let check = |s: &&Vec<usize>| -> Result<Option<Quadratization<F>>, QuadError> {
            if !support_feasible(&p_support, s) {
                return Ok(None);
            }
            verify_quadratization_with(p, &NewVarSet::monomials(s), tol)
        };
        let hit = if cfg.parallel {
            candidates.par_iter().map(check).position_first(|r| !matches!(r, Ok(None)))
        } else {
            candidates.iter().map(check).position(|r| !matches!(r, Ok(None)))
        };
        match hit {
            None => certificate.push(SizeStats { size: k, tested: candidates.len(), pruned: pruned_count, total }),
            Some(i) => {
                certificate.push(SizeStats { size: k, tested: i + 1, pruned: pruned_count, total });
                let degrees = candidates[i].clone();
                let quadratization = check(&candidates[i])?.expect("result was found");
                return Ok(SearchResult {
                    found: Some(FoundSet { degrees, quadratization }),
                    max_degree,
                    max_order: cfg.max_order,
                    certificate,
                });
            }
        }
    }
    Ok(SearchResult { found: None, max_degree, max_order: cfg.max_order, certificate })
}
