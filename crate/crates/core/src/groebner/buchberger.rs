//! Multivariate division, Buchberger's algorithm and elimination.
//!
//! Internally exponent vectors are stored permuted into precedence order so
//! that comparisons never go through the permutation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use super::multipoly::{MultiPoly, Ring};
use super::order::{cmp_keys, MonomialOrder, OrderKind};
use crate::scalars::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Key {
    kind: OrderKind,
    e: Vec<u32>,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_keys(self.kind, &self.e, &other.e)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms in decreasing order; never empty.
#[derive(Clone, Debug)]
struct Poly {
    terms: Vec<(Vec<u32>, Rational)>,
}

impl Poly {
    fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    fn monic(mut self) -> Self {
        let inv = Rational::one() / self.lc();
        for t in &mut self.terms {
            t.1 = &t.1 * &inv;
        }
        self
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

struct Ctx<'a> {
    ord: &'a MonomialOrder,
    ring: Ring,
}

impl Ctx<'_> {
    fn import(&self, f: &MultiPoly) -> Option<Poly> {
        assert_eq!(f.ring().arity(), self.ord.arity(), "order does not match the ring");
        let mut terms: Vec<(Vec<u32>, Rational)> = f.terms().map(|(e, c)| (self.ord.permute(e), c.clone())).collect();
        if terms.is_empty() {
            return None;
        }
        terms.sort_by(|a, b| cmp_keys(self.ord.kind(), &b.0, &a.0));
        Some(Poly { terms })
    }

    fn export(&self, p: Option<&Poly>) -> MultiPoly {
        match p {
            None => MultiPoly::zero(&self.ring),
            Some(p) => {
                MultiPoly::from_terms(&self.ring, p.terms.iter().map(|(k, c)| (self.ord.unpermute(k), c.clone())))
            }
        }
    }

    fn key(&self, e: Vec<u32>) -> Key {
        Key { kind: self.ord.kind(), e }
    }

    /// Full reduction of `f` by `basis`.
    fn reduce_map(&self, mut work: BTreeMap<Key, Rational>, basis: &[Poly]) -> Option<Poly> {
        let mut rem = Vec::new();
        while let Some((k, c)) = work.pop_last() {
            match basis.iter().find(|g| divides(g.lm(), &k.e)) {
                None => rem.push((k.e, c)),
                Some(g) => {
                    let factor = &c / g.lc();
                    let shift: Vec<u32> = k.e.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                    for (e, gc) in &g.terms[1..] {
                        let moved: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                        let key = self.key(moved);
                        let delta = -(&factor * gc);
                        match work.get_mut(&key) {
                            Some(v) => {
                                *v += delta;
                                if v.is_zero() {
                                    work.remove(&key);
                                }
                            }
                            None => {
                                work.insert(key, delta);
                            }
                        }
                    }
                }
            }
        }
        (!rem.is_empty()).then_some(Poly { terms: rem })
    }

    fn to_map(&self, p: &Poly) -> BTreeMap<Key, Rational> {
        p.terms.iter().map(|(e, c)| (self.key(e.clone()), c.clone())).collect()
    }

    fn reduce(&self, f: &Poly, basis: &[Poly]) -> Option<Poly> {
        self.reduce_map(self.to_map(f), basis)
    }

    fn s_poly(&self, f: &Poly, g: &Poly) -> Option<Poly> {
        let l = lcm(f.lm(), g.lm());
        let mut work: BTreeMap<Key, Rational> = BTreeMap::new();
        for (p, sign) in [(f, Rational::one()), (g, -Rational::one())] {
            let shift: Vec<u32> = l.iter().zip(p.lm()).map(|(a, b)| a - b).collect();
            let factor = &sign / p.lc();
            for (e, c) in &p.terms {
                let key = self.key(e.iter().zip(&shift).map(|(a, b)| a + b).collect());
                let v = work.entry(key.clone()).or_insert_with(Rational::zero);
                *v += &factor * c;
                if v.is_zero() {
                    work.remove(&key);
                }
            }
        }
        if work.is_empty() {
            return None;
        }
        let mut terms: Vec<_> = work.into_iter().map(|(k, c)| (k.e, c)).collect();
        terms.reverse();
        Some(Poly { terms })
    }
}

fn ctx<'a>(ord: &'a MonomialOrder, polys: &[&MultiPoly]) -> Ctx<'a> {
    let ring = polys.first().map(|p| p.ring().clone()).unwrap_or_else(|| Ring::new(Vec::<String>::new()));
    Ctx { ord, ring }
}

/// Normal form of `f` modulo `basis`: no remaining term is divisible by a
/// leading monomial of the basis.
pub fn reduce(f: &MultiPoly, basis: &[MultiPoly], ord: &MonomialOrder) -> MultiPoly {
    let c = ctx(ord, &[f]);
    let b: Vec<Poly> = basis.iter().filter_map(|g| c.import(g)).collect();
    match c.import(f) {
        None => f.clone(),
        Some(p) => c.export(c.reduce(&p, &b).as_ref()),
    }
}

pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, ord: &MonomialOrder) -> MultiPoly {
    let c = ctx(ord, &[f, g]);
    match (c.import(f), c.import(g)) {
        (Some(a), Some(b)) => c.export(c.s_poly(&a, &b).as_ref()),
        _ => MultiPoly::zero(f.ring()),
    }
}

/// Every pairwise S-polynomial reduces to zero.
pub fn is_groebner_basis(basis: &[MultiPoly], ord: &MonomialOrder) -> bool {
    let Some(first) = basis.first() else {
        return true;
    };
    let c = ctx(ord, &[first]);
    let b: Vec<Poly> = basis.iter().filter_map(|g| c.import(g)).collect();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| c.s_poly(&b[i], &b[j]).is_none_or(|s| c.reduce(&s, &b).is_none())))
}

/// The reduced Groebner basis of the ideal generated by `gens`, monic and
/// sorted by leading monomial from largest to smallest. Zero generators are
/// ignored; an all-zero input gives an empty basis.
pub fn buchberger(gens: &[MultiPoly], ord: &MonomialOrder) -> Vec<MultiPoly> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let c = ctx(ord, &[first]);
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        if let Some(p) = c.import(g).and_then(|p| c.reduce(&p, &basis)) {
            basis.push(p.monic());
        }
    }
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        // normal selection: smallest lcm of leading monomials
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lcm(basis[a.0].lm(), basis[a.1].lm());
                let lb = lcm(basis[b.0].lm(), basis[b.1].lm());
                cmp_keys(ord.kind(), &la, &lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let l = lcm(basis[i].lm(), basis[j].lm());
        let coprime = basis[i].lm().iter().zip(basis[j].lm()).all(|(a, b)| *a == 0 || *b == 0);
        if coprime {
            continue;
        }
        let pair = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].lm(), &l)
                && !pending.contains(&pair(i, k))
                && !pending.contains(&pair(j, k))
        });
        if chain {
            continue;
        }
        let Some(s) = c.s_poly(&basis[i], &basis[j]) else {
            continue;
        };
        if let Some(r) = c.reduce(&s, &basis) {
            let new = basis.len();
            basis.push(r.monic());
            for k in 0..new {
                pending.insert((k, new));
            }
        }
    }

    // minimal basis, then inter-reduction
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant =
            basis.iter().enumerate().any(|(m, h)| m != k && divides(h.lm(), g.lm()) && (h.lm() != g.lm() || m < k));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<Poly> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Poly> =
                minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, p)| p.clone()).collect();
            let head = Poly { terms: vec![minimal[k].terms[0].clone()] };
            let tail = Poly { terms: minimal[k].terms[1..].to_vec() };
            let mut terms = head.terms;
            if !tail.terms.is_empty() {
                if let Some(t) = c.reduce(&tail, &others) {
                    terms.extend(t.terms);
                }
            }
            Poly { terms }.monic()
        })
        .collect();
    reduced.sort_by(|a, b| cmp_keys(ord.kind(), b.lm(), a.lm()));
    reduced.iter().map(|p| c.export(Some(p))).collect()
}

/// Lex order with the eliminated variables ranked above the kept ones; both
/// blocks are ordered from the last ring variable to the first.
pub fn elimination_order(arity: usize, keep: &[usize]) -> MonomialOrder {
    let mut precedence: Vec<usize> = (0..arity).rev().filter(|i| !keep.contains(i)).collect();
    precedence.extend((0..arity).rev().filter(|i| keep.contains(i)));
    MonomialOrder::lex(precedence)
}

/// Generators of the intersection of the ideal with the subring in `keep`.
pub fn elimination_ideal(gens: &[MultiPoly], keep: &[usize]) -> Vec<MultiPoly> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let ord = elimination_order(first.ring().arity(), keep);
    buchberger(gens, &ord).into_iter().filter(|g| g.variables().iter().all(|v| keep.contains(v))).collect()
}
