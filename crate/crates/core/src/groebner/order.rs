//! Monomial orders.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A monomial order on exponent vectors. `precedence[0]` is the largest
/// variable, `precedence[1]` the next, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, precedence: Vec<usize>) -> Self {
        let mut sorted = precedence.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(i, &v)| i == v), "precedence must be a permutation of 0..n");
        MonomialOrder { kind, precedence }
    }

    pub fn lex(precedence: Vec<usize>) -> Self {
        Self::new(OrderKind::Lex, precedence)
    }

    pub fn degrevlex(precedence: Vec<usize>) -> Self {
        Self::new(OrderKind::DegRevLex, precedence)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn arity(&self) -> usize {
        self.precedence.len()
    }

    /// Exponents rearranged so that position 0 holds the largest variable.
    pub fn permute(&self, e: &[u32]) -> Vec<u32> {
        self.precedence.iter().map(|&i| e[i]).collect()
    }

    /// Inverse of [`MonomialOrder::permute`].
    pub fn unpermute(&self, key: &[u32]) -> Vec<u32> {
        let mut e = vec![0; key.len()];
        for (k, &i) in self.precedence.iter().enumerate() {
            e[i] = key[k];
        }
        e
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        compare_permuted(self.kind, self.precedence.iter().map(|&i| a[i]), self.precedence.iter().map(|&i| b[i]), a, b)
    }
}

fn compare_permuted(
    kind: OrderKind,
    a: impl DoubleEndedIterator<Item = u32> + Clone,
    b: impl DoubleEndedIterator<Item = u32> + Clone,
    ra: &[u32],
    rb: &[u32],
) -> Ordering {
    match kind {
        OrderKind::Lex => a.cmp(b),
        OrderKind::DegRevLex => {
            let da: u32 = ra.iter().sum();
            let db: u32 = rb.iter().sum();
            da.cmp(&db).then_with(|| {
                // the smaller exponent in the last differing variable wins
                for (x, y) in a.rev().zip(b.rev()) {
                    if x != y {
                        return y.cmp(&x);
                    }
                }
                Ordering::Equal
            })
        }
    }
}

/// Compares exponent vectors already permuted into precedence order.
pub(crate) fn cmp_keys(kind: OrderKind, a: &[u32], b: &[u32]) -> Ordering {
    compare_permuted(kind, a.iter().copied(), b.iter().copied(), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn orders() -> Vec<MonomialOrder> {
        vec![
            MonomialOrder::lex(vec![0, 1, 2]),
            MonomialOrder::lex(vec![2, 0, 1]),
            MonomialOrder::degrevlex(vec![0, 1, 2]),
            MonomialOrder::degrevlex(vec![1, 2, 0]),
        ]
    }

    #[test]
    fn small_examples() {
        let lex = MonomialOrder::lex(vec![0, 1]);
        assert_eq!(lex.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        let drl = MonomialOrder::degrevlex(vec![0, 1, 2]);
        // total degree decides first
        assert_eq!(drl.cmp(&[0, 3, 0], &[1, 0, 2]), Ordering::Greater);
        assert_eq!(drl.cmp(&[2, 1, 0], &[0, 0, 2]), Ordering::Greater);
        assert_eq!(drl.cmp(&[1, 1, 0], &[2, 0, 0]), Ordering::Less);
    }

    proptest! {
        #[test]
        fn order_axioms(
            a in prop::collection::vec(0u32..4, 3),
            b in prop::collection::vec(0u32..4, 3),
            c in prop::collection::vec(0u32..4, 3),
        ) {
            let add = |x: &[u32], y: &[u32]| -> Vec<u32> { x.iter().zip(y).map(|(i, j)| i + j).collect() };
            for ord in orders() {
                let ab = ord.cmp(&a, &b);
                prop_assert_eq!(ab, ord.cmp(&b, &a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                prop_assert_eq!(ord.cmp(&add(&a, &c), &add(&b, &c)), ab);
                prop_assert_ne!(ord.cmp(&[0, 0, 0], &a), Ordering::Greater);
                if ab != Ordering::Greater && ord.cmp(&b, &c) != Ordering::Greater {
                    prop_assert_ne!(ord.cmp(&a, &c), Ordering::Greater);
                }
                let key_a = ord.permute(&a);
                prop_assert_eq!(ord.unpermute(&key_a), a.clone());
                prop_assert_eq!(cmp_keys(ord.kind(), &key_a, &ord.permute(&b)), ab);
            }
        }
    }
}
