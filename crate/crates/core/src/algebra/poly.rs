use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{enum_multisets, Label, Multiset, SparseVec, Web, Q};

/// `x^μ = Π_a x_a^{μ(a)}`; labels outside the web of `x` read as zero.
pub fn monomial(x: &SparseVec, mu: &Multiset) -> Q {
    let mut acc = Q::one();
    for (a, c) in mu.iter() {
        let xa = x.get(a);
        if xa.is_zero() {
            return Q::zero();
        }
        acc *= num_traits::pow(xa, c as usize);
    }
    acc
}

/// Promotion `x^!` restricted to multisets of degree ≤ `max_degree` over the
/// support of `x`. Only nonzero values are returned.
pub fn promote(x: &SparseVec, max_degree: u32) -> BTreeMap<Multiset, Q> {
    let support = Web::new(x.support()).expect("support labels are distinct");
    enum_multisets(&support, max_degree)
        .into_iter()
        .map(|mu| {
            let v = monomial(x, &mu);
            (mu, v)
        })
        .collect()
}

/// Polynomial with nonnegative rational coefficients in variables indexed by
/// labels: a finite map from monomials (multisets) to coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Multiset, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Multiset::empty(), c);
        p
    }

    pub fn variable(l: Label) -> Self {
        let mut p = Self::zero();
        p.add_term(Multiset::singleton(l), Q::one());
        p
    }

    pub fn add_term(&mut self, mu: Multiset, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mu).or_insert_with(Q::zero);
        *e += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multiset, &Q)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, mu: &Multiset) -> Q {
        self.terms.get(mu).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Multiset::degree).max()
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (mu, c) in &other.terms {
            self.add_term(mu.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect() }
    }

    /// Product truncated at `max_degree`; the flag reports whether any
    /// nonzero term was dropped.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: u32) -> (Polynomial, bool) {
        let mut out = Polynomial::zero();
        let mut dropped = false;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > max_degree {
                    dropped = true;
                    continue;
                }
                out.add_term(m1.sum(m2), c1 * c2);
            }
        }
        (out, dropped)
    }

    /// Drop terms above `max_degree`; the flag reports whether any were dropped.
    pub fn truncate(&mut self, max_degree: u32) -> bool {
        let before = self.terms.len();
        self.terms.retain(|m, _| m.degree() <= max_degree);
        before != self.terms.len()
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: &SparseVec) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (mu, c)| acc + c * monomial(x, mu))
    }

    /// Rename variables, merging collisions.
    pub fn map_vars(&self, mut f: impl FnMut(&Label) -> Label) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mu, c) in &self.terms {
            out.add_term(mu.map(&mut f), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn ms(v: &[u64]) -> Multiset {
        Multiset::from_elements(v.iter().map(|&n| Label::Num(n)))
    }

    #[test]
    fn monomial_examples() {
        let w = Arc::new(Web::nat(2));
        let x = SparseVec::from_dense(w, vec![q(1, 2), q(0, 1)]).unwrap();
        assert_eq!(monomial(&x, &ms(&[])), q(1, 1));
        assert_eq!(monomial(&x, &ms(&[0, 0])), q(1, 4));
        assert_eq!(monomial(&x, &ms(&[0, 1])), q(0, 1));
    }

    #[test]
    fn promote_examples() {
        let w = Arc::new(Web::nat(2));
        let zero = SparseVec::zeros(w.clone());
        assert_eq!(promote(&zero, 3), BTreeMap::from([(ms(&[]), q(1, 1))]));
        let half = SparseVec::from_dense(w, vec![q(1, 2), q(1, 2)]).unwrap();
        let p = promote(&half, 2);
        let want: BTreeMap<_, _> = [
            (ms(&[]), q(1, 1)),
            (ms(&[0]), q(1, 2)),
            (ms(&[1]), q(1, 2)),
            (ms(&[0, 0]), q(1, 4)),
            (ms(&[0, 1]), q(1, 4)),
            (ms(&[1, 1]), q(1, 4)),
        ]
        .into();
        assert_eq!(p, want);
    }

    #[test]
    fn truncated_product_reports_drops() {
        let x = Polynomial::variable(Label::Num(0));
        let (sq, dropped) = x.mul_truncated(&x, 2);
        assert!(!dropped);
        assert_eq!(sq.coefficient(&ms(&[0, 0])), q(1, 1));
        let (_, dropped) = sq.mul_truncated(&x, 2);
        assert!(dropped);
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((0i64..6, 1i64..6), n)
    }

    proptest! {
        #[test]
        fn promotion_is_multiplicative(v in arb_vec(3), d in 0u32..4) {
            let w = Arc::new(Web::nat(3));
            let x = SparseVec::from_dense(w, v.iter().map(|&(a, b)| q(a, b)).collect()).unwrap();
            let p = promote(&x, d);
            for (m1, v1) in &p {
                for (m2, v2) in &p {
                    if m1.degree() + m2.degree() <= d {
                        let key = m1.sum(m2);
                        let got = p.get(&key).cloned().unwrap_or_else(Q::zero);
                        prop_assert_eq!(got, v1 * v2);
                    }
                }
                prop_assert!(m1.degree() <= d);
            }
        }

        #[test]
        fn monomial_is_monotone(
            v in arb_vec(3),
            extra in proptest::collection::vec(0i64..4, 3),
            mu in proptest::collection::vec(0u64..3, 0..5),
        ) {
            let w = Arc::new(Web::nat(3));
            let u = SparseVec::from_dense(w.clone(), v.iter().map(|&(a, b)| q(a, b)).collect()).unwrap();
            let bump = SparseVec::from_dense(w, extra.iter().map(|&e| q(e, 3)).collect()).unwrap();
            let big = u.add(&bump).unwrap();
            prop_assert!(crate::algebra::leq(&u, &big).unwrap());
            let mu = ms(&mu);
            prop_assert!(monomial(&u, &mu) <= monomial(&big, &mu));
        }
    }
}
