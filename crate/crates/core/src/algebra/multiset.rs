use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{factorial, Label, Web};
use crate::{Error, Result};

/// Finite multiset of labels.
///
/// Ordered by degree first, then lexicographically on the sorted element
/// sequence, so `[] < [0] < [1] < [0,0] < [0,1] < …`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Label, u32)>", into = "Vec<(Label, u32)>")]
pub struct Multiset {
    counts: BTreeMap<Label, u32>,
    degree: u32,
}

impl Multiset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(l: Label) -> Self {
        let mut m = Self::default();
        m.insert(l, 1);
        m
    }

    pub fn from_elements(elems: impl IntoIterator<Item = Label>) -> Self {
        let mut m = Self::default();
        for l in elems {
            m.insert(l, 1);
        }
        m
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (Label, u32)>) -> Self {
        let mut m = Self::default();
        for (l, c) in counts {
            m.insert(l, c);
        }
        m
    }

    pub fn insert(&mut self, l: Label, times: u32) {
        if times > 0 {
            *self.counts.entry(l).or_insert(0) += times;
            self.degree += times;
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.degree == 0
    }

    pub fn count(&self, l: &Label) -> u32 {
        self.counts.get(l).copied().unwrap_or(0)
    }

    /// Distinct labels with multiplicities, in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&Label, u32)> + '_ {
        self.counts.iter().map(|(l, &c)| (l, c))
    }

    /// Elements with repetition, in label order.
    pub fn elements(&self) -> impl Iterator<Item = &Label> + '_ {
        self.counts.iter().flat_map(|(l, &c)| std::iter::repeat_n(l, c as usize))
    }

    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (l, c) in other.iter() {
            m.insert(l.clone(), c);
        }
        m
    }

    /// Largest element together with the multiset minus one copy of it.
    pub fn split_last(&self) -> Option<(Multiset, Label)> {
        let (last, &c) = self.counts.iter().next_back()?;
        let mut rest = self.clone();
        if c == 1 {
            rest.counts.remove(last);
        } else {
            *rest.counts.get_mut(last).expect("present") -= 1;
        }
        rest.degree -= 1;
        Some((rest, last.clone()))
    }

    /// True when every element belongs to `web`.
    pub fn within(&self, web: &Web) -> bool {
        self.counts.keys().all(|l| web.contains(l))
    }

    /// Relabel every element through `f`, merging collisions.
    pub fn map(&self, mut f: impl FnMut(&Label) -> Label) -> Multiset {
        Multiset::from_counts(self.iter().map(|(l, c)| (f(l), c)))
    }
}

impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.elements().cmp(other.elements()))
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements()).finish()
    }
}

impl TryFrom<Vec<(Label, u32)>> for Multiset {
    type Error = Error;

    fn try_from(v: Vec<(Label, u32)>) -> Result<Self> {
        Ok(Multiset::from_counts(v))
    }
}

impl From<Multiset> for Vec<(Label, u32)> {
    fn from(m: Multiset) -> Self {
        m.counts.into_iter().collect()
    }
}

/// Multinomial `k! / Π μ(a)!` where `k` is the degree of `μ`.
pub fn alpha(mu: &Multiset) -> BigInt {
    let denom = mu.iter().fold(BigInt::one(), |acc, (_, c)| acc * factorial(c));
    factorial(mu.degree()) / denom
}

/// `C(n + d, d)`: number of multisets of degree ≤ `d` over `n` elements.
pub fn multiset_count(n: usize, d: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=d as u64 {
        acc = acc * BigInt::from(n as u64 + i) / BigInt::from(i);
    }
    acc
}

/// All multisets over `web` of degree ≤ `max_degree`, in canonical order.
pub fn enum_multisets(web: &Web, max_degree: u32) -> Vec<Multiset> {
    let mut sorted: Vec<&Label> = web.elements().iter().collect();
    sorted.sort();
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for k in 0..=max_degree as usize {
        // Non-decreasing index sequences of length k, generated lexicographically.
        fill(&sorted, k, 0, &mut current, &mut out);
    }
    out
}

fn fill(sorted: &[&Label], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Multiset>) {
    if cur.len() == k {
        out.push(Multiset::from_elements(cur.iter().map(|&i| sorted[i].clone())));
        return;
    }
    for i in from..sorted.len() {
        cur.push(i);
        fill(sorted, k, i, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn ms(v: &[u64]) -> Multiset {
        Multiset::from_elements(v.iter().map(|&n| Label::Num(n)))
    }

    #[test]
    fn canonical_order() {
        let seq = [ms(&[]), ms(&[0]), ms(&[1]), ms(&[0, 0]), ms(&[0, 1]), ms(&[1, 1])];
        for w in seq.windows(2) {
            assert!(w[0] < w[1], "{:?} < {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(&ms(&[])), BigInt::one());
        assert_eq!(alpha(&ms(&[0, 0])), BigInt::one());
        assert_eq!(alpha(&ms(&[0, 1])), BigInt::from(2));
        assert_eq!(alpha(&ms(&[0, 0, 1, 2])), BigInt::from(12));
    }

    #[test]
    fn split_last_removes_one_copy() {
        let (rest, last) = ms(&[0, 2, 2]).split_last().unwrap();
        assert_eq!((rest, last), (ms(&[0, 2]), Label::Num(2)));
        assert!(ms(&[]).split_last().is_none());
    }

    #[test]
    fn json_form() {
        let m = ms(&[0, 0, 3]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["0",2],["3",1]]"#);
        let back: Multiset = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn enumeration_is_sorted_complete_and_distinct(n in 0u64..5, d in 0u32..5) {
            let web = Web::nat(n);
            let all = enum_multisets(&web, d);
            prop_assert_eq!(all.len(), multiset_count(n as usize, d).to_usize().unwrap());
            for w in all.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            prop_assert!(all.iter().all(|m| m.degree() <= d && m.within(&web)));
        }

        #[test]
        fn alpha_counts_orderings(v in proptest::collection::vec(0u64..3, 0..6)) {
            // Number of distinct permutations of the element sequence.
            let m = ms(&v);
            let mut perms = std::collections::HashSet::new();
            permute(&mut v.clone(), 0, &mut perms);
            prop_assert_eq!(alpha(&m), BigInt::from(perms.len()));
        }
    }

    fn permute(v: &mut Vec<u64>, i: usize, out: &mut std::collections::HashSet<Vec<u64>>) {
        if i == v.len() {
            out.insert(v.clone());
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            permute(v, i + 1, out);
            v.swap(i, j);
        }
    }
}
