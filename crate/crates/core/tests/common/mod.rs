//! Oracles shared by the integration tests. Everything here is computed
//! directly from definitions, without going through the library's
//! algorithms.

#![allow(dead_code)]

use num_traits::{One, Zero};
use pcoh::algebra::{enum_multisets, Label, Multiset, SparseVec, Q};
use pcoh::kleisli::Morphism;
use pcoh::pcs::PcsDescriptor;
use pcoh::rng;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn num(n: u64) -> Label {
    Label::Num(n)
}

pub fn ms(elems: &[u64]) -> Multiset {
    Multiset::from_elements(elems.iter().map(|&n| num(n)))
}

/// Sparse random morphism with coefficients `k/8`, rescaled so they sum to
/// at most one. Such a tensor is a clique of the arrow space between
/// builtins, since every input clique has coordinates summing to at most one.
pub fn random_morphism(dom: &PcsDescriptor, cod: &PcsDescriptor, degree: u32, seed: u64) -> Morphism {
    let mut r = rng::seeded(seed);
    let mut raw = Vec::new();
    for mu in enum_multisets(&dom.web().unwrap(), degree) {
        for b in cod.web().unwrap().elements() {
            let k = rng::unit_rational(&mut r, 8);
            if rng::flip(&mut r) && !k.is_zero() {
                raw.push((mu.clone(), b.clone(), k));
            }
        }
    }
    let total: Q = raw.iter().map(|(_, _, k)| k.clone()).sum();
    let norm = total.max(Q::one());
    Morphism::from_coeffs(dom.clone(), cod.clone(), degree, raw.into_iter().map(|(m, b, k)| (m, b, k / &norm)))
        .unwrap()
}

/// Hand-unrolled Kleene chain of `y ↦ ½·δ₀ + ½·shift(y)` truncated to
/// `0..w`, starting from the zero vector.
pub fn kleene_geometric(w: usize, iters: u32) -> Vec<Q> {
    let mut y = vec![Q::zero(); w];
    for _ in 0..iters {
        let mut next = vec![Q::zero(); w];
        next[0] = q(1, 2);
        for n in 1..w {
            next[n] += &y[n - 1] / Q::from_integer(2.into());
        }
        y = next;
    }
    y
}

/// Exhaustive search for a map `fine → coarse` whose fibres sum to the
/// coarse parts. Zero parts of `fine` may go anywhere.
pub fn grouping(fine: &[Vec<Q>], coarse: &[Vec<Q>]) -> Option<Vec<usize>> {
    let dim = coarse.first().map_or(0, Vec::len);
    let mut remaining: Vec<Vec<Q>> = coarse.to_vec();
    let mut assign = vec![0; fine.len()];
    fn go(i: usize, fine: &[Vec<Q>], rem: &mut [Vec<Q>], assign: &mut [usize], dim: usize) -> bool {
        if i == fine.len() {
            return rem.iter().all(|r| r.iter().all(Zero::is_zero));
        }
        for j in 0..rem.len() {
            if (0..dim).all(|c| fine[i][c] <= rem[j][c]) {
                for c in 0..dim {
                    rem[j][c] -= &fine[i][c];
                }
                assign[i] = j;
                let ok = go(i + 1, fine, rem, assign, dim);
                for c in 0..dim {
                    rem[j][c] += &fine[i][c];
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(0, fine, &mut remaining, &mut assign, dim).then_some(assign)
}

/// Random split of `target` into `k` nonnegative parts: each coordinate is
/// cut at sorted random points.
pub fn random_split(r: &mut rng::SeededRng, target: &[Q], k: usize) -> Vec<Vec<Q>> {
    let mut parts = vec![vec![Q::zero(); target.len()]; k];
    for (c, t) in target.iter().enumerate() {
        let mut cuts: Vec<Q> = (1..k).map(|_| t * rng::unit_rational(r, 8)).collect();
        cuts.sort();
        cuts.insert(0, Q::zero());
        cuts.push(t.clone());
        for i in 0..k {
            parts[i][c] = &cuts[i + 1] - &cuts[i];
        }
    }
    parts
}

pub fn coord_sum(x: &SparseVec) -> Q {
    x.to_dense().into_iter().sum()
}

/// `Σ_{k≤n} c_k t^k`.
pub fn horner(coeffs: &[Q], t: &Q, n: usize) -> Q {
    coeffs.iter().take(n + 1).rev().fold(Q::zero(), |acc, c| acc * t + c)
}
