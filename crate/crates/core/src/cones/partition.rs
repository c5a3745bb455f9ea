//! Partitions of a cone point and their common refinement.


use super::diff::{check_local, delta};
use super::function::{add, ConeFn};
use super::scalar::Scalar;
use super::space::meet;
use crate::algebra::SparseVec;
use crate::exec::Exec;
use crate::{Error, Result};

/// A finite multiset of points summing exactly to `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    parts: Vec<SparseVec>,
    target: SparseVec,
}

impl Partition {
    /// The partition of `Σ parts`. Needs at least one part.
    pub fn new(parts: Vec<SparseVec>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Structural("empty partition".into()))?;
        let mut target = SparseVec::zeros(first.web().clone());
        for p in &parts {
            target = target.add(p)?;
        }
        Ok(Partition { parts, target })
    }

    /// Checks that `parts` sum to `target`.
    pub fn of(target: SparseVec, parts: Vec<SparseVec>) -> Result<Self> {
        let p = Self::new(parts)?;
        if p.target != target {
            return Err(Error::Structural("parts do not sum to the target".into()));
        }
        Ok(p)
    }

    pub fn trivial(target: SparseVec) -> Self {
        Partition { parts: vec![target.clone()], target }
    }

    /// `k` copies of `u/k`.
    pub fn uniform(u: &SparseVec, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Structural("uniform partition into zero parts".into()));
        }
        let piece = u.scale(&crate::algebra::Q::new(1.into(), (k as u64).into()));
        Ok(Partition { parts: vec![piece; k], target: u.clone() })
    }

    pub fn parts(&self) -> &[SparseVec] {
        &self.parts
    }

    pub fn target(&self) -> &SparseVec {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Equal as multisets of parts.
    pub fn same_parts(&self, other: &Partition) -> bool {
        let key = |p: &Partition| {
            let mut v: Vec<Vec<_>> = p.parts.iter().filter(|x| !x.is_zero()).map(SparseVec::to_dense).collect();
            v.sort();
            v
        };
        key(self) == key(other)
    }

    /// Whether grouping this partition's parts by `group[i]` yields `coarse`.
    pub fn refines_by(&self, coarse: &Partition, group: &[usize]) -> Result<bool> {
        if group.len() != self.parts.len() || group.iter().any(|&g| g >= coarse.parts.len()) {
            return Ok(false);
        }
        let mut sums = vec![SparseVec::zeros(self.target.web().clone()); coarse.parts.len()];
        for (p, &g) in self.parts.iter().zip(group) {
            sums[g] = sums[g].add(p)?;
        }
        Ok(sums.iter().zip(&coarse.parts).all(|(s, c)| s == c))
    }
}

/// A common refinement together with where each of its parts came from.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub partition: Partition,
    /// `left[k]`: index of the part of the first input containing part `k`.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Refinement {
    /// Check both groupings exactly.
    pub fn verify(&self, p1: &Partition, p2: &Partition) -> Result<bool> {
        Ok(self.partition.refines_by(p1, &self.left)? && self.partition.refines_by(p2, &self.right)?)
    }
}

/// Refine two partitions of the same point: while some remaining pieces
/// `a` of `p1` and `b` of `p2` overlap, emit `a ∧ b` and subtract it from
/// both. Each step makes that pair orthogonal without creating new
/// overlaps, so the loop ends, and equal sums force both worklists to zero.
pub fn common_refinement(p1: &Partition, p2: &Partition) -> Result<Refinement> {
    if p1.target != p2.target {
        return Err(Error::Structural("partitions of different points".into()));
    }
    let mut a = p1.parts.clone();
    let mut b = p2.parts.clone();
    let (mut parts, mut left, mut right) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..a.len() {
        for j in 0..b.len() {
            if a[i].is_zero() {
                break;
            }
            let m = meet(&a[i], &b[j])?;
            if m.is_zero() {
                continue;
            }
            a[i] = a[i].sub(&m)?;
            b[j] = b[j].sub(&m)?;
            parts.push(m);
            left.push(i);
            right.push(j);
        }
    }
    debug_assert!(a.iter().chain(&b).all(SparseVec::is_zero));
    if parts.is_empty() {
        parts.push(p1.target.clone());
        left.push(0);
        right.push(0);
    }
    Ok(Refinement { partition: Partition { parts, target: p1.target.clone() }, left, right })
}

/// `Φ = Σ_{y₁∈π₁} … Σ_{yₙ∈πₙ} Δₙ(f)(x | y₁,…,yₙ)`.
pub fn phi<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    x: &SparseVec,
    partitions: &[Partition],
    exec: Exec,
) -> Result<Vec<S>> {
    let targets: Vec<SparseVec> = partitions.iter().map(|p| p.target.clone()).collect();
    check_local(f, x, &targets)?;
    let sizes: Vec<usize> = partitions.iter().map(Partition::len).collect();
    let total: usize = sizes.iter().product();
    let terms = exec.map_range(total, |mut k| {
        let ys: Vec<SparseVec> = partitions
            .iter()
            .zip(&sizes)
            .map(|(p, &s)| {
                let y = p.parts[k % s].clone();
                k /= s;
                y
            })
            .collect();
        delta(f, x, &ys)
    });
    let mut acc = vec![S::nil(); f.cod().dim()];
    for t in terms {
        add(&mut acc, &t?);
    }
    Ok(acc)
}
