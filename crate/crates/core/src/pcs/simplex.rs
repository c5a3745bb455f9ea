//! Exact rational simplex for `max c·z  s.t.  A z ≤ b, z ≥ 0` with `b ≥ 0`.
//!
//! The origin is feasible, so no phase one is needed. Pivoting follows
//! Bland's rule (lowest-index entering and leaving variables), which
//! guarantees termination on degenerate problems.

use num_traits::{Signed, Zero};

use crate::algebra::Q;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, solution: Vec<Q> },
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Unbounded => None,
        }
    }
}

pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::Structural("LP dimensions disagree".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Domain("LP right-hand side must be nonnegative".into()));
    }
    let width = n + m;
    // Row i: [A_i | I_i | b_i]; variables 0..n original, n..n+m slack.
    let mut t: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = Vec::with_capacity(width + 1);
            r.extend(row.iter().cloned());
            r.extend((0..m).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }));
            r.push(bi.clone());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut reduced: Vec<Q> = c.iter().cloned().chain((0..m).map(|_| Q::zero())).collect();
    let mut value = Q::zero();

    loop {
        let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((p, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        let piv = t[p][enter].clone();
        for x in t[p].iter_mut() {
            *x /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let f = reduced[enter].clone();
        for (x, y) in reduced.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
        value += &f * &prow[width];
        basis[p] = enter;
    }

    let mut solution = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            solution[bv] = t[i][width].clone();
        }
    }
    Ok(LpOutcome::Optimal { value, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6).
        let out = maximize(
            &[q(3), q(5)],
            &[vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]],
            &[q(4), q(12), q(18)],
        )
        .unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: q(36), solution: vec![q(2), q(6)] });
    }

    #[test]
    fn detects_unboundedness() {
        let out = maximize(&[q(1), q(1)], &[vec![q(1), q(0)]], &[q(1)]).unwrap();
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let h = |n: i64, d: i64| Q::new(n.into(), d.into());
        let out = maximize(
            &[h(3, 4), q(-150), h(1, 50), q(-6)],
            &[
                vec![h(1, 4), q(-60), h(-1, 25), q(9)],
                vec![h(1, 2), q(-90), h(-1, 50), q(3)],
                vec![q(0), q(0), q(1), q(0)],
            ],
            &[q(0), q(0), q(1)],
        )
        .unwrap();
        assert_eq!(out.value(), Some(&h(1, 20)));
    }

    proptest! {
        // Optimum is feasible and no feasible half-integer grid point beats it.
        #[test]
        fn optimum_is_feasible_and_dominates_grid(
            c in proptest::collection::vec(0i64..5, 2),
            a in proptest::collection::vec(proptest::collection::vec(1i64..5, 2), 1..4),
            b in proptest::collection::vec(1i64..10, 4),
        ) {
            let a: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let b: Vec<Q> = b[..a.len()].iter().map(|&x| q(x)).collect();
            let c: Vec<Q> = c.iter().map(|&x| q(x)).collect();
            let LpOutcome::Optimal { value, solution } = maximize(&c, &a, &b).unwrap() else {
                panic!("bounded problem reported unbounded");
            };
            for (row, bi) in a.iter().zip(&b) {
                let lhs: Q = row.iter().zip(&solution).map(|(x, y)| x * y).sum();
                prop_assert!(lhs <= *bi);
            }
            prop_assert!(solution.iter().all(|x| !x.is_negative()));
            for i in 0..=20 {
                for j in 0..=20 {
                    let z = [Q::new(i.into(), 2.into()), Q::new(j.into(), 2.into())];
                    let feasible = a.iter().zip(&b).all(|(row, bi)| {
                        row.iter().zip(&z).map(|(x, y)| x * y).sum::<Q>() <= *bi
                    });
                    if feasible {
                        let obj: Q = c.iter().zip(&z).map(|(x, y)| x * y).sum();
                        prop_assert!(obj <= value);
                    }
                }
            }
        }
    }
}
