//! Derivatives as limits of scaled differences.

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::diff::{check_local, delta_parts};
use super::function::{max_abs, scale, ConeFn};
use super::scalar::Scalar;
use super::space::local_norm;
use crate::algebra::{SparseVec, Q};
use crate::exec::Exec;
use crate::{Error, Result};

/// Split counts `2⁰ … 2¹²`.
pub const DEFAULT_SCHEDULE: [u64; 13] = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096];

/// How `Dᵏf(x | u₁,…,uₖ)` is approximated.
#[derive(Clone, Debug, PartialEq)]
pub enum DerivMode {
    /// `Φ` on uniform partitions; the last value, an upper bound.
    UniformSplits { schedule: Vec<u64> },
    /// `Δₖf(x | t·u)/tᵏ` along `t = 2^{-j}` until successive estimates agree.
    ScalingLimit { tol: f64, j_max: u32, richardson: bool },
    /// Interpolate `t ↦ Δₖf(x | t·u)` through `degree + 1` nodes and read off
    /// the `tᵏ` coefficient. Exact for polynomials of at most that degree.
    ExactPoly { degree: u32 },
}

impl DerivMode {
    pub fn uniform_splits() -> Self {
        DerivMode::UniformSplits { schedule: DEFAULT_SCHEDULE.to_vec() }
    }

    pub fn scaling_limit() -> Self {
        DerivMode::ScalingLimit { tol: 1e-8, j_max: 20, richardson: false }
    }
}

/// `Φ` along a schedule of uniform splits.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTrace<S> {
    pub schedule: Vec<u64>,
    /// One codomain point per schedule entry.
    pub phi: Vec<Vec<S>>,
    pub estimate: Vec<S>,
    pub nonincreasing: bool,
}

impl<S: Scalar> Serialize for DerivativeTrace<S> {
    /// One-dimensional codomains render each value as a string, others as
    /// arrays of strings.
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let render = |v: &[S]| -> serde_json::Value {
            if v.len() == 1 {
                v[0].render().into()
            } else {
                v.iter().map(|x| serde_json::Value::from(x.render())).collect()
            }
        };
        let mut st = s.serialize_struct("DerivativeTrace", 4)?;
        st.serialize_field("schedule", &self.schedule)?;
        st.serialize_field("phi", &self.phi.iter().map(|v| render(v)).collect::<Vec<_>>())?;
        st.serialize_field("estimate", &render(&self.estimate))?;
        st.serialize_field("nonincreasing", &self.nonincreasing)?;
        st.end()
    }
}

/// `Φ_k = kⁿ Δₙ(f)(x | u₁/k,…,uₙ/k)` for each `k` in `schedule`.
pub fn derivative<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    x: &SparseVec,
    us: &[SparseVec],
    schedule: &[u64],
    exec: Exec,
) -> Result<DerivativeTrace<S>> {
    check_local(f, x, us)?;
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("schedule must be a nonempty increasing list of positive counts".into()));
    }
    let n = us.len() as u32;
    let phi = exec
        .map(schedule, |&k| -> Result<Vec<S>> {
            let inv = Q::new(1.into(), k.into());
            let pieces: Vec<SparseVec> = us.iter().map(|u| u.scale(&inv)).collect();
            let d = delta_parts(f, x, &pieces, Exec::Sequential)?.signed;
            Ok(scale(&d, &S::from_q(&Q::from_integer(k.into())).powi(n)))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let slack = S::slack();
    let nonincreasing =
        phi.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(b, a)| b.clone() <= a.clone() + slack.clone()));
    let estimate = phi.last().expect("nonempty schedule").clone();
    Ok(DerivativeTrace { schedule: schedule.to_vec(), phi, estimate, nonincreasing })
}

/// `Dᵏf(base | dirs)` for `k = dirs.len()`.
///
/// Directions may be longer than the local ball allows; they are shrunk
/// for evaluation and the result rescaled by k-homogeneity.
pub fn derivative_at<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    base: &SparseVec,
    dirs: &[SparseVec],
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<S>> {
    let k = dirs.len() as u32;
    let dim = f.cod().dim();
    if k == 0 {
        check_local(f, base, &[])?;
        return f.eval(base);
    }
    let l = local_norm(base, dirs, f.dom())?;
    if l.is_zero() {
        return Ok(vec![S::nil(); dim]);
    }
    let t_max = if l > Q::one() { l.recip() } else { Q::one() };
    let at = |t: &Q| -> Result<Vec<S>> {
        let ds: Vec<SparseVec> = dirs.iter().map(|u| u.scale(t)).collect();
        Ok(delta_parts(f, base, &ds, exec)?.signed)
    };
    match mode {
        DerivMode::UniformSplits { schedule } => {
            let ds: Vec<SparseVec> = dirs.iter().map(|u| u.scale(&t_max)).collect();
            let tr = derivative(f, base, &ds, schedule, exec)?;
            Ok(scale(&tr.estimate, &S::from_q(&t_max.recip()).powi(k)))
        }
        DerivMode::ExactPoly { degree } => {
            if k > *degree {
                return Ok(vec![S::nil(); dim]);
            }
            let m = *degree as usize + 1;
            let nodes: Vec<Q> = (1..=m).map(|i| &t_max * Q::new((i as u64).into(), (m as u64).into())).collect();
            let values = nodes.iter().map(&at).collect::<Result<Vec<_>>>()?;
            let vander: Vec<Vec<S>> = nodes
                .iter()
                .map(|t| {
                    let t = S::from_q(t);
                    (0..m as u32).map(|p| t.powi(p)).collect()
                })
                .collect();
            (0..dim)
                .map(|b| {
                    let rhs: Vec<S> = values.iter().map(|v| v[b].clone()).collect();
                    Ok(solve(vander.clone(), rhs)?[k as usize].clone())
                })
                .collect()
        }
        DerivMode::ScalingLimit { tol, j_max, richardson } => {
            // Rows of the Richardson table; row j holds estimates at t_max·2^{-j}.
            let mut prev_row: Vec<Vec<S>> = Vec::new();
            let mut prev_best: Option<Vec<S>> = None;
            let mut t = t_max.clone();
            let half = Q::new(1.into(), 2.into());
            let mut trail = Vec::new();
            for _ in 0..=*j_max {
                let e = scale(&at(&t)?, &S::from_q(&t.recip()).powi(k));
                let mut row = vec![e];
                if *richardson {
                    for m in 1..=prev_row.len().min(8) {
                        let c = S::from_i64((1i64 << m) - 1);
                        let (a, b) = (&row[m - 1], &prev_row[m - 1]);
                        let next = a.iter().zip(b).map(|(x, y)| x.clone() + (x.clone() - y.clone()) / c.clone()).collect();
                        row.push(next);
                    }
                }
                let best = row.last().expect("nonempty row").clone();
                if let Some(p) = &prev_best {
                    let gap = max_abs(&super::function::sub(&best, p));
                    trail.push(gap);
                    if gap < *tol {
                        return Ok(best);
                    }
                }
                prev_best = Some(best);
                prev_row = row;
                t *= &half;
            }
            Err(Error::Estimation(format!(
                "scaled differences still moved by {:.3e} after {j_max} halvings (successive gaps {:?})",
                trail.last().copied().unwrap_or(f64::NAN),
                trail.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>()
            )))
        }
    }
}

/// `Dᵏg(0 | dirs)`.
pub fn derivative_at_zero<S: Scalar, F: ConeFn<S> + ?Sized>(
    g: &F,
    dirs: &[SparseVec],
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<S>> {
    derivative_at(g, &g.dom().zero(), dirs, mode, exec)
}

/// Gaussian elimination with partial pivoting.
fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Result<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].magnitude().partial_cmp(&a[j][col].magnitude()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        if a[piv][col] == S::nil() {
            return Err(Error::Estimation("singular interpolation system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone() * factor.clone();
                a[r][c] = a[r][c].clone() - v;
            }
            let v = b[col].clone() * factor;
            b[r] = b[r].clone() - v;
        }
    }
    let mut x = vec![S::nil(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Ok(x)
}
