//! Taylor partial sums, remainders and the Bernstein-type expansion check.

use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::derivative::{derivative_at, DerivMode};
use super::diff::check_local;
use super::function::{add, scale, sub, ConeFn};
use super::scalar::Scalar;
use crate::algebra::{factorial, SparseVec, Q};
use crate::exec::Exec;
use crate::Result;

/// `Dᵏf(base | dir,…,dir)/k!` for `k = 1..=n`.
fn taylor_terms<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    n: usize,
    base: &SparseVec,
    dir: &SparseVec,
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<Vec<S>>> {
    (1..=n)
        .map(|k| {
            let dirs = vec![dir.clone(); k];
            let d = derivative_at(f, base, &dirs, mode, exec)?;
            let inv = S::from_q(&Q::from_integer(factorial(k as u32)).recip());
            Ok(scale(&d, &inv))
        })
        .collect()
}

/// `f(base) + Σ_{k=1}^n Dᵏf(base | dir,…,dir)/k!`.
pub fn taylor_partial_at<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    n: usize,
    base: &SparseVec,
    dir: &SparseVec,
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<S>> {
    check_local(f, base, std::slice::from_ref(dir))?;
    let mut acc = f.eval(base)?;
    for t in taylor_terms(f, n, base, dir, mode, exec)? {
        add(&mut acc, &t);
    }
    Ok(acc)
}

/// Taylor partial sum of order `n` at `0` towards `x`.
pub fn taylor_partial<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    n: usize,
    x: &SparseVec,
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<S>> {
    taylor_partial_at(f, n, &f.dom().zero(), x, mode, exec)
}

/// `f(base + dir)` minus the order-`n` Taylor partial sum at `base`.
pub fn remainder<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    n: usize,
    base: &SparseVec,
    dir: &SparseVec,
    mode: &DerivMode,
    exec: Exec,
) -> Result<Vec<S>> {
    let t = taylor_partial_at(f, n, base, dir, mode, exec)?;
    Ok(sub(&f.eval(&base.add(dir)?)?, &t))
}

#[derive(Clone, Debug)]
pub struct BernsteinReport<S> {
    /// `f(x) − T_N`, one codomain point per `N = 0..=n_max`.
    pub remainders: Vec<Vec<S>>,
    pub nonnegative: bool,
    pub nonincreasing: bool,
    /// Largest coordinate of the last remainder.
    pub final_remainder: f64,
    pub tol: f64,
    pub passed: bool,
}

impl<S: Scalar> Serialize for BernsteinReport<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let rs: Vec<Vec<String>> = self.remainders.iter().map(|v| v.iter().map(Scalar::render).collect()).collect();
        let mut st = s.serialize_struct("BernsteinReport", 6)?;
        st.serialize_field("remainders", &rs)?;
        st.serialize_field("nonnegative", &self.nonnegative)?;
        st.serialize_field("nonincreasing", &self.nonincreasing)?;
        st.serialize_field("final_remainder", &self.final_remainder)?;
        st.serialize_field("tol", &self.tol)?;
        st.serialize_field("passed", &self.passed)?;
        st.end()
    }
}

/// Remainders `f(x) − T_N f(0|x)` for `N ≤ n_max`: they should be
/// nonnegative, nonincreasing, and end below `tol`.
pub fn bernstein_check<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    x: &SparseVec,
    n_max: usize,
    tol: f64,
    mode: &DerivMode,
    exec: Exec,
) -> Result<BernsteinReport<S>> {
    let zero = f.dom().zero();
    check_local(f, &zero, std::slice::from_ref(x))?;
    let fx = f.eval(x)?;
    let mut partial = f.eval(&zero)?;
    let mut remainders = vec![sub(&fx, &partial)];
    for t in taylor_terms(f, n_max, &zero, x, mode, exec)? {
        add(&mut partial, &t);
        remainders.push(sub(&fx, &partial));
    }
    let tol_s = S::from_q(&Q::from_float(tol).unwrap_or_else(Q::zero));
    let nonnegative = remainders.iter().flatten().all(|r| r.clone() + tol_s.clone() >= S::nil());
    let nonincreasing = remainders
        .windows(2)
        .all(|w| w[1].iter().zip(&w[0]).all(|(b, a)| b.clone() <= a.clone() + tol_s.clone()));
    let last = remainders.last().expect("at least N = 0");
    let final_remainder = last.iter().map(|r| r.to_f64()).fold(0.0, f64::max);
    let passed = nonnegative && nonincreasing && last.iter().all(|r| r.to_f64().abs() < tol);
    Ok(BernsteinReport { remainders, nonnegative, nonincreasing, final_remainder, tol, passed })
}
