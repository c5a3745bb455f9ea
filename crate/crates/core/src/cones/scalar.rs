//! Scalars for cone computations: exact rationals, or a double-double float
//! (≈106-bit mantissa) when limits have to be taken numerically.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::algebra::{format_q, Q};

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact.
    const EXACT: bool;

    fn nil() -> Self;
    fn unit() -> Self;
    fn from_q(q: &Q) -> Self;
    /// Exact rational value of this scalar.
    fn to_q(&self) -> Q;
    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(n.into()))
    }

    fn magnitude(&self) -> Self {
        if *self < Self::nil() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Values at or above this count as nonnegative in sign tests.
    fn sign_floor() -> Self {
        if Self::EXACT {
            Self::nil()
        } else {
            Self::from_q(&Q::new((-1).into(), 1_000_000_000.into()))
        }
    }

    /// Slack allowed in monotonicity comparisons.
    fn slack() -> Self {
        if Self::EXACT {
            Self::nil()
        } else {
            Self::from_q(&Q::new(1.into(), BigInt::from(10u8).pow(20)))
        }
    }

    fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::unit(), |acc, _| acc * self.clone())
    }

    /// Text form for reports.
    fn render(&self) -> String;
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn nil() -> Self {
        Zero::zero()
    }

    fn unit() -> Self {
        num_traits::One::one()
    }

    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn to_q(&self) -> Q {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }

    fn render(&self) -> String {
        format_q(self)
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return DoubleDouble::from_f64(hi);
        }
        let rest = n - BigInt::from_f64(hi).expect("finite");
        DoubleDouble::new(hi, rest.to_f64().unwrap_or(0.0))
    }

    /// `exp(x)` by argument halving and a Taylor series.
    pub fn exp(self) -> Self {
        let mut halvings = 0;
        let mut r = self;
        while r.hi.abs() > 1.0 / 64.0 {
            r = r * DoubleDouble::from_f64(0.5);
            halvings += 1;
        }
        let mut term = DoubleDouble::from_f64(1.0);
        let mut sum = term;
        for k in 1..30 {
            term = term * r / DoubleDouble::from_f64(k as f64);
            sum = sum + term;
        }
        for _ in 0..halvings {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * DoubleDouble::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DoubleDouble::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi + self.lo)?;
        if self.lo != 0.0 {
            write!(f, " [{:e} + {:e}]", self.hi, self.lo)?;
        }
        Ok(())
    }
}

impl Scalar for DoubleDouble {
    const EXACT: bool = false;

    fn nil() -> Self {
        DoubleDouble::from_f64(0.0)
    }

    fn unit() -> Self {
        DoubleDouble::from_f64(1.0)
    }

    fn from_q(q: &Q) -> Self {
        DoubleDouble::from_bigint(q.numer()) / DoubleDouble::from_bigint(q.denom())
    }

    fn to_q(&self) -> Q {
        let part = |x: f64| Q::from_float(x).unwrap_or_else(Q::zero);
        part(self.hi) + part(self.lo)
    }

    fn to_f64(&self) -> f64 {
        self.hi + self.lo
    }

    fn render(&self) -> String {
        format!("{:e}", self.hi + self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type DD = DoubleDouble;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn rel_err(a: &DD, want: &Q) -> f64 {
        let diff = a.to_q() - want;
        if want.is_zero() {
            Scalar::to_f64(&diff).abs()
        } else {
            Scalar::to_f64(&(diff / want)).abs()
        }
    }

    #[test]
    fn beats_double_precision() {
        let third = DD::from_q(&q(1, 3));
        assert!(rel_err(&third, &q(1, 3)) < 1e-31);
        let back = third * DD::from_f64(3.0);
        assert!(rel_err(&back, &q(1, 1)) < 1e-31);
        // 1 + 2^-80 survives, unlike in f64.
        let tiny = DD::from_q(&Q::new(1.into(), BigInt::from(2).pow(80)));
        assert!((DD::unit() + tiny) - DD::unit() == tiny);
    }

    #[test]
    fn exponential() {
        let e = DD::unit().exp();
        // e to 32 digits.
        let want = Q::new("27182818284590452353602874713527".parse().unwrap(), BigInt::from(10).pow(31));
        assert!(rel_err(&e, &want) < 1e-30);
        let x = DD::from_q(&q(-1, 2)).exp() * DD::from_q(&q(1, 2)).exp();
        assert!(rel_err(&x, &q(1, 1)) < 1e-30);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (x, y) = (q(a, b), q(c, d));
            let (dx, dy) = (DD::from_q(&x), DD::from_q(&y));
            prop_assert!(rel_err(&(dx * dy), &(&x * &y)) < 1e-30);
            if !y.is_zero() {
                prop_assert!(rel_err(&(dx / dy), &(&x / &y)) < 1e-30);
            }
            let sum = &x + &y;
            let err = Scalar::to_f64(&((dx + dy).to_q() - &sum)).abs();
            prop_assert!(err <= 1e-30 * (Scalar::to_f64(&x).abs() + Scalar::to_f64(&y).abs()));
            prop_assert_eq!(dx < dy, x < y);
        }
    }
}
