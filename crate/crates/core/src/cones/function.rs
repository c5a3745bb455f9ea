//! Functions between cones, given only through evaluation.

use std::sync::Arc;


use super::scalar::Scalar;
use super::space::ConeSpace;
use crate::algebra::{SparseVec, Q};
use crate::kleisli::Morphism;
use crate::{Error, Result};

/// A deterministic map from the unit ball of `dom` into `cod`.
///
/// Inputs are exact rational points; outputs are dense over the codomain web.
pub trait ConeFn<S: Scalar>: Send + Sync {
    fn dom(&self) -> &ConeSpace;
    fn cod(&self) -> &ConeSpace;
    fn eval(&self, x: &SparseVec) -> Result<Vec<S>>;

    /// Degree bound when the function is known to be a polynomial.
    fn degree(&self) -> Option<u32> {
        None
    }
}

/// `x ↦ f · x^!` for a morphism `f`.
#[derive(Clone, Debug)]
pub struct MorphismFn {
    f: Morphism,
    dom: ConeSpace,
    cod: ConeSpace,
}

impl MorphismFn {
    pub fn new(f: Morphism) -> Result<Self> {
        let dom = ConeSpace::pcs(f.dom().clone())?;
        let cod = ConeSpace::pcs(f.cod().clone())?;
        Ok(MorphismFn { f, dom, cod })
    }

    pub fn morphism(&self) -> &Morphism {
        &self.f
    }
}

impl<S: Scalar> ConeFn<S> for MorphismFn {
    fn dom(&self) -> &ConeSpace {
        &self.dom
    }

    fn cod(&self) -> &ConeSpace {
        &self.cod
    }

    fn eval(&self, x: &SparseVec) -> Result<Vec<S>> {
        if **x.web() != **self.dom.web() {
            return Err(Error::WebMismatch(format!("point is not over the web of {}", self.dom)));
        }
        let cod = self.cod.web();
        let mut out = vec![S::nil(); cod.len()];
        if S::EXACT {
            let y = self.f.apply(x)?;
            for (i, q) in y.iter_indexed() {
                out[i] = S::from_q(q);
            }
            return Ok(out);
        }
        let xs: Vec<S> = x.to_dense().iter().map(S::from_q).collect();
        for (b, p) in self.f.rows() {
            let mut acc = S::nil();
            for (mu, c) in p.terms() {
                let mut term = S::from_q(c);
                for (a, k) in mu.iter() {
                    let i = x.web().index_of(a).expect("rows are checked against the domain");
                    term = term * xs[i].powi(k);
                }
                acc = acc + term;
            }
            out[cod.index_of(b).expect("rows are checked against the codomain")] = acc;
        }
        Ok(out)
    }

    fn degree(&self) -> Option<u32> {
        Some(self.f.degree())
    }
}

type EvalFn<S> = dyn Fn(&SparseVec) -> Vec<S> + Send + Sync;

/// A closure presented as a cone function.
#[derive(Clone)]
pub struct BlackBoxFn<S: Scalar> {
    dom: ConeSpace,
    cod: ConeSpace,
    f: Arc<EvalFn<S>>,
    degree: Option<u32>,
}

impl<S: Scalar> BlackBoxFn<S> {
    pub fn new(dom: ConeSpace, cod: ConeSpace, f: impl Fn(&SparseVec) -> Vec<S> + Send + Sync + 'static) -> Self {
        BlackBoxFn { dom, cod, f: Arc::new(f), degree: None }
    }

    /// A function `ℝ≥0 → ℝ≥0` given on scalars.
    pub fn scalar(f: impl Fn(S) -> S + Send + Sync + 'static) -> Self {
        Self::new(ConeSpace::half_line(), ConeSpace::half_line(), move |x| vec![f(S::from_q(&x.get_index(0)))])
    }

    /// The power series `Σ cₖ tᵏ` on the half-line.
    pub fn series(coeffs: Vec<Q>) -> Self {
        let degree = coeffs.len().saturating_sub(1) as u32;
        let cs: Vec<S> = coeffs.iter().map(S::from_q).collect();
        Self::scalar(move |t| cs.iter().rev().fold(S::nil(), |acc, c| acc * t.clone() + c.clone()))
            .with_degree(degree)
    }

    /// Declare a polynomial degree bound.
    pub fn with_degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }
}

impl<S: Scalar> ConeFn<S> for BlackBoxFn<S> {
    fn dom(&self) -> &ConeSpace {
        &self.dom
    }

    fn cod(&self) -> &ConeSpace {
        &self.cod
    }

    fn eval(&self, x: &SparseVec) -> Result<Vec<S>> {
        if **x.web() != **self.dom.web() {
            return Err(Error::WebMismatch(format!("point is not over the web of {}", self.dom)));
        }
        let y = (self.f)(x);
        if y.len() != self.cod.dim() {
            return Err(Error::Structural(format!("black box returned {} coordinates, expected {}", y.len(), self.cod.dim())));
        }
        Ok(y)
    }

    fn degree(&self) -> Option<u32> {
        self.degree
    }
}

pub(crate) fn add<S: Scalar>(a: &mut [S], b: &[S]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.clone() + y.clone();
    }
}

pub(crate) fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub(crate) fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub(crate) fn max_abs<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}
