//! Exact sparse linear algebra over finite webs.
//!
//! Everything here is an exact nonnegative rational. Vectors, matrices and
//! polynomials never store explicit zeros.

mod label;
mod matrix;
mod multiset;
mod poly;
mod rational;
mod vector;

pub use label::{Label, Web};
pub use matrix::{mat_apply, Matrix};
pub use multiset::{alpha, enum_multisets, multiset_count, Multiset};
pub use poly::{monomial, promote, Polynomial};
pub use rational::{factorial, format_q, parse_nonneg_q, parse_q, Q};
pub(crate) use vector::same_web;
pub use vector::{leq, scal, SparseVec};
