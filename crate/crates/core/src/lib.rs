//! Probabilistic coherence spaces, the power-series (Kleisli) semantics of
//! PCF with fair binary choice, and a toolkit for stable functions on the
//! cones those spaces induce: higher-order differences, partition-based
//! derivatives, Taylor expansion and coefficient extraction.
//!
//! Scalars in [`algebra`], [`pcs`], [`kleisli`] and [`pcf`] are exact
//! rationals. [`cones`] is generic over [`cones::Scalar`] so that the same
//! machinery runs exactly on series-backed functions and in double-double
//! precision on arbitrary black boxes.

pub mod algebra;
pub mod cones;
mod error;
pub mod exec;
pub mod kleisli;
pub mod pcf;
pub mod pcs;
pub mod rng;

pub use error::{Error, Result};
