//! Morphisms of the Kleisli category as degree-truncated power series.

mod check;
mod morphism;
mod ops;

pub use check::{is_morphism, is_morphism_with, MorphismVerdict};
pub use morphism::{Morphism, Truncated};
pub use ops::{
    apply_curried, apply_curried_with, compose, compose_with, curry, eval, identity, pair, proj, uncurry,
};
