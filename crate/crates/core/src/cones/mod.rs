//! Stable functions between cones: norms, local cones, differences,
//! derivatives, Taylor expansions and coefficient extraction.

mod derivative;
mod diff;
mod extract;
mod function;
mod partition;
mod scalar;
mod space;
mod taylor;
#[cfg(test)]
pub(crate) mod testutil;

pub use derivative::{derivative, derivative_at, derivative_at_zero, DerivMode, DerivativeTrace, DEFAULT_SCHEDULE};
pub use diff::{diff, is_prestable, Difference, OrderReport, PrestabilityReport, Witness};
pub use extract::{extract_coefficients, Extraction};
pub use function::{BlackBoxFn, ConeFn, MorphismFn};
pub use partition::{common_refinement, phi, Partition, Refinement};
pub use scalar::{DoubleDouble, Scalar};
pub use space::{cone_norm, join, local_norm, meet, ConeKind, ConeSpace};
pub use taylor::{bernstein_check, remainder, taylor_partial, taylor_partial_at, BernsteinReport};
