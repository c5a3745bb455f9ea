//! Probabilistic coherence spaces over finite webs.

mod check;
mod descriptor;
mod polar;
pub mod simplex;

pub use check::{check_pcs, clique_membership, ClosureVerdict, ElementValue, PcsReport};
pub use descriptor::{PcsDescriptor, Shape, MAX_WEB};
pub use polar::{
    bipolar_vertices, dual_sup, gauge_norm, in_bipolar, in_hull, polar_vertices, PolarPolytope, VertexSet,
    MAX_VERTEX_DIM,
};
