//! Radial grids, sampled fields, quadrature and the disk norms.
//!
//! Under radial symmetry every integral over the unit disk reduces to
//! `2π ∫₀¹ g(r) r dr`; the helpers here are the single place where that
//! reduction is discretized.

mod diff;
mod field;
mod grid;
mod quadrature;

pub use diff::derivative;
pub use field::{FieldKind, H1Class, RadialField, TestFunction};
pub use grid::{make_graded_grid, Grading, RadialGrid};
pub use quadrature::{
    grad_norm_sq_disk, integrate_rdr, integrate_rdr_from, l2_norm_disk, trapezoid_weights,
};
