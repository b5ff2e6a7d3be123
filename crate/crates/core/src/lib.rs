//! Numerical checks of the vanishing-viscosity limit for radially symmetric
//! flow in the unit disk, and of the vector identities behind it.
//!
//! The numerical kernels are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix them to `f64`, which is what the sweep
//! harness, the file formats and the CLI use.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod radial;
pub mod scalar;
pub mod solver;
pub mod special;
pub mod sweep;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = radial::RadialGrid<f64>;
pub type Field = radial::RadialField<f64>;
pub type Probe = radial::TestFunction<f64>;
pub type Trajectory = solver::Trajectory<f64>;
pub type Forcing = solver::BoundaryForcing<f64>;
pub type Sample = tensor::FieldSample<f64>;
pub type Vorticity = tensor::VorticityMatrix<f64>;
pub type BoxGrid = tensor::BoxGrid<f64>;
pub type PolarGrid = tensor::PolarGrid<f64>;
