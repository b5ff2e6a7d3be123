//! Radial Navier–Stokes solver on the unit disk with prescribed tangential
//! wall velocity, the stationary Euler reference, and a Bessel-series exact
//! solution for the no-slip case.

mod euler;
mod forcing;
pub(crate) mod operator;
mod oracle;
mod stepping;

pub use euler::{euler_reference, vorticity_radial, EulerReference};
pub use forcing::BoundaryForcing;
pub use oracle::{bessel_coefficients, bessel_series_oracle, SeriesSolution};
pub use stepping::{
    log_spaced_times, solve_ns_radial, solve_ns_radial_with, SolverOptions, Trajectory,
    BOUNDARY_LAYER_NODES,
};
