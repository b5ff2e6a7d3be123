//! Discrete checks of vector-calculus identities on sampled fields: a box
//! `[0, 1]^d` with finite differences and Boole quadrature, and the unit disk
//! on a polar grid with spectral angular derivatives.

mod domain;
mod identities;
mod polar;
mod random;
mod suite;

pub use domain::{BoxGrid, Domain, FieldSample, Mode, PolarGrid};
pub use identities::{
    ibp_residual, identity_residual, identity_residual_with, vorticity_matrix, AntisymmetricField,
    IdentityKind, VorticityMatrix, DEEP_INTERIOR, DEFAULT_DIVERGENCE_TOLERANCE,
};
pub use polar::{
    disk, helmholtz_project, stream_function_and_m, stream_function_and_m_with, Helmholtz,
    StreamFunction, DEFAULT_TRACE_TOLERANCE,
};
pub use random::{RandomFields, RandomScalar, MAX_WAVENUMBER};
pub use suite::{
    observed_order, refinement_ladder, refinement_study, run_identity_suite, IdentityCheck,
    RefinementStudy, EXACT_TOLERANCE, EXAMPLE_TOLERANCE, MIN_ORDER, REFINEMENT_SAMPLES,
};
