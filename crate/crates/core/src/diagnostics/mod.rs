//! Convergence diagnostics of a Navier–Stokes trajectory against the
//! stationary Euler solution: energy distance, weak pairings, the boundary
//! vortex-sheet target, Kato dissipation integrals and dual norms.

mod conditions;
mod dual;
mod kato;
mod pairing;

pub use conditions::{
    classify, evaluate_conditions, ConditionId, DiagnosticRecord, Thresholds, Verdict,
};
pub use dual::{dual_norm, sheet_dual_norm_oracle, DualMode};
pub use kato::{kato_functional, wang_iiprime, KatoLayer};
pub(crate) use pairing::pair_samples;
pub use pairing::{
    energy_distance_sup, energy_distances, sheet_amplitude_estimate, sheet_amplitude_estimate_with,
    sheet_target, velocity_pairing, vorticity_pairing, SheetTarget,
};
