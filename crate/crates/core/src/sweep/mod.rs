//! Viscosity sweeps: run the solver and the diagnostics for each ν, fit
//! rates and decide whether the convergence conditions agree.

mod config;
mod fit;
mod run;

pub use config::{DtRule, ForcingSpec, InitialProfile, SweepConfig, DEFAULT_NUS};
pub use fit::fit_rate;
pub use run::{
    build_reports, condition_report, equivalence_from_reports, equivalence_report, merge,
    run_sweep, ConditionReport, EquivalenceVerdict, NuRun, SweepResult, THREADS_ENV,
};
