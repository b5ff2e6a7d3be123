use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use super::{fit_rate, SweepConfig};
use crate::diagnostics::{
    classify, evaluate_conditions, ConditionId, DiagnosticRecord, Thresholds, Verdict,
};
use crate::error::{Error, Result};
use crate::radial::{make_graded_grid, FieldKind, RadialField, RadialGrid, TestFunction};
use crate::solver::{euler_reference, log_spaced_times, solve_ns_radial};

/// Environment variable capping the number of concurrent per-ν tasks.
pub const THREADS_ENV: &str = "VSL_THREADS";

/// Outcome of one viscosity.
#[derive(Debug, Clone, PartialEq)]
pub struct NuRun {
    pub nu: f64,
    /// The diagnostics, or the error message if the solve failed.
    pub outcome: std::result::Result<DiagnosticRecord, String>,
}

/// One condition across the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: ConditionId,
    /// `(ν, value)` ordered from the largest ν down.
    pub values: Vec<(f64, f64)>,
    /// `None` when some viscosity failed.
    pub verdict: Option<Verdict>,
    /// Log-log slope over all but the largest ν, when all those values are positive.
    pub fitted_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub config_hash: String,
    /// Ordered by decreasing ν.
    pub runs: Vec<NuRun>,
    pub reports: Vec<ConditionReport>,
    /// Wall-clock seconds per ν, in the order of `runs`. Not part of the
    /// reproducible output.
    pub timings: Vec<f64>,
}

impl SweepResult {
    pub fn report(&self, id: ConditionId) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.condition == id)
    }

    pub fn is_complete(&self) -> bool {
        !self.runs.is_empty() && self.runs.iter().all(|r| r.outcome.is_ok())
    }

    /// Successful runs in decreasing-ν order.
    pub fn records(&self) -> impl Iterator<Item = &DiagnosticRecord> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    /// Sheet amplitude estimate at `t = T` for the smallest viscosity.
    pub fn sheet_amplitude_limit(&self) -> Option<f64> {
        self.runs
            .last()
            .and_then(|r| r.outcome.as_ref().ok())
            .and_then(|rec| rec.sheet.last().map(|s| s.1))
    }

    /// Predicted amplitude `ū(1) - α(T)`.
    pub fn sheet_amplitude_target(&self) -> Option<f64> {
        self.records()
            .next()
            .and_then(|rec| rec.sheet.last().map(|s| s.2))
    }
}

/// Builds the per-condition reports from per-ν runs sorted by decreasing ν.
pub fn build_reports(runs: &[NuRun], config: &SweepConfig) -> Vec<ConditionReport> {
    let complete = runs.iter().all(|r| r.outcome.is_ok());
    ConditionId::ALL
        .iter()
        .map(|&id| {
            let values: Vec<(f64, f64)> = runs
                .iter()
                .filter_map(|r| {
                    let rec = r.outcome.as_ref().ok()?;
                    Some((r.nu, rec.value(id)?))
                })
                .collect();
            condition_report(id, values, complete, &config.thresholds)
        })
        .collect()
}

/// Verdict and fitted rate of one condition from its `(ν, value)` series in
/// decreasing-ν order. `complete` is false when some viscosity failed.
pub fn condition_report(
    condition: ConditionId,
    values: Vec<(f64, f64)>,
    complete: bool,
    thresholds: &Thresholds,
) -> ConditionReport {
    let verdict = complete.then(|| {
        let v: Vec<f64> = values.iter().map(|p| p.1).collect();
        classify(&v, thresholds)
    });
    let fitted_rate = if values.len() >= 3 {
        fit_rate(&values, 1..values.len()).ok()
    } else {
        None
    };
    ConditionReport {
        condition,
        values,
        verdict,
        fitted_rate,
    }
}

fn run_one(
    config: &SweepConfig,
    grid: &Arc<RadialGrid<f64>>,
    probes: &[TestFunction<f64>],
    nu: f64,
) -> Result<DiagnosticRecord> {
    let u0 = RadialField::from_fn(grid.clone(), FieldKind::VelocityTheta, |r| {
        config.u0.eval(r)
    })?;
    let forcing = config.alpha.build(config.t_final)?;
    let times = log_spaced_times(config.t_final, config.output_times, config.t_min_fraction)?;
    let dt = config.dt.resolve(grid);
    let traj = solve_ns_radial(&u0, nu, &forcing, config.t_final, dt, &times)?;
    let euler = euler_reference(&u0)?;
    evaluate_conditions(&traj, &euler, probes, config.kato_c)
}

fn worker_count(tasks: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(available);
    cap.min(tasks).max(1)
}

/// Solves and diagnoses every viscosity of the sweep. Per-ν tasks run
/// concurrently (at most `VSL_THREADS` at a time) and are merged in
/// decreasing-ν order, so the result does not depend on scheduling. A failed
/// solve is recorded on its ν and does not abort the sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = make_graded_grid::<f64>(config.n, config.grading)?;
    let probes = TestFunction::default_probes();
    let order = config.nus.clone();
    let slots: Mutex<Vec<Option<(NuRun, f64)>>> = Mutex::new(vec![None; order.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(order.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= order.len() {
                    break;
                }
                let nu = order[i];
                let start = Instant::now();
                let outcome = run_one(config, &grid, &probes, nu).map_err(|e| {
                    log::error!("nu = {nu:e}: {e}");
                    e.to_string()
                });
                let elapsed = start.elapsed().as_secs_f64();
                log::info!("nu = {nu:e} finished in {elapsed:.2} s");
                slots
                    .lock()
                    .expect("no task panicked while holding the lock")[i] =
                    Some((NuRun { nu, outcome }, elapsed));
            });
        }
    });
    let mut done: Vec<(NuRun, f64)> = slots
        .into_inner()
        .expect("no task panicked while holding the lock")
        .into_iter()
        .map(|s| s.expect("every task ran"))
        .collect();
    done.sort_by(|a, b| b.0.nu.total_cmp(&a.0.nu));
    Ok(merge(config, done))
}

/// Assembles a result from per-ν runs computed in any order.
pub fn merge(config: &SweepConfig, mut done: Vec<(NuRun, f64)>) -> SweepResult {
    done.sort_by(|a, b| b.0.nu.total_cmp(&a.0.nu));
    let (runs, timings): (Vec<NuRun>, Vec<f64>) = done.into_iter().unzip();
    SweepResult {
        config: config.clone(),
        config_hash: config.hash(),
        reports: build_reports(&runs, config),
        runs,
        timings,
    }
}

/// Structured outcome of the equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    /// All conditions of [`ConditionId::EQUIVALENT`] share one verdict.
    pub consistent: bool,
    /// The shared verdict, or the majority verdict when inconsistent.
    pub verdict: Verdict,
    /// Conditions whose verdict differs from the majority.
    pub disagreeing: Vec<ConditionId>,
    pub sheet_amplitude_limit: f64,
    pub sheet_amplitude_target: f64,
    /// Verdict of the `(H¹)'` distance, which tracks the boundary sheet.
    pub sheet_persistence: Verdict,
    pub text: String,
}

/// Checks that all equivalent conditions agree and describes the sheet.
pub fn equivalence_report(result: &SweepResult) -> Result<EquivalenceVerdict> {
    if !result.is_complete() {
        let failed: Vec<String> = result
            .runs
            .iter()
            .filter(|r| r.outcome.is_err())
            .map(|r| format!("{:e}", r.nu))
            .collect();
        return Err(Error::invalid(if result.runs.is_empty() {
            "sweep result is empty".to_string()
        } else {
            format!(
                "sweep result is incomplete: failed at nu = {}",
                failed.join(", ")
            )
        }));
    }
    equivalence_from_reports(
        &result.reports,
        result.sheet_amplitude_limit().unwrap_or(f64::NAN),
        result.sheet_amplitude_target().unwrap_or(f64::NAN),
    )
}

/// The equivalence check on per-condition reports alone; `limit` and
/// `target` are the sheet amplitude at the smallest ν and its prediction.
pub fn equivalence_from_reports(
    reports: &[ConditionReport],
    limit: f64,
    target: f64,
) -> Result<EquivalenceVerdict> {
    let verdict_of = |id: ConditionId| {
        reports
            .iter()
            .find(|r| r.condition == id)
            .and_then(|r| r.verdict)
            .ok_or_else(|| Error::invalid(format!("condition {id} has no verdict")))
    };
    let verdicts: Vec<(ConditionId, Verdict)> = ConditionId::EQUIVALENT
        .iter()
        .map(|&id| Ok((id, verdict_of(id)?)))
        .collect::<Result<_>>()?;
    let count = |v: Verdict| verdicts.iter().filter(|p| p.1 == v).count();
    let majority = [Verdict::Converges, Verdict::Stalls, Verdict::Diverges]
        .into_iter()
        .max_by_key(|&v| (count(v), std::cmp::Reverse(v as u8)))
        .expect("three candidates");
    let disagreeing: Vec<ConditionId> = verdicts
        .iter()
        .filter(|p| p.1 != majority)
        .map(|p| p.0)
        .collect();
    let consistent = disagreeing.is_empty();
    let persistence = verdict_of(ConditionId::H1dual)?;

    let mut text = String::new();
    if consistent {
        text.push_str(&format!("equivalent: all {majority}"));
    } else {
        let ids: Vec<&str> = disagreeing.iter().map(|c| c.as_str()).collect();
        text.push_str(&format!(
            "DISAGREEMENT (falsification candidate): {} differ from the majority verdict '{majority}'",
            ids.join(", ")
        ));
    }
    text.push_str(&format!(
        ", sheet amplitude {limit:.2} (predicted B/(2π) - α(T) = {target:.2})\n"
    ));
    for r in reports {
        let verdict = r.verdict.map_or("undefined", Verdict::as_str);
        let last = r.values.last().map_or(f64::NAN, |p| p.1);
        let rate = r
            .fitted_rate
            .map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
        text.push_str(&format!(
            "  {:<13} {:<10} smallest-nu value {:>11.4e}  rate {}\n",
            r.condition.as_str(),
            verdict,
            last,
            rate
        ));
    }
    Ok(EquivalenceVerdict {
        consistent,
        verdict: majority,
        disagreeing,
        sheet_amplitude_limit: limit,
        sheet_amplitude_target: target,
        sheet_persistence: persistence,
        text,
    })
}
