use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::format::{json_num, json_str, num, write_lines};
use crate::diagnostics::{ConditionId, Verdict};
use crate::error::{Error, Result};
use crate::solver::Trajectory;
use crate::sweep::{equivalence_report, EquivalenceVerdict, SweepResult};

pub const CONDITIONS_FILE: &str = "conditions.csv";
pub const SHEET_FILE: &str = "sheet.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.cfg";

pub const CONDITIONS_HEADER: &str = "nu,condition_id,sup_value,fitted_rate,verdict";
pub const SHEET_HEADER: &str = "nu,t,amplitude_estimate,target_amplitude";
pub const FIELDS_HEADER: &str = "r,u_theta,omega";
pub const TRAJECTORY_HEADER: &str = "t,r,u_theta,omega";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `fields_<ν>.csv`, with ν in shortest scientific form (`fields_1e-3.csv`).
pub fn fields_file_name(nu: f64) -> String {
    format!("fields_{nu:e}.csv")
}

pub fn dat_file_name(id: ConditionId) -> String {
    format!("{}.dat", id.as_str())
}

/// What [`emit_outputs`] wrote. Every listed file exists once it returns.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub dir: PathBuf,
    pub config_text: String,
    pub config_hash: String,
    pub tool_version: String,
    /// File names relative to `dir`, in writing order.
    pub files: Vec<String>,
    /// `(ν, fields file)` for each successful viscosity.
    pub fields: Vec<(f64, String)>,
    /// `(stage, seconds)`; not reproducible, kept out of every file except
    /// the manifest itself.
    pub stage_seconds: Vec<(String, f64)>,
}

/// Writes the sweep outputs into `dir` (created if missing):
/// `config.cfg`, `conditions.csv`, `sheet.csv`, `summary.json`, one
/// `fields_<ν>.csv` per successful ν, one `<condition>.dat` per condition
/// and `manifest.json`. All files except the manifest are byte-for-byte
/// reproducible.
pub fn emit_outputs(result: &SweepResult, dir: &Path) -> Result<RunManifest> {
    if result.runs.is_empty() {
        return Err(Error::invalid("cannot emit an empty sweep result"));
    }
    let start = Instant::now();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let mut put = |name: String, lines: Vec<String>| -> Result<String> {
        write_lines(&dir.join(&name), lines)?;
        files.push(name.clone());
        Ok(name)
    };

    let config_text = result.config.to_text();
    put(
        CONFIG_FILE.into(),
        config_text.lines().map(str::to_string).collect(),
    )?;

    let mut rows = vec![CONDITIONS_HEADER.to_string()];
    for report in &result.reports {
        let rate = report.fitted_rate.map(num).unwrap_or_default();
        let verdict = report.verdict.map(Verdict::as_str).unwrap_or_default();
        for &(nu, v) in &report.values {
            rows.push(format!(
                "{},{},{},{},{}",
                num(nu),
                report.condition,
                num(v),
                rate,
                verdict
            ));
        }
    }
    put(CONDITIONS_FILE.into(), rows)?;

    let mut rows = vec![SHEET_HEADER.to_string()];
    for rec in result.records() {
        for &(t, est, target) in &rec.sheet {
            rows.push(format!(
                "{},{},{},{}",
                num(rec.nu),
                num(t),
                num(est),
                num(target)
            ));
        }
    }
    put(SHEET_FILE.into(), rows)?;

    let verdict = if result.is_complete() {
        Some(equivalence_report(result)?)
    } else {
        None
    };
    put(SUMMARY_FILE.into(), summary_json(result, verdict.as_ref()))?;

    let mut fields = Vec::new();
    for rec in result.records() {
        let mut rows = vec![FIELDS_HEADER.to_string()];
        let u = rec.final_velocity.values();
        let w = rec.final_vorticity.values();
        for (i, &r) in rec.final_velocity.grid().nodes().iter().enumerate() {
            rows.push(format!("{},{},{}", num(r), num(u[i]), num(w[i])));
        }
        let name = put(fields_file_name(rec.nu), rows)?;
        fields.push((rec.nu, name));
    }

    for report in &result.reports {
        let mut rows = vec![format!("# log10(nu) log10({})", report.condition)];
        rows.extend(
            report
                .values
                .iter()
                .filter(|p| p.1 > 0.0 && p.1.is_finite())
                .map(|&(nu, v)| format!("{} {}", num(nu.log10()), num(v.log10()))),
        );
        put(dat_file_name(report.condition), rows)?;
    }

    let mut stage_seconds: Vec<(String, f64)> = result
        .runs
        .iter()
        .zip(&result.timings)
        .map(|(run, &s)| (format!("solve_nu_{:e}", run.nu), s))
        .collect();
    stage_seconds.push(("emit".into(), start.elapsed().as_secs_f64()));
    files.push(MANIFEST_FILE.into());
    let manifest = RunManifest {
        dir: dir.to_path_buf(),
        config_text,
        config_hash: result.config_hash.clone(),
        tool_version: TOOL_VERSION.into(),
        files,
        fields,
        stage_seconds,
    };
    write_lines(&dir.join(MANIFEST_FILE), manifest_json(&manifest))?;
    Ok(manifest)
}

fn summary_json(result: &SweepResult, verdict: Option<&EquivalenceVerdict>) -> Vec<String> {
    let mut out = vec!["{".to_string()];
    let mut field = |k: &str, v: String| out.push(format!("  {}: {v},", json_str(k)));
    field("tool_version", json_str(TOOL_VERSION));
    field("config_hash", json_str(&result.config_hash));
    field("complete", result.is_complete().to_string());
    let th = &result.config.thresholds;
    field(
        "thresholds",
        format!(
            "{{\"ratio\": {}, \"floor\": {}}}",
            json_num(th.ratio),
            json_num(th.floor)
        ),
    );
    match verdict {
        Some(v) => {
            field("consistent", v.consistent.to_string());
            field("verdict", json_str(v.verdict.as_str()));
            let ids: Vec<String> = v.disagreeing.iter().map(|c| json_str(c.as_str())).collect();
            field("disagreeing", format!("[{}]", ids.join(", ")));
            field("sheet_amplitude_limit", json_num(v.sheet_amplitude_limit));
            field("sheet_amplitude_target", json_num(v.sheet_amplitude_target));
            field("sheet_persistence", json_str(v.sheet_persistence.as_str()));
        }
        None => {
            for k in ["consistent", "verdict", "disagreeing", "sheet_persistence"] {
                field(k, "null".into());
            }
            field(
                "sheet_amplitude_limit",
                json_num(result.sheet_amplitude_limit().unwrap_or(f64::NAN)),
            );
            field(
                "sheet_amplitude_target",
                json_num(result.sheet_amplitude_target().unwrap_or(f64::NAN)),
            );
        }
    }
    let conditions: Vec<String> = result
        .reports
        .iter()
        .map(|r| {
            format!(
                "    {{\"id\": {}, \"verdict\": {}, \"fitted_rate\": {}}}",
                json_str(r.condition.as_str()),
                r.verdict.map_or("null".into(), |v| json_str(v.as_str())),
                r.fitted_rate.map_or("null".into(), json_num)
            )
        })
        .collect();
    field("conditions", format!("[\n{}\n  ]", conditions.join(",\n")));
    let failures: Vec<String> = result
        .runs
        .iter()
        .filter_map(|r| {
            let e = r.outcome.as_ref().err()?;
            Some(format!(
                "{{\"nu\": {}, \"error\": {}}}",
                json_num(r.nu),
                json_str(e)
            ))
        })
        .collect();
    field("failures", format!("[{}]", failures.join(", ")));
    out.push(format!(
        "  \"text\": {}",
        json_str(verdict.map_or("", |v| v.text.as_str()))
    ));
    out.push("}".into());
    out
}

fn manifest_json(m: &RunManifest) -> Vec<String> {
    let files: Vec<String> = m.files.iter().map(|f| json_str(f)).collect();
    let fields: Vec<String> = m
        .fields
        .iter()
        .map(|(nu, f)| format!("{{\"nu\": {}, \"path\": {}}}", json_num(*nu), json_str(f)))
        .collect();
    let stages: Vec<String> = m
        .stage_seconds
        .iter()
        .map(|(k, s)| format!("{}: {}", json_str(k), json_num(*s)))
        .collect();
    vec![
        "{".into(),
        format!("  \"tool_version\": {},", json_str(&m.tool_version)),
        format!("  \"config_hash\": {},", json_str(&m.config_hash)),
        format!("  \"config\": {},", json_str(&m.config_text)),
        format!("  \"files\": [{}],", files.join(", ")),
        format!("  \"fields\": [{}],", fields.join(", ")),
        format!("  \"wall_clock_seconds\": {{{}}}", stages.join(", ")),
        "}".into(),
    ]
}

/// Long-format CSV of a trajectory: one row per output time and node.
pub fn write_trajectory_csv(traj: &Trajectory<f64>, path: &Path) -> Result<()> {
    let mut rows = vec![TRAJECTORY_HEADER.to_string()];
    for (t, field) in traj.iter() {
        let omega = crate::solver::vorticity_radial(field)?;
        for (i, &r) in field.grid().nodes().iter().enumerate() {
            rows.push(format!(
                "{},{},{},{}",
                num(t),
                num(r),
                num(field.values()[i]),
                num(omega.values()[i])
            ));
        }
    }
    write_lines(path, rows)
}
