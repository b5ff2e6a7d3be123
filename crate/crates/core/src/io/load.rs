use std::path::Path;

use super::emit::{
    CONDITIONS_FILE, CONDITIONS_HEADER, CONFIG_FILE, SHEET_FILE, SHEET_HEADER, SUMMARY_FILE,
};
use super::format::{parse_num, read_csv, read_text};
use crate::diagnostics::{ConditionId, Verdict};
use crate::error::{Error, Result};
use crate::sweep::{
    condition_report, equivalence_from_reports, ConditionReport, EquivalenceVerdict, SweepConfig,
};

/// Reads a `key = value` sweep configuration file.
pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = read_text(path)?;
    SweepConfig::from_text(&text).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::InvalidArgument(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Verdict recomputed from an output directory, next to the stored one.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredReport {
    pub config: SweepConfig,
    pub reports: Vec<ConditionReport>,
    pub recomputed: EquivalenceVerdict,
    /// Fields of `summary.json` that disagree with the recomputation.
    pub mismatches: Vec<String>,
}

impl StoredReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn parse_verdict(s: &str) -> Result<Option<Verdict>> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

/// `(condition, (ν, value) series, stored verdict)`.
type Series = (ConditionId, Vec<(f64, f64)>, Option<Verdict>);

/// Re-derives every per-condition verdict and the equivalence verdict from
/// `config.cfg`, `conditions.csv` and `sheet.csv`, then compares with
/// `summary.json`.
pub fn report_from_dir(dir: &Path) -> Result<StoredReport> {
    let config = load_config(&dir.join(CONFIG_FILE))?;
    let rows = read_csv(&dir.join(CONDITIONS_FILE), CONDITIONS_HEADER)?;
    let mut series: Vec<Series> = ConditionId::ALL
        .iter()
        .map(|&id| (id, Vec::new(), None))
        .collect();
    for row in &rows {
        let id: ConditionId = row[1].parse()?;
        let slot = series
            .iter_mut()
            .find(|s| s.0 == id)
            .expect("every id has a slot");
        slot.1.push((parse_num(&row[0])?, parse_num(&row[2])?));
        slot.2 = parse_verdict(&row[4])?;
    }
    let complete = series.iter().all(|s| {
        s.1.len() == config.nus.len()
            && s.1
                .iter()
                .zip(&config.nus)
                .all(|(p, nu)| p.0.to_bits() == nu.to_bits())
    });
    if !complete {
        let have: Vec<f64> = series[0].1.iter().map(|p| p.0).collect();
        let missing: Vec<String> = config
            .nus
            .iter()
            .filter(|nu| !have.contains(nu))
            .map(|nu| format!("{nu:e}"))
            .collect();
        return Err(Error::invalid(format!(
            "stored sweep is incomplete: no results for nu = {}",
            missing.join(", ")
        )));
    }
    let reports: Vec<ConditionReport> = series
        .iter()
        .map(|(id, values, _)| condition_report(*id, values.clone(), true, &config.thresholds))
        .collect();
    let mut mismatches = Vec::new();
    for ((id, _, stored), r) in series.iter().zip(&reports) {
        if *stored != r.verdict {
            mismatches.push(format!("{CONDITIONS_FILE}: verdict of {id}"));
        }
    }

    let sheet = read_csv(&dir.join(SHEET_FILE), SHEET_HEADER)?;
    let mut sheet_rows = Vec::with_capacity(sheet.len());
    for row in &sheet {
        sheet_rows.push((
            parse_num(&row[0])?,
            parse_num(&row[2])?,
            parse_num(&row[3])?,
        ));
    }
    let smallest = config.nus.iter().copied().fold(f64::INFINITY, f64::min);
    let largest = config.nus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let final_row = |nu: f64| {
        sheet_rows
            .iter()
            .rev()
            .find(|r| r.0.to_bits() == nu.to_bits())
    };
    let limit = final_row(smallest).map_or(f64::NAN, |r| r.1);
    let target = final_row(largest).map_or(f64::NAN, |r| r.2);
    let recomputed = equivalence_from_reports(&reports, limit, target)?;

    let summary: serde_json::Value = serde_json::from_str(&read_text(&dir.join(SUMMARY_FILE))?)
        .map_err(|e| Error::invalid(format!("{SUMMARY_FILE}: {e}")))?;
    let mut check = |key: &str, ok: bool| {
        if !ok {
            mismatches.push(format!("{SUMMARY_FILE}: {key}"));
        }
    };
    let num_eq = |v: &serde_json::Value, x: f64| match v.as_f64() {
        Some(y) => y.to_bits() == x.to_bits(),
        None => v.is_null() && !x.is_finite(),
    };
    check("config_hash", summary["config_hash"] == config.hash());
    check("consistent", summary["consistent"] == recomputed.consistent);
    check("verdict", summary["verdict"] == recomputed.verdict.as_str());
    check(
        "sheet_persistence",
        summary["sheet_persistence"] == recomputed.sheet_persistence.as_str(),
    );
    let disagreeing: Vec<&str> = recomputed.disagreeing.iter().map(|c| c.as_str()).collect();
    check(
        "disagreeing",
        summary["disagreeing"] == serde_json::json!(disagreeing),
    );
    check(
        "sheet_amplitude_limit",
        num_eq(
            &summary["sheet_amplitude_limit"],
            recomputed.sheet_amplitude_limit,
        ),
    );
    check(
        "sheet_amplitude_target",
        num_eq(
            &summary["sheet_amplitude_target"],
            recomputed.sheet_amplitude_target,
        ),
    );
    check("text", summary["text"] == recomputed.text.as_str());
    Ok(StoredReport {
        config,
        reports,
        recomputed,
        mismatches,
    })
}
