use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::diagnostics::Thresholds;
use crate::error::{Error, Result};
use crate::radial::{Grading, RadialGrid};
use crate::solver::BoundaryForcing;

/// Initial azimuthal velocity `u₀(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProfile {
    /// `u₀ = r`.
    Rigid,
    /// `u₀ = r - r³`.
    Cubic,
    Zero,
}

impl InitialProfile {
    pub fn eval(self, r: f64) -> f64 {
        match self {
            InitialProfile::Rigid => r,
            InitialProfile::Cubic => r - r * r * r,
            InitialProfile::Zero => 0.0,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            InitialProfile::Rigid => "rigid",
            InitialProfile::Cubic => "cubic",
            InitialProfile::Zero => "zero",
        }
    }
}

impl FromStr for InitialProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rigid" => Ok(InitialProfile::Rigid),
            "cubic" => Ok(InitialProfile::Cubic),
            "zero" => Ok(InitialProfile::Zero),
            other => Err(Error::invalid(format!(
                "unknown u0 profile '{other}' (expected rigid, cubic or zero)"
            ))),
        }
    }
}

/// Wall velocity `α(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    Constant(f64),
    /// `½(1 - cos(2πt/T))`.
    RaisedCosine,
    /// `(t, α)` samples, linearly interpolated.
    Table(Vec<(f64, f64)>),
}

const RAISED_COSINE_SAMPLES: usize = 1024;

impl ForcingSpec {
    pub fn build(&self, t_final: f64) -> Result<BoundaryForcing<f64>> {
        match self {
            ForcingSpec::Constant(a) => BoundaryForcing::constant(*a, t_final),
            ForcingSpec::RaisedCosine => {
                BoundaryForcing::raised_cosine(t_final, RAISED_COSINE_SAMPLES)
            }
            ForcingSpec::Table(rows) => {
                let f = BoundaryForcing::table(
                    rows.iter().map(|r| r.0).collect(),
                    rows.iter().map(|r| r.1).collect(),
                )?;
                if f.end_time() < t_final {
                    return Err(Error::invalid(format!(
                        "alpha table ends at t = {} before T = {t_final}",
                        f.end_time()
                    )));
                }
                Ok(f)
            }
        }
    }

    fn render(&self) -> String {
        match self {
            ForcingSpec::Constant(a) => format!("const:{a}"),
            ForcingSpec::RaisedCosine => "raised_cosine".to_string(),
            ForcingSpec::Table(rows) => {
                let parts: Vec<String> = rows.iter().map(|(t, a)| format!("{t}:{a}")).collect();
                format!("table:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for ForcingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "raised_cosine" {
            return Ok(ForcingSpec::RaisedCosine);
        }
        if let Some(v) = s.strip_prefix("const:") {
            return Ok(ForcingSpec::Constant(parse_f64("alpha", v)?));
        }
        if let Some(body) = s.strip_prefix("table:") {
            let rows = body
                .split(',')
                .map(|pair| {
                    let (t, a) = pair.split_once(':').ok_or_else(|| {
                        Error::invalid(format!("alpha table entry '{pair}' is not t:value"))
                    })?;
                    Ok((parse_f64("alpha time", t)?, parse_f64("alpha value", a)?))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(ForcingSpec::Table(rows));
        }
        Err(Error::invalid(format!(
            "unknown alpha '{s}' (expected const:<v>, raised_cosine or table:t:a,...)"
        )))
    }
}

/// How the time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    Fixed(f64),
    /// `dt = κ · min spacing`.
    Kappa(f64),
}

impl DtRule {
    pub fn resolve(self, grid: &RadialGrid<f64>) -> f64 {
        match self {
            DtRule::Fixed(dt) => dt,
            DtRule::Kappa(k) => k * grid.min_spacing(),
        }
    }
}

/// Everything a sweep depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub u0: InitialProfile,
    pub alpha: ForcingSpec,
    pub t_final: f64,
    /// Strictly decreasing viscosities.
    pub nus: Vec<f64>,
    pub n: usize,
    pub grading: Grading,
    pub dt: DtRule,
    pub output_times: usize,
    /// First output time as a fraction of `T`.
    pub t_min_fraction: f64,
    /// Width factor of the Kato layer `[1 - cν, 1]`.
    pub kato_c: f64,
    pub thresholds: Thresholds,
}

pub const DEFAULT_NUS: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            u0: InitialProfile::Rigid,
            alpha: ForcingSpec::Constant(0.0),
            t_final: 1.0,
            nus: DEFAULT_NUS.to_vec(),
            n: 2048,
            grading: Grading::SineClustered,
            dt: DtRule::Fixed(1e-4),
            output_times: 32,
            t_min_fraction: 1e-3,
            kato_c: 1.0,
            thresholds: Thresholds::default(),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::invalid(format!("{key}: '{v}' is not finite")));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{key}: '{v}' is not a non-negative integer")))
}

impl SweepConfig {
    /// `u₀ = r`, `α ≡ 1`: rigid rotation, an exact steady solution.
    pub fn steady() -> Self {
        SweepConfig {
            alpha: ForcingSpec::Constant(1.0),
            ..Self::default()
        }
    }

    /// `u₀ = r`, `α ≡ 0`: spin-down with a unit-strength boundary sheet.
    pub fn rigid_noslip() -> Self {
        Self::default()
    }

    /// `u₀ = r`, `α(t) = ½(1 - cos(2πt/T))`.
    pub fn oscillating() -> Self {
        SweepConfig {
            alpha: ForcingSpec::RaisedCosine,
            ..Self::default()
        }
    }

    pub fn scenario(name: &str) -> Result<Self> {
        match name {
            "steady" => Ok(Self::steady()),
            "rigid_noslip" => Ok(Self::rigid_noslip()),
            "oscillating" => Ok(Self::oscillating()),
            other => Err(Error::invalid(format!(
                "unknown scenario '{other}' (expected steady, rigid_noslip or oscillating)"
            ))),
        }
    }

    /// Parses flat `key = value` text. Blank lines and `#` comments are
    /// ignored; `scenario` (if present) seeds the defaults that later keys
    /// override.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "line {}: expected key = value, got '{raw}'",
                    lineno + 1
                ))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut cfg = match entries.iter().find(|(k, _)| k == "scenario") {
            Some((_, v)) => Self::scenario(v)?,
            None => Self::default(),
        };
        for (k, v) in &entries {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key; used by the file parser and by CLI overrides.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "scenario" => {}
            "u0" => self.u0 = v.parse()?,
            "alpha" => self.alpha = v.parse()?,
            "T" => self.t_final = parse_f64(key, v)?,
            "nus" => {
                self.nus = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_f64(key, s))
                    .collect::<Result<_>>()?
            }
            "N" => self.n = parse_usize(key, v)?,
            "grading" => self.grading = v.parse()?,
            "dt" => self.dt = DtRule::Fixed(parse_f64(key, v)?),
            "dt_kappa" => self.dt = DtRule::Kappa(parse_f64(key, v)?),
            "output_times" => self.output_times = parse_usize(key, v)?,
            "t_min_fraction" => self.t_min_fraction = parse_f64(key, v)?,
            "kato_c" => self.kato_c = parse_f64(key, v)?,
            "verdict_ratio" => self.thresholds.ratio = parse_f64(key, v)?,
            "verdict_floor" => self.thresholds.floor = parse_f64(key, v)?,
            other => return Err(Error::invalid(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.nus.is_empty() {
            return Err(Error::invalid("nus is empty"));
        }
        if self.nus.len() < 3 {
            return Err(Error::invalid(format!(
                "a sweep needs at least 3 viscosities, got {}",
                self.nus.len()
            )));
        }
        if self.nus.iter().any(|&nu| !(nu > 0.0)) {
            return Err(Error::invalid("nu must be positive"));
        }
        if self.nus.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::invalid("nus must be strictly decreasing"));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::invalid("T must be positive"));
        }
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "N must be at least 2, got {}",
                self.n
            )));
        }
        match self.dt {
            DtRule::Fixed(dt) | DtRule::Kappa(dt) if !(dt > 0.0) => {
                return Err(Error::invalid("dt must be positive"))
            }
            _ => {}
        }
        if self.output_times == 0 {
            return Err(Error::invalid("output_times must be at least 1"));
        }
        if !(self.t_min_fraction > 0.0 && self.t_min_fraction <= 1.0) {
            return Err(Error::invalid("t_min_fraction must lie in (0, 1]"));
        }
        if !(self.kato_c > 0.0) || self.nus.iter().any(|&nu| self.kato_c * nu >= 1.0) {
            return Err(Error::invalid(
                "kato_c must be positive with kato_c * nu < 1",
            ));
        }
        if !(self.thresholds.ratio > 0.0 && self.thresholds.ratio < 1.0) {
            return Err(Error::invalid("verdict_ratio must lie in (0, 1)"));
        }
        if !(self.thresholds.floor >= 0.0) {
            return Err(Error::invalid("verdict_floor must be non-negative"));
        }
        self.alpha.build(self.t_final)?;
        Ok(())
    }

    /// Canonical `key = value` rendering; parsing it gives back `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let nus: Vec<String> = self.nus.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "u0 = {}", self.u0.as_str());
        let _ = writeln!(s, "alpha = {}", self.alpha.render());
        let _ = writeln!(s, "T = {}", self.t_final);
        let _ = writeln!(s, "nus = {}", nus.join(","));
        let _ = writeln!(s, "N = {}", self.n);
        let _ = writeln!(s, "grading = {}", self.grading);
        match self.dt {
            DtRule::Fixed(dt) => {
                let _ = writeln!(s, "dt = {dt}");
            }
            DtRule::Kappa(k) => {
                let _ = writeln!(s, "dt_kappa = {k}");
            }
        }
        let _ = writeln!(s, "output_times = {}", self.output_times);
        let _ = writeln!(s, "t_min_fraction = {}", self.t_min_fraction);
        let _ = writeln!(s, "kato_c = {}", self.kato_c);
        let _ = writeln!(s, "verdict_ratio = {}", self.thresholds.ratio);
        let _ = writeln!(s, "verdict_floor = {}", self.thresholds.floor);
        s
    }

    /// SHA-256 of the canonical text, lowercase hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for cfg in [
            SweepConfig::steady(),
            SweepConfig::rigid_noslip(),
            SweepConfig::oscillating(),
        ] {
            let back = SweepConfig::from_text(&cfg.to_text()).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(back.hash(), cfg.hash());
        }
        let t = SweepConfig {
            alpha: ForcingSpec::Table(vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.25)]),
            dt: DtRule::Kappa(3.0),
            ..SweepConfig::default()
        };
        assert_eq!(SweepConfig::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn scenario_then_overrides() {
        let cfg = SweepConfig::from_text(
            "# comment\nscenario = steady\nN = 64  # coarse\nnus = 0.1, 0.01, 0.001\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha, ForcingSpec::Constant(1.0));
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.nus, vec![0.1, 0.01, 0.001]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(SweepConfig::from_text("nus =\n").is_err());
        assert!(SweepConfig::from_text("nus = 1e-3, 1e-2, 1e-4\n").is_err());
        assert!(SweepConfig::from_text("bogus = 1\n").is_err());
        assert!(SweepConfig::from_text("N = x\n").is_err());
        assert!(SweepConfig::from_text("just a line\n").is_err());
        assert!(SweepConfig::from_text("alpha = table:0:0,0.5:1\n").is_err());
    }

    #[test]
    fn hash_changes_with_config() {
        let a = SweepConfig::default();
        let mut b = a.clone();
        b.n = 1024;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
