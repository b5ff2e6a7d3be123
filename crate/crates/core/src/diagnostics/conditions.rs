use std::fmt;
use std::str::FromStr;

use super::{
    dual_norm, energy_distances, kato_functional, pair_samples, sheet_amplitude_estimate,
    sheet_dual_norm_oracle, sheet_target, wang_iiprime, DualMode, KatoLayer, SheetTarget,
};
use crate::error::{Error, Result};
use crate::radial::{FieldKind, RadialField, TestFunction};
use crate::solver::{vorticity_radial, EulerReference, Trajectory};

/// The convergence conditions tracked across a viscosity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    /// Weak convergence of velocity: `sup_t |(u - ū, w)|` with `w = ū`.
    A,
    /// Energy-norm convergence: `sup_t ‖u - ū‖`.
    B,
    /// Vorticity against `H¹` probes with nonzero trace, minus the sheet target.
    E2b,
    /// Vorticity against `H¹₀` probes.
    F2,
    KatoI,
    KatoII,
    WangIIprime,
    Hminus1,
    /// `(H¹)'` distance; stays at the sheet's norm instead of vanishing.
    H1dual,
}

impl ConditionId {
    pub const ALL: [ConditionId; 9] = [
        ConditionId::A,
        ConditionId::B,
        ConditionId::E2b,
        ConditionId::F2,
        ConditionId::KatoI,
        ConditionId::KatoII,
        ConditionId::WangIIprime,
        ConditionId::Hminus1,
        ConditionId::H1dual,
    ];

    /// Conditions that must share one verdict.
    pub const EQUIVALENT: [ConditionId; 8] = [
        ConditionId::A,
        ConditionId::B,
        ConditionId::E2b,
        ConditionId::F2,
        ConditionId::KatoI,
        ConditionId::KatoII,
        ConditionId::WangIIprime,
        ConditionId::Hminus1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::A => "A",
            ConditionId::B => "B",
            ConditionId::E2b => "E2b",
            ConditionId::F2 => "F2",
            ConditionId::KatoI => "Kato_i",
            ConditionId::KatoII => "Kato_ii",
            ConditionId::WangIIprime => "Wang_iiprime",
            ConditionId::Hminus1 => "Hminus1",
            ConditionId::H1dual => "H1dual",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConditionId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown condition id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Converges,
    Stalls,
    Diverges,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Stalls => "stalls",
            Verdict::Diverges => "diverges",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "converges" => Ok(Verdict::Converges),
            "stalls" => Ok(Verdict::Stalls),
            "diverges" => Ok(Verdict::Diverges),
            other => Err(Error::invalid(format!("unknown verdict '{other}'"))),
        }
    }
}

/// Parameters of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Converges when the last value is below `ratio` times the first.
    pub ratio: f64,
    /// Values at or below this are treated as zero.
    pub floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            ratio: 0.5,
            floor: 1e-6,
        }
    }
}

/// Verdict for a sequence of values ordered from the largest to the
/// smallest viscosity.
///
/// * converges: non-increasing (up to `floor`) and either the last value is
///   below `ratio ×` the first, or every value is below `floor`;
/// * diverges: a non-finite value, or the last value exceeds the first by
///   the factor `1 / ratio`;
/// * stalls otherwise.
pub fn classify(values: &[f64], th: &Thresholds) -> Verdict {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Verdict::Diverges;
    }
    if values.iter().all(|&v| v.abs() <= th.floor) {
        return Verdict::Converges;
    }
    let first = values[0];
    let last = values[values.len() - 1];
    let monotone = values.windows(2).all(|w| w[1] <= w[0] + th.floor);
    if monotone && last < th.ratio * first {
        Verdict::Converges
    } else if last * th.ratio > first {
        Verdict::Diverges
    } else {
        Verdict::Stalls
    }
}

/// Everything measured on one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub nu: f64,
    /// Supremum over output times of each condition's diagnostic.
    pub values: Vec<(ConditionId, f64)>,
    /// `(t, estimated amplitude, predicted amplitude)` per output time.
    pub sheet: Vec<(f64, f64, f64)>,
    /// `(H¹)'` norm of the predicted sheet at the final time.
    pub sheet_norm_oracle: f64,
    /// `max_t |(ω, 1) - 2π α(t)|`.
    pub circulation_error: f64,
    /// `max |(ω, f) - target| - ‖u - ū‖ ‖∇f‖` over probes and times; the
    /// pairing–energy bound holds when this is `<= 0`.
    pub pairing_slack: f64,
    /// `max_t (‖ω - ω̄‖_{H⁻¹} - ‖u - ū‖)`.
    pub dual_slack: f64,
    /// Final-time velocity and vorticity.
    pub final_velocity: RadialField<f64>,
    pub final_vorticity: RadialField<f64>,
}

impl DiagnosticRecord {
    pub fn value(&self, id: ConditionId) -> Option<f64> {
        self.values.iter().find(|(c, _)| *c == id).map(|&(_, v)| v)
    }
}

/// Evaluates all conditions on a trajectory.
///
/// `probes` split into `H¹` (nonzero trace, condition `E2b`) and `H¹₀`
/// (condition `F2`) by their class.
pub fn evaluate_conditions(
    traj: &Trajectory<f64>,
    euler: &EulerReference<f64>,
    probes: &[TestFunction<f64>],
    kato_c: f64,
) -> Result<DiagnosticRecord> {
    let sheet = SheetTarget::new(euler.clone(), traj.forcing.clone());
    let grid = traj.grid().clone();
    let distances = energy_distances(traj, euler)?;
    let base_pairing = pair_samples(&euler.u_bar, euler.u_bar.values())?;
    let r2 = TestFunction::r_squared();

    let mut a = 0.0f64;
    let mut e2b = 0.0f64;
    let mut f2 = 0.0f64;
    let mut hm1 = 0.0f64;
    let mut circ = 0.0f64;
    let mut pairing_slack = f64::NEG_INFINITY;
    let mut dual_slack = f64::NEG_INFINITY;
    let mut sheet_rows = Vec::with_capacity(traj.len());
    let samples: Vec<(Vec<f64>, f64)> = probes
        .iter()
        .map(|f| (f.sample(&grid), f.grad_norm(&grid)))
        .collect();
    let one = TestFunction::one().sample(&grid);

    for (k, (t, u)) in traj.iter().enumerate() {
        let omega = vorticity_radial(u)?;
        a = a.max((pair_samples(u, euler.u_bar.values())? - base_pairing).abs());
        circ = circ.max(
            (pair_samples(&omega, &one)? - 2.0 * std::f64::consts::PI * traj.forcing.eval(t)).abs(),
        );
        for (f, (fs, grad)) in probes.iter().zip(&samples) {
            let err = (pair_samples(&omega, fs)? - sheet_target(&sheet, f, t)?).abs();
            pairing_slack = pairing_slack.max(err - distances[k] * grad);
            if f.trace() != 0.0 {
                e2b = e2b.max(err);
            } else {
                f2 = f2.max(err);
            }
        }
        let diff = omega.minus(&euler.omega_bar, FieldKind::Scalar)?;
        let d = dual_norm(&diff, DualMode::Hminus1)?;
        hm1 = hm1.max(d);
        dual_slack = dual_slack.max(d - distances[k]);
        let est = super::sheet_amplitude_estimate_with(traj, euler, t, &r2)?;
        sheet_rows.push((t, est, sheet.amplitude(t)));
    }

    let (t_final, u_final) = traj.last();
    let final_vorticity = vorticity_radial(u_final)?;
    let h1 = dual_norm(
        &final_vorticity.minus(&euler.omega_bar, FieldKind::Scalar)?,
        DualMode::H1dual,
    )?;
    debug_assert_eq!(
        sheet_rows.last().map(|r| r.1),
        Some(sheet_amplitude_estimate(traj, euler, t_final)?)
    );
    let b = distances.iter().copied().fold(0.0, f64::max);
    let values = vec![
        (ConditionId::A, a),
        (ConditionId::B, b),
        (ConditionId::E2b, e2b),
        (ConditionId::F2, f2),
        (
            ConditionId::KatoI,
            kato_functional(traj, KatoLayer::FullDomain)?,
        ),
        (
            ConditionId::KatoII,
            kato_functional(traj, KatoLayer::Layer(kato_c))?,
        ),
        (ConditionId::WangIIprime, wang_iiprime(traj)),
        (ConditionId::Hminus1, hm1),
        (ConditionId::H1dual, h1),
    ];
    Ok(DiagnosticRecord {
        nu: traj.nu,
        values,
        sheet: sheet_rows,
        sheet_norm_oracle: sheet_dual_norm_oracle(sheet.amplitude(t_final)),
        circulation_error: circ,
        pairing_slack,
        dual_slack,
        final_velocity: u_final.clone(),
        final_vorticity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for c in ConditionId::ALL {
            assert_eq!(c.as_str().parse::<ConditionId>().unwrap(), c);
        }
        assert!("C".parse::<ConditionId>().is_err());
        for v in [Verdict::Converges, Verdict::Stalls, Verdict::Diverges] {
            assert_eq!(v.as_str().parse::<Verdict>().unwrap(), v);
        }
    }

    #[test]
    fn classification() {
        let th = Thresholds::default();
        assert_eq!(classify(&[1.0, 0.6, 0.3], &th), Verdict::Converges);
        assert_eq!(classify(&[1e-9, 1e-12, 5e-7], &th), Verdict::Converges);
        assert_eq!(classify(&[1.0, 1.0, 1.0], &th), Verdict::Stalls);
        assert_eq!(classify(&[1.0, 0.2, 0.4], &th), Verdict::Stalls);
        assert_eq!(classify(&[1.0, 2.0, 3.0], &th), Verdict::Diverges);
        assert_eq!(classify(&[1.0, f64::NAN], &th), Verdict::Diverges);
        let strict = Thresholds {
            ratio: 0.25,
            floor: 1e-6,
        };
        assert_eq!(classify(&[1.0, 0.6, 0.3], &strict), Verdict::Stalls);
    }
}
