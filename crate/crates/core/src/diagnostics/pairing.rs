use crate::error::{Error, Result};
use crate::radial::{integrate_rdr, l2_norm_disk, FieldKind, H1Class, RadialField, TestFunction};
use crate::scalar::Real;
use crate::solver::{vorticity_radial, BoundaryForcing, EulerReference, Trajectory};

/// `(g, f)_{L²(D)} = 2π ∫ g f r dr` for samples on a common grid.
pub(crate) fn pair_samples<T: Real>(g: &RadialField<T>, f: &[T]) -> Result<T> {
    let prod: Vec<T> = g.values().iter().zip(f).map(|(&a, &b)| a * b).collect();
    Ok(T::two() * T::PI() * integrate_rdr(&prod, g.grid())?)
}

fn check_grid<T: Real>(traj: &Trajectory<T>, other: &RadialField<T>) -> Result<()> {
    if traj.is_empty() {
        return Err(Error::invalid("trajectory has no output times"));
    }
    if !traj.grid().same_as(other.grid()) {
        return Err(Error::invalid(
            "trajectory and reference live on different grids",
        ));
    }
    Ok(())
}

/// `‖u(t_k) - ū‖_{L²(D)}` at every output time.
pub fn energy_distances<T: Real>(
    traj: &Trajectory<T>,
    euler: &EulerReference<T>,
) -> Result<Vec<T>> {
    check_grid(traj, &euler.u_bar)?;
    traj.fields
        .iter()
        .map(|u| l2_norm_disk(&u.minus(&euler.u_bar, FieldKind::Scalar)?))
        .collect()
}

/// `max_k ‖u(t_k) - ū‖_{L²(D)}`.
pub fn energy_distance_sup<T: Real>(traj: &Trajectory<T>, euler: &EulerReference<T>) -> Result<T> {
    Ok(energy_distances(traj, euler)?
        .into_iter()
        .fold(T::zero(), T::max))
}

/// `(u(t_k), w)_{L²(D)}` per output time.
pub fn velocity_pairing<T: Real>(traj: &Trajectory<T>, w: &RadialField<T>) -> Result<Vec<T>> {
    check_grid(traj, w)?;
    if w.kind() != FieldKind::VelocityTheta {
        return Err(Error::invalid(
            "velocity pairing needs an azimuthal test velocity",
        ));
    }
    traj.fields
        .iter()
        .map(|u| pair_samples(u, w.values()))
        .collect()
}

/// `(ω(t_k), f)_{L²(D)}` per output time.
pub fn vorticity_pairing<T: Real>(traj: &Trajectory<T>, f: &TestFunction<T>) -> Result<Vec<T>> {
    if traj.is_empty() {
        return Err(Error::invalid("trajectory has no output times"));
    }
    let fs = f.sample(traj.grid());
    traj.fields
        .iter()
        .map(|u| pair_samples(&vorticity_radial(u)?, &fs))
        .collect()
}

/// Limit vorticity `ω̄ - a(t) μ` predicted for the vanishing-viscosity
/// limit: the Euler vorticity plus a sheet of strength `a(t) = ū(1) - α(t)`
/// on the unit circle.
#[derive(Debug, Clone)]
pub struct SheetTarget<T> {
    pub euler: EulerReference<T>,
    pub forcing: BoundaryForcing<T>,
}

impl<T: Real> SheetTarget<T> {
    pub fn new(euler: EulerReference<T>, forcing: BoundaryForcing<T>) -> Self {
        SheetTarget { euler, forcing }
    }

    /// `a(t) = ū_θ(1) - α(t)`.
    pub fn amplitude(&self, t: T) -> T {
        self.euler.wall_velocity() - self.forcing.eval(t)
    }
}

/// `(ω̄, f) - 2π a(t) f(1)`; reduces to `(ω̄, f)` for `f ∈ H¹₀`.
pub fn sheet_target<T: Real>(sheet: &SheetTarget<T>, f: &TestFunction<T>, t: T) -> Result<T> {
    let omega_bar = &sheet.euler.omega_bar;
    let base = pair_samples(omega_bar, &f.sample(omega_bar.grid()))?;
    Ok(match f.class() {
        H1Class::H1_0 => base,
        H1Class::H1 => base - T::two() * T::PI() * sheet.amplitude(t) * f.trace(),
    })
}

/// Measured sheet strength `[(ω̄, f) - (ω(t), f)] / (2π f(1))` with the probe
/// `f(r) = r²`, at an output time `t`.
pub fn sheet_amplitude_estimate<T: Real>(
    traj: &Trajectory<T>,
    euler: &EulerReference<T>,
    t: T,
) -> Result<T> {
    sheet_amplitude_estimate_with(traj, euler, t, &TestFunction::r_squared())
}

pub fn sheet_amplitude_estimate_with<T: Real>(
    traj: &Trajectory<T>,
    euler: &EulerReference<T>,
    t: T,
    probe: &TestFunction<T>,
) -> Result<T> {
    check_grid(traj, &euler.u_bar)?;
    let trace = probe.trace();
    if trace == T::zero() {
        return Err(Error::invalid(format!(
            "probe '{}' has zero trace and cannot see a boundary sheet",
            probe.name()
        )));
    }
    let k = traj
        .times
        .iter()
        .position(|&s| s == t)
        .ok_or_else(|| Error::invalid(format!("t = {t} is not an output time")))?;
    let fs = probe.sample(traj.grid());
    let omega = vorticity_radial(&traj.fields[k])?;
    let measured = pair_samples(&omega, &fs)?;
    let reference = pair_samples(&euler.omega_bar, &fs)?;
    Ok((reference - measured) / (T::two() * T::PI() * trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, Grading};
    use crate::solver::{euler_reference, solve_ns_radial};
    use std::f64::consts::PI;

    fn steady() -> (Trajectory<f64>, EulerReference<f64>) {
        let g = make_graded_grid::<f64>(2048, Grading::SineClustered).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        let forcing = BoundaryForcing::constant(1.0, 1.0).unwrap();
        let traj = solve_ns_radial(&u0, 1e-3, &forcing, 1.0, 1e-2, &[0.25, 0.5, 1.0]).unwrap();
        (traj, euler_reference(&u0).unwrap())
    }

    #[test]
    fn steady_examples() {
        let (traj, euler) = steady();
        assert!(energy_distance_sup(&traj, &euler).unwrap() <= 1e-8);
        let p = velocity_pairing(&traj, &euler.u_bar).unwrap();
        assert!(p.iter().all(|v| (v - PI / 2.0).abs() < 1e-6));
        let zero = RadialField::zeros(traj.grid().clone(), FieldKind::VelocityTheta);
        assert!(velocity_pairing(&traj, &zero)
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
        let est = sheet_amplitude_estimate(&traj, &euler, 1.0).unwrap();
        assert!(est.abs() < 1e-6);
        let one = vorticity_pairing(&traj, &TestFunction::one()).unwrap();
        assert!(one.iter().all(|v| (v - 2.0 * PI).abs() < 1e-8));
    }

    #[test]
    fn sheet_target_examples() {
        let g = make_graded_grid::<f64>(2000, Grading::Uniform).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        let sheet = SheetTarget::new(
            euler_reference(&u0).unwrap(),
            BoundaryForcing::constant(0.0, 1.0).unwrap(),
        );
        let one = sheet_target(&sheet, &TestFunction::one(), 0.5).unwrap();
        assert!(one.abs() < 1e-12);
        let r2 = sheet_target(&sheet, &TestFunction::r_squared(), 0.5).unwrap();
        assert!((r2 + PI).abs() < 1e-5);
        // compatible forcing: zero amplitude
        let compat = SheetTarget::new(
            sheet.euler.clone(),
            BoundaryForcing::constant(1.0, 1.0).unwrap(),
        );
        for f in TestFunction::default_probes() {
            let plain = pair_samples(&compat.euler.omega_bar, &f.sample(u0.grid())).unwrap();
            assert_eq!(sheet_target(&compat, &f, 0.3).unwrap(), plain);
        }
    }

    #[test]
    fn estimate_requires_output_time_and_trace() {
        let (traj, euler) = steady();
        assert!(sheet_amplitude_estimate(&traj, &euler, 0.3).is_err());
        let p = TestFunction::one_minus_r_squared();
        assert!(sheet_amplitude_estimate_with(&traj, &euler, 1.0, &p).is_err());
    }
}
