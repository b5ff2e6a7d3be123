use crate::error::{Error, Result};
use crate::radial::grad_norm_sq_disk;
use crate::scalar::Real;
use crate::solver::Trajectory;

/// Region of the Kato dissipation integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KatoLayer<T> {
    FullDomain,
    /// Annulus `1 - cν < r < 1`.
    Layer(T),
}

/// `ν ∫₀ᵀ ‖∇u‖²_{L²(region)} dt` by the trapezoidal rule over the output
/// times; the interval `[0, t₁]` is covered by the value at `t₁`.
pub fn kato_functional<T: Real>(traj: &Trajectory<T>, layer: KatoLayer<T>) -> Result<T> {
    if traj.is_empty() {
        return Err(Error::invalid("trajectory has no output times"));
    }
    let a = match layer {
        KatoLayer::FullDomain => T::zero(),
        KatoLayer::Layer(c) => {
            let width = c * traj.nu;
            if !(c > T::zero()) || !(width < T::one()) {
                return Err(Error::invalid(format!(
                    "Kato layer needs c > 0 and c*nu < 1, got c = {c}, nu = {}",
                    traj.nu
                )));
            }
            T::one() - width
        }
    };
    let g: Vec<T> = traj
        .fields
        .iter()
        .map(|u| grad_norm_sq_disk(u, a))
        .collect::<Result<_>>()?;
    let t = &traj.times;
    let half = T::lit(0.5);
    let mut integral = t[0] * g[0];
    for k in 1..t.len() {
        integral = integral + half * (t[k] - t[k - 1]) * (g[k] + g[k - 1]);
    }
    Ok(traj.nu * integral)
}

/// Tangential-gradient dissipation `ν ∫ ‖∇_τ u_τ‖²`. Every `θ`-derivative of
/// a radially symmetric field vanishes, so this is identically zero.
pub fn wang_iiprime<T: Real>(_traj: &Trajectory<T>) -> T {
    T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, FieldKind, Grading, RadialField};
    use crate::solver::{solve_ns_radial, BoundaryForcing};

    fn run(alpha: f64, profile: fn(f64) -> f64) -> Trajectory<f64> {
        let g = make_graded_grid::<f64>(256, Grading::SineClustered).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, profile).unwrap();
        let f = BoundaryForcing::constant(alpha, 1.0).unwrap();
        solve_ns_radial(&u0, 1e-2, &f, 1.0, 1e-2, &[0.1, 0.4, 1.0]).unwrap()
    }

    #[test]
    fn steady_full_domain() {
        let traj = run(1.0, |r| r);
        let k = kato_functional(&traj, KatoLayer::FullDomain).unwrap();
        assert!((k - 1e-2 * 2.0 * std::f64::consts::PI).abs() < 1e-4);
        assert_eq!(wang_iiprime(&traj), 0.0);
    }

    #[test]
    fn zero_flow() {
        let traj = run(0.0, |_| 0.0);
        assert_eq!(kato_functional(&traj, KatoLayer::FullDomain).unwrap(), 0.0);
        assert_eq!(kato_functional(&traj, KatoLayer::Layer(1.0)).unwrap(), 0.0);
        assert_eq!(wang_iiprime(&traj), 0.0);
    }

    #[test]
    fn layer_bounded_by_full_domain_and_validated() {
        let traj = run(0.0, |r| r);
        let full = kato_functional(&traj, KatoLayer::FullDomain).unwrap();
        let layer = kato_functional(&traj, KatoLayer::Layer(5.0)).unwrap();
        assert!(layer <= full);
        assert!(kato_functional(&traj, KatoLayer::Layer(100.0)).is_err());
        assert!(kato_functional(&traj, KatoLayer::Layer(-1.0)).is_err());
    }
}
