use crate::error::{Error, Result};
use crate::radial::{FieldKind, RadialField};
use crate::scalar::Real;

fn require_velocity<T: Real>(u: &RadialField<T>) -> Result<()> {
    if u.kind() != FieldKind::VelocityTheta {
        return Err(Error::invalid(format!(
            "expected an azimuthal velocity field, got {:?}",
            u.kind()
        )));
    }
    Ok(())
}

/// Scalar vorticity `ω = (1/r)(r u)'` of an azimuthal velocity.
///
/// Computed in flux form against the `r dr` weights `w_i`: with
/// `A_k = ∫_{r_k}^{r_{k+1}} u r dr / h_k` the nodal values satisfy
/// `w_i ω_i = A_i - A_{i-1}` inside and `w_N ω_N = u_N - A_{N-1}` at the wall,
/// so that `Σ w_i ω_i f_i = f(1) u(1) - ∫ f' u r dr` holds exactly for every
/// piecewise-linear `f`. Second order inside, first order at `r = 1`;
/// `ω(0) = 2 u'(0)`.
pub fn vorticity_radial<T: Real>(u: &RadialField<T>) -> Result<RadialField<T>> {
    require_velocity(u)?;
    let grid = u.grid();
    let r = grid.nodes();
    let w = grid.weights();
    let v = u.values();
    let n = grid.intervals();
    let six = T::lit(6.0);
    let two = T::two();
    let flux: Vec<T> = (0..n)
        .map(|k| (v[k] * (two * r[k] + r[k + 1]) + v[k + 1] * (r[k] + two * r[k + 1])) / six)
        .collect();
    let mut omega = Vec::with_capacity(n + 1);
    omega.push(flux[0] / w[0]);
    for i in 1..n {
        omega.push((flux[i] - flux[i - 1]) / w[i]);
    }
    omega.push((v[n] - flux[n - 1]) / w[n]);
    RadialField::new(grid.clone(), omega, FieldKind::Vorticity)
}

/// The stationary Euler solution `ū ≡ u₀` with its vorticity and total
/// circulation `B = ∫_D ω̄`.
#[derive(Debug, Clone)]
pub struct EulerReference<T> {
    pub u_bar: RadialField<T>,
    pub omega_bar: RadialField<T>,
    pub circulation: T,
}

impl<T: Real> EulerReference<T> {
    /// `ū_θ(1) = B / 2π`.
    pub fn wall_velocity(&self) -> T {
        self.u_bar.wall_value()
    }
}

/// Radial Euler flow is stationary, so the reference is the initial datum.
pub fn euler_reference<T: Real>(u0: &RadialField<T>) -> Result<EulerReference<T>> {
    require_velocity(u0)?;
    let omega_bar = vorticity_radial(u0)?;
    let circulation =
        T::two() * T::PI() * crate::radial::integrate_rdr(omega_bar.values(), u0.grid())?;
    Ok(EulerReference {
        u_bar: u0.clone(),
        omega_bar,
        circulation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{integrate_rdr, make_graded_grid, Grading};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn rigid_rotation_has_constant_vorticity() {
        for grading in [Grading::Uniform, Grading::SineClustered] {
            let g = make_graded_grid::<f64>(50, grading).unwrap();
            let u = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
            let w = vorticity_radial(&u).unwrap();
            assert!(w.values().iter().all(|&x| (x - 2.0).abs() < 1e-8));
        }
    }

    #[test]
    fn zero_velocity_zero_vorticity() {
        let g = make_graded_grid::<f64>(10, Grading::SineClustered).unwrap();
        let u = RadialField::zeros(g, FieldKind::VelocityTheta);
        assert!(vorticity_radial(&u)
            .unwrap()
            .values()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn cubic_profile_second_order_inside() {
        let err = |n: usize| {
            let g = make_graded_grid::<f64>(n, Grading::SineClustered).unwrap();
            let u = RadialField::from_fn(g.clone(), FieldKind::VelocityTheta, |r| r - r * r * r)
                .unwrap();
            let w = vorticity_radial(&u).unwrap();
            g.nodes()
                .iter()
                .zip(w.values())
                .filter(|(&r, _)| r <= 0.9)
                .map(|(&r, &x)| (x - (2.0 - 4.0 * r * r)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(200), err(400));
        assert!(e2 < 1e-3);
        assert!((e1 / e2).log2() > 1.8);
    }

    #[test]
    fn euler_reference_examples() {
        let g = make_graded_grid::<f64>(400, Grading::SineClustered).unwrap();
        let rigid = RadialField::from_fn(g.clone(), FieldKind::VelocityTheta, |r| r).unwrap();
        let e = euler_reference(&rigid).unwrap();
        assert!((e.circulation - 2.0 * PI).abs() < 1e-12);
        let cubic =
            RadialField::from_fn(g.clone(), FieldKind::VelocityTheta, |r| r - r * r * r).unwrap();
        let e = euler_reference(&cubic).unwrap();
        assert!(e.circulation.abs() < 1e-12);
        let zero = euler_reference(&RadialField::zeros(g, FieldKind::VelocityTheta)).unwrap();
        assert_eq!(zero.circulation, 0.0);
    }

    #[test]
    fn rejects_non_velocity() {
        let g = make_graded_grid::<f64>(10, Grading::Uniform).unwrap();
        let s = RadialField::zeros(g, FieldKind::Scalar);
        assert!(vorticity_radial(&s).is_err());
        assert!(euler_reference(&s).is_err());
    }

    proptest! {
        #[test]
        fn discrete_green_identity(
            tail in prop::collection::vec(-2.0f64..2.0, 30),
            f in prop::collection::vec(-2.0f64..2.0, 31),
        ) {
            let g = make_graded_grid::<f64>(30, Grading::SineClustered).unwrap();
            let mut v = vec![0.0];
            v.extend(tail);
            let u = RadialField::new(g.clone(), v.clone(), FieldKind::VelocityTheta).unwrap();
            let w = vorticity_radial(&u).unwrap();
            let lhs = integrate_rdr(
                &w.values().iter().zip(&f).map(|(a, b)| a * b).collect::<Vec<_>>(), &g).unwrap();
            // exact ∫ f' u r dr for piecewise-linear f and u
            let r = g.nodes();
            let mut flux = 0.0;
            for k in 0..30 {
                let (a, b) = (r[k], r[k + 1]);
                flux += (f[k + 1] - f[k]) * (v[k] * (2.0 * a + b) + v[k + 1] * (a + 2.0 * b)) / 6.0;
            }
            let rhs = f[30] * v[30] - flux;
            prop_assert!((lhs - rhs).abs() < 1e-11);
        }
    }
}
