use crate::error::{Error, Result};
use crate::radial::RadialField;
use crate::scalar::Real;
use crate::solver::operator::laplace_stiffness;
use crate::special::{bessel_i0, bessel_i1};

/// Which negative Sobolev norm to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualMode {
    /// Dual of `H¹₀(D)`: Dirichlet Poisson problem.
    Hminus1,
    /// Dual of `H¹(D)`: `-Δφ + φ = g` with a natural Neumann condition.
    H1dual,
}

/// Dual norm of the radial distribution `f ↦ (g, f)` against radial test
/// functions, via the Riesz representer `φ` computed with linear elements:
/// `‖g‖ = ‖∇φ‖` for `Hminus1` and `‖g‖ = ‖φ‖_{H¹}` for `H1dual`.
///
/// Pairing a radial distribution with any `f` equals pairing it with the
/// angular average of `f`, so radial test functions suffice.
pub fn dual_norm<T: Real>(g: &RadialField<T>, mode: DualMode) -> Result<T> {
    let grid = g.grid();
    let n = grid.intervals();
    let w = grid.weights();
    let k = laplace_stiffness(grid.nodes());
    let b: Vec<T> = g.values().iter().zip(w).map(|(&v, &wi)| v * wi).collect();
    let phi = match mode {
        DualMode::Hminus1 => {
            let mut sys = k.clone();
            sys.diag.truncate(n);
            sys.upper.truncate(n - 1);
            sys.lower.truncate(n - 1);
            let mut phi = sys.solve(&b[..n])?;
            phi.push(T::zero());
            phi
        }
        DualMode::H1dual => {
            let mut sys = k.clone();
            for (d, &wi) in sys.diag.iter_mut().zip(w) {
                *d = *d + wi;
            }
            sys.solve(&b)?
        }
    };
    let kphi = k.mul_vec(&phi);
    let mut energy = phi
        .iter()
        .zip(&kphi)
        .fold(T::zero(), |acc, (&p, &q)| acc + p * q);
    if mode == DualMode::H1dual {
        energy = phi
            .iter()
            .zip(w)
            .fold(energy, |acc, (&p, &wi)| acc + wi * p * p);
    }
    if !(energy >= T::zero()) {
        return Err(Error::numerical(format!(
            "dual norm energy {energy} is not a nonnegative number"
        )));
    }
    Ok((T::two() * T::PI() * energy).sqrt())
}

/// `(H¹(D))'` norm of the measure `a μ` on the unit circle, in closed form:
/// the representer `φ = a I₀(r)/I₁(1)` gives `|a| sqrt(2π I₀(1)/I₁(1))`.
pub fn sheet_dual_norm_oracle(amplitude: f64) -> f64 {
    amplitude.abs() * (2.0 * std::f64::consts::PI * bessel_i0(1.0) / bessel_i1(1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, FieldKind, Grading};

    #[test]
    fn zero_data() {
        let g = make_graded_grid::<f64>(64, Grading::SineClustered).unwrap();
        let z = RadialField::zeros(g, FieldKind::Scalar);
        assert_eq!(dual_norm(&z, DualMode::Hminus1).unwrap(), 0.0);
        assert_eq!(dual_norm(&z, DualMode::H1dual).unwrap(), 0.0);
    }

    #[test]
    fn unit_source_poisson() {
        let g = make_graded_grid::<f64>(1000, Grading::SineClustered).unwrap();
        let one = RadialField::from_fn(g, FieldKind::Scalar, |_| 1.0).unwrap();
        let v = dual_norm(&one, DualMode::Hminus1).unwrap();
        assert!((v - (std::f64::consts::PI / 8.0).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn h1_dual_of_unit_source() {
        // -Δφ + φ = 1 with Neumann data: φ ≡ 1, ‖φ‖_{H¹}² = π
        let g = make_graded_grid::<f64>(200, Grading::Uniform).unwrap();
        let one = RadialField::from_fn(g, FieldKind::Scalar, |_| 1.0).unwrap();
        let v = dual_norm(&one, DualMode::H1dual).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn sheet_oracle_value() {
        assert!((sheet_dual_norm_oracle(1.0) - 3.7517399018397413).abs() < 1e-14);
        assert!((sheet_dual_norm_oracle(-0.5) - 0.5 * 3.7517399018397413).abs() < 1e-14);
    }

    #[test]
    fn discrete_boundary_measure_approaches_oracle() {
        // a point mass of total weight 2π a at the wall node mimics a μ
        let g = make_graded_grid::<f64>(2000, Grading::SineClustered).unwrap();
        let n = g.intervals();
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0 / g.weights()[n];
        let sheet = RadialField::new(g, v, FieldKind::Scalar).unwrap();
        let measured = dual_norm(&sheet, DualMode::H1dual).unwrap();
        assert!((measured - sheet_dual_norm_oracle(1.0)).abs() < 1e-3);
    }
}
