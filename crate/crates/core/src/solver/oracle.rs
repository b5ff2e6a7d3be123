use crate::error::{Error, Result};
use crate::radial::{FieldKind, RadialField};
use crate::scalar::Real;
use crate::special::{bessel_j01, bessel_j1, bessel_j1_zeros, gauss_legendre_unit};

/// Truncated eigenfunction expansion of the no-slip (`α ≡ 0`) solution.
#[derive(Debug, Clone)]
pub struct SeriesSolution<T> {
    pub field: RadialField<T>,
    /// `|c_M| exp(-ν j_M² t)` for the last retained mode `M`.
    pub truncation_estimate: f64,
}

/// Projection coefficients `c_n = 2 ∫₀¹ u₀ J₁(j_n r) r dr / J₂(j_n)²` of the
/// piecewise-linear interpolant of `u₀`, by Gauss–Legendre quadrature on
/// sub-panels short enough to resolve the fastest retained mode.
pub fn bessel_coefficients<T: Real>(u0: &RadialField<T>, zeros: &[f64]) -> Vec<f64> {
    let r: Vec<f64> = u0.grid().nodes().iter().map(|x| x.to_f64_lossy()).collect();
    let v: Vec<f64> = u0.values().iter().map(|x| x.to_f64_lossy()).collect();
    let j_max = zeros.iter().copied().fold(0.0, f64::max);
    let (gx, gw) = gauss_legendre_unit(6);
    let mut points = Vec::new();
    for k in 0..r.len() - 1 {
        let h = r[k + 1] - r[k];
        let panels = ((h * j_max / 2.0).ceil() as usize).max(1);
        let ph = h / panels as f64;
        for p in 0..panels {
            let a = r[k] + p as f64 * ph;
            for (&s, &w) in gx.iter().zip(&gw) {
                let x = a + s * ph;
                let frac = (x - r[k]) / h;
                let value = v[k] + (v[k + 1] - v[k]) * frac;
                points.push((x, w * ph * value * x));
            }
        }
    }
    zeros
        .iter()
        .map(|&j| {
            let j2 = bessel_j01(j).0; // J₂(j) = -J₀(j) at a zero of J₁
            let integral: f64 = points.iter().map(|&(x, wv)| wv * bessel_j1(j * x)).sum();
            2.0 * integral / (j2 * j2)
        })
        .collect()
}

/// `u(r, t) = Σ c_n J₁(j_n r) exp(-ν j_n² t)` on the grid of `u₀`.
pub fn bessel_series_oracle<T: Real>(
    u0: &RadialField<T>,
    nu: T,
    t: T,
    n_modes: usize,
) -> Result<SeriesSolution<T>> {
    if !(nu > T::zero()) {
        return Err(Error::invalid(format!("nu must be positive, got {nu}")));
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::invalid(format!("t must be non-negative, got {t}")));
    }
    if n_modes == 0 {
        return Err(Error::invalid("at least one Bessel mode is required"));
    }
    if u0.kind() != FieldKind::VelocityTheta {
        return Err(Error::invalid(
            "initial datum must be an azimuthal velocity",
        ));
    }
    let zeros = bessel_j1_zeros(n_modes);
    let coeffs = bessel_coefficients(u0, &zeros);
    let (nu, t) = (nu.to_f64_lossy(), t.to_f64_lossy());
    let amp: Vec<f64> = zeros
        .iter()
        .zip(&coeffs)
        .map(|(&j, &c)| c * (-nu * j * j * t).exp())
        .collect();
    let values = u0
        .grid()
        .nodes()
        .iter()
        .map(|&r| {
            let r = r.to_f64_lossy();
            let s: f64 = zeros
                .iter()
                .zip(&amp)
                .map(|(&j, &a)| a * bessel_j1(j * r))
                .sum();
            T::lit(s)
        })
        .collect::<Vec<T>>();
    let mut values = values;
    values[0] = T::zero();
    let field = RadialField::new(u0.grid().clone(), values, FieldKind::VelocityTheta)?;
    Ok(SeriesSolution {
        field,
        truncation_estimate: amp[n_modes - 1].abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{l2_norm_disk, make_graded_grid, Grading};

    #[test]
    fn rigid_rotation_coefficients_match_closed_form() {
        // for u₀ = r: ∫₀¹ r² J₁(jr) dr = J₂(j)/j, so c_n = 2 / (j_n J₂(j_n))
        let g = make_graded_grid::<f64>(2048, Grading::SineClustered).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        let zeros = bessel_j1_zeros(20);
        let c = bessel_coefficients(&u0, &zeros);
        for (&j, &cn) in zeros.iter().zip(&c) {
            let exact = -2.0 / (j * bessel_j01(j).0);
            assert!((cn - exact).abs() < 1e-9, "{cn} vs {exact}");
        }
    }

    #[test]
    fn smooth_datum_is_reconstructed_at_time_zero() {
        let g = make_graded_grid::<f64>(2048, Grading::SineClustered).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r - r * r * r).unwrap();
        let s = bessel_series_oracle(&u0, 1e-3, 0.0, 200).unwrap();
        let diff = s.field.minus(&u0, FieldKind::Scalar).unwrap();
        assert!(l2_norm_disk(&diff).unwrap() < 1e-4);
    }

    #[test]
    fn decays_for_large_times() {
        let g = make_graded_grid::<f64>(256, Grading::SineClustered).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        let j1 = 3.8317059702075123_f64;
        let t = 40.0 / (1e-2 * j1 * j1);
        let s = bessel_series_oracle(&u0, 1e-2, t, 50).unwrap();
        assert!(s.field.values().iter().all(|v| v.abs() <= 1e-15));
    }

    #[test]
    fn rejects_nonpositive_viscosity() {
        let g = make_graded_grid::<f64>(16, Grading::Uniform).unwrap();
        let u0 = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        assert!(bessel_series_oracle(&u0, 0.0, 0.1, 10).is_err());
        assert!(bessel_series_oracle(&u0, 1e-3, 0.1, 0).is_err());
    }
}
