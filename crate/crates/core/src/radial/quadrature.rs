use super::{derivative, FieldKind, RadialField, RadialGrid};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Weights of the trapezoidal rule for the measure `r dr`: the piecewise-linear
/// interpolant of the samples is integrated exactly against `r`.
///
/// `w_i = ∫ φ_i(r) r dr` with `φ_i` the hat function of node `i`; these are
/// also the lumped mass of the radial finite-element operators, which is what
/// makes the discrete Green identity for the vorticity exact.
pub fn trapezoid_weights<T: Real>(nodes: &[T]) -> Vec<T> {
    let six = T::lit(6.0);
    let two = T::two();
    let mut w = vec![T::zero(); nodes.len()];
    for k in 0..nodes.len().saturating_sub(1) {
        let (a, b) = (nodes[k], nodes[k + 1]);
        let h = b - a;
        w[k] = w[k] + h * (two * a + b) / six;
        w[k + 1] = w[k + 1] + h * (a + two * b) / six;
    }
    w
}

fn check_len<T>(samples: &[T], grid: &RadialGrid<T>) -> Result<()>
where
    T: Real,
{
    if samples.len() != grid.len() {
        return Err(Error::invalid(format!(
            "field has {} samples but the grid has {} nodes",
            samples.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// `∫₀¹ f(r) r dr` by the trapezoidal rule on the grid nodes.
pub fn integrate_rdr<T: Real>(samples: &[T], grid: &RadialGrid<T>) -> Result<T> {
    check_len(samples, grid)?;
    Ok(samples
        .iter()
        .zip(grid.weights())
        .fold(T::zero(), |acc, (&f, &w)| acc + f * w))
}

/// `∫_a¹ f(r) r dr` with the same rule; the element containing `a` is cut at `a`.
pub fn integrate_rdr_from<T: Real>(samples: &[T], grid: &RadialGrid<T>, a: T) -> Result<T> {
    check_len(samples, grid)?;
    if !(a >= T::zero() && a < T::one()) {
        return Err(Error::invalid(format!(
            "integration region [a, 1] needs 0 <= a < 1, got a = {a}"
        )));
    }
    let r = grid.nodes();
    let six = T::lit(6.0);
    let two = T::two();
    let piece = |lo: T, hi: T, flo: T, fhi: T| {
        (hi - lo) * (flo * (two * lo + hi) + fhi * (lo + two * hi)) / six
    };
    let mut total = T::zero();
    for k in (0..grid.intervals()).rev() {
        let (lo, hi) = (r[k], r[k + 1]);
        if hi <= a {
            break;
        }
        if lo >= a {
            total = total + piece(lo, hi, samples[k], samples[k + 1]);
        } else {
            let s = (a - lo) / (hi - lo);
            let fa = samples[k] + (samples[k + 1] - samples[k]) * s;
            total = total + piece(a, hi, fa, samples[k + 1]);
        }
    }
    Ok(total)
}

/// `‖f‖_{L²(D)}` for a radial scalar or azimuthal vector field.
pub fn l2_norm_disk<T: Real>(f: &RadialField<T>) -> Result<T> {
    if let Some(bad) = f.values().iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "non-finite sample {bad} in L2 norm"
        )));
    }
    let sq: Vec<T> = f.values().iter().map(|&v| v * v).collect();
    Ok((T::two() * T::PI() * integrate_rdr(&sq, f.grid())?).sqrt())
}

/// Squared gradient norm of `u_θ(r) e_θ` over the annulus `{a < |x| < 1}`:
/// `2π ∫_a¹ [(u')² + (u/r)²] r dr`. At `r = 0` the ratio `u/r` is replaced by
/// its limit `u'(0)`.
pub fn grad_norm_sq_disk<T: Real>(u: &RadialField<T>, a: T) -> Result<T> {
    if u.kind() != FieldKind::VelocityTheta {
        return Err(Error::invalid(
            "grad_norm_sq_disk expects an azimuthal velocity",
        ));
    }
    if !(a >= T::zero() && a < T::one()) {
        return Err(Error::invalid(format!(
            "annulus inner radius must satisfy 0 <= a < 1, got {a}"
        )));
    }
    let grid = u.grid();
    let du = derivative(grid.nodes(), u.values())?;
    let integrand: Vec<T> = grid
        .nodes()
        .iter()
        .zip(u.values())
        .zip(&du)
        .map(|((&r, &v), &d)| {
            let ratio = if r > T::zero() { v / r } else { d };
            d * d + ratio * ratio
        })
        .collect();
    Ok(T::two() * T::PI() * integrate_rdr_from(&integrand, grid, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, Grading};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn field(grid: &Arc<RadialGrid<f64>>, f: impl Fn(f64) -> f64) -> RadialField<f64> {
        RadialField::from_fn(grid.clone(), FieldKind::Scalar, f).unwrap()
    }

    /// Independent reference: composite Simpson on a fine uniform partition,
    /// refined until two successive levels agree.
    fn simpson_rdr(f: impl Fn(f64) -> f64) -> f64 {
        let level = |m: usize| {
            let h = 1.0 / m as f64;
            let g = |r: f64| f(r) * r;
            let mut s = g(0.0) + g(1.0);
            for i in 1..m {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
            }
            s * h / 3.0
        };
        let mut m = 64;
        let mut prev = level(m);
        loop {
            m *= 2;
            let cur = level(m);
            if (cur - prev).abs() < 1e-14 || m > 1 << 20 {
                return cur;
            }
            prev = cur;
        }
    }

    #[test]
    fn constant_integrates_to_half() {
        for grading in [Grading::Uniform, Grading::SineClustered] {
            let g = make_graded_grid::<f64>(37, grading).unwrap();
            let v = integrate_rdr(&vec![1.0; 38], &g).unwrap();
            assert!((v - 0.5).abs() < 1e-15);
            assert_eq!(integrate_rdr(&vec![0.0; 38], &g).unwrap(), 0.0);
        }
    }

    #[test]
    fn linear_profile_against_reference() {
        let oracle = simpson_rdr(|r| r);
        assert!((oracle - 1.0 / 3.0).abs() < 1e-12);
        let g = make_graded_grid::<f64>(1000, Grading::Uniform).unwrap();
        let v = integrate_rdr(field(&g, |r| r).values(), &g).unwrap();
        assert!((v - oracle).abs() < 1e-6);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let g = make_graded_grid::<f64>(4, Grading::Uniform).unwrap();
        assert!(matches!(
            integrate_rdr(&[1.0, 2.0], &g),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn l2_norms() {
        let g = make_graded_grid::<f64>(1000, Grading::Uniform).unwrap();
        let one = l2_norm_disk(&field(&g, |_| 1.0)).unwrap();
        assert!((one - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // ‖r‖² = 2π ∫ r³ dr = π/2
        let lin = l2_norm_disk(&field(&g, |r| r)).unwrap();
        assert!((lin - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-6);
        assert_eq!(l2_norm_disk(&field(&g, |_| 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_is_second_order() {
        for grading in [Grading::Uniform, Grading::SineClustered] {
            let ns = [100usize, 200, 400, 800];
            let errs: Vec<f64> = ns
                .iter()
                .map(|&n| {
                    let g = make_graded_grid::<f64>(n, grading).unwrap();
                    let v = integrate_rdr(field(&g, |r| r * r).values(), &g).unwrap();
                    (v - 0.25).abs()
                })
                .collect();
            for w in errs.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!(order >= 1.9, "{grading}: observed order {order}");
            }
        }
    }

    #[test]
    fn rigid_rotation_gradient() {
        let g = make_graded_grid::<f64>(256, Grading::SineClustered).unwrap();
        let u = RadialField::from_fn(g.clone(), FieldKind::VelocityTheta, |r| r).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((grad_norm_sq_disk(&u, 0.0).unwrap() - two_pi).abs() < 1e-4);
        for c in [0.5, 0.1, 0.013] {
            let a = 1.0 - c;
            let expect = two_pi * (1.0 - a * a);
            assert!((grad_norm_sq_disk(&u, a).unwrap() - expect).abs() < 1e-4);
        }
        let zero = RadialField::from_fn(g, FieldKind::VelocityTheta, |_| 0.0).unwrap();
        assert_eq!(grad_norm_sq_disk(&zero, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn gradient_region_validated() {
        let g = make_graded_grid::<f64>(8, Grading::Uniform).unwrap();
        let u = RadialField::from_fn(g, FieldKind::VelocityTheta, |r| r).unwrap();
        assert!(grad_norm_sq_disk(&u, 1.0).is_err());
        assert!(grad_norm_sq_disk(&u, -0.1).is_err());
    }

    proptest! {
        #[test]
        fn integration_is_linear(
            a in -5.0f64..5.0,
            b in -5.0f64..5.0,
            f in prop::collection::vec(-10.0f64..10.0, 33),
            h in prop::collection::vec(-10.0f64..10.0, 33),
        ) {
            let g = make_graded_grid::<f64>(32, Grading::SineClustered).unwrap();
            let combo: Vec<f64> = f.iter().zip(&h).map(|(x, y)| a * x + b * y).collect();
            let lhs = integrate_rdr(&combo, &g).unwrap();
            let rhs = a * integrate_rdr(&f, &g).unwrap() + b * integrate_rdr(&h, &g).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn l2_triangle_inequality(
            f in prop::collection::vec(-10.0f64..10.0, 21),
            h in prop::collection::vec(-10.0f64..10.0, 21),
        ) {
            let g = make_graded_grid::<f64>(20, Grading::Uniform).unwrap();
            let mk = |v: &Vec<f64>| RadialField::new(g.clone(), v.clone(), FieldKind::Scalar).unwrap();
            let sum: Vec<f64> = f.iter().zip(&h).map(|(x, y)| x + y).collect();
            let lhs = l2_norm_disk(&mk(&sum)).unwrap();
            let rhs = l2_norm_disk(&mk(&f)).unwrap() + l2_norm_disk(&mk(&h)).unwrap();
            prop_assert!(lhs <= rhs + 1e-12);
        }

        #[test]
        fn gradient_norm_monotone_in_region(
            tail in prop::collection::vec(-3.0f64..3.0, 24),
            a in 0.0f64..0.99,
            b in 0.0f64..0.99,
        ) {
            let g = make_graded_grid::<f64>(24, Grading::SineClustered).unwrap();
            let mut v = vec![0.0];
            v.extend(tail);
            let u = RadialField::new(g, v, FieldKind::VelocityTheta).unwrap();
            let (inner, outer) = if a < b { (a, b) } else { (b, a) };
            let big = grad_norm_sq_disk(&u, inner).unwrap();
            let small = grad_norm_sq_disk(&u, outer).unwrap();
            prop_assert!(small <= big + 1e-12);
        }
    }
}
