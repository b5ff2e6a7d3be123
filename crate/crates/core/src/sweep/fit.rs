use std::ops::Range;

use crate::error::{Error, Result};

/// Least-squares slope of `log(value)` against `log(nu)` over `window`.
pub fn fit_rate(points: &[(f64, f64)], window: Range<usize>) -> Result<f64> {
    if window.end > points.len() || window.start >= window.end {
        return Err(Error::invalid(format!(
            "fit window {window:?} does not fit {} points",
            points.len()
        )));
    }
    let pts = &points[window];
    if pts.len() < 2 {
        return Err(Error::invalid("a rate fit needs at least 2 points"));
    }
    if let Some(&(nu, v)) = pts.iter().find(|&&(nu, v)| !(v > 0.0) || !(nu > 0.0)) {
        return Err(Error::invalid(format!(
            "rate fit needs positive values, got {v} at nu = {nu}"
        )));
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(nu, v)| (a + nu.ln(), b + v.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), &(nu, v)| {
        let dx = nu.ln() - mx;
        (a + dx * (v.ln() - my), b + dx * dx)
    });
    if sxx == 0.0 {
        return Err(Error::invalid(
            "rate fit needs at least two distinct viscosities",
        ));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1e-2f64, 3e-3, 1e-3, 3e-4]
            .iter()
            .map(|&nu| (nu, nu.sqrt()))
            .collect();
        assert!((fit_rate(&pts, 0..4).unwrap() - 0.5).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = pts.iter().map(|&(nu, _)| (nu, 3.0)).collect();
        assert!(fit_rate(&flat, 1..4).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let pts = [(1e-2, 1.0), (1e-3, 0.0)];
        assert!(fit_rate(&pts, 0..2).is_err());
        assert!(fit_rate(&pts, 0..1).is_err());
        assert!(fit_rate(&pts, 0..3).is_err());
        assert!(fit_rate(&[(1e-2, 1.0), (1e-2, 2.0)], 0..2).is_err());
    }

    proptest! {
        #[test]
        fn recovers_any_power(p in -3.0f64..3.0, c in 0.1f64..10.0) {
            let pts: Vec<(f64, f64)> = [1e-1f64, 2e-2, 5e-3, 1e-4]
                .iter()
                .map(|&nu| (nu, c * nu.powf(p)))
                .collect();
            prop_assert!((fit_rate(&pts, 0..4).unwrap() - p).abs() < 1e-10);
        }
    }
}
