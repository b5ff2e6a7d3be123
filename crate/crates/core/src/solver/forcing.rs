use crate::error::{Error, Result};
use crate::scalar::Real;

/// Boundary tangential velocity `α(t)` at `r = 1`, tabulated and linearly
/// interpolated. Piecewise linear keeps `α` in `H¹(0, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryForcing<T> {
    times: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> BoundaryForcing<T> {
    pub fn table(times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() || times.is_empty() {
            return Err(Error::invalid(format!(
                "forcing table needs matching, non-empty time and value lists (got {} and {})",
                times.len(),
                values.len()
            )));
        }
        if times[0] != T::zero() {
            return Err(Error::invalid("forcing table must start at t = 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "forcing sample times must be strictly increasing",
            ));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("forcing table contains non-finite entries"));
        }
        Ok(BoundaryForcing { times, values })
    }

    /// `α ≡ value` on `[0, t_end]`.
    pub fn constant(value: T, t_end: T) -> Result<Self> {
        if !(t_end > T::zero()) {
            return Err(Error::invalid(format!(
                "forcing end time must be positive, got {t_end}"
            )));
        }
        Self::table(vec![T::zero(), t_end], vec![value, value])
    }

    /// Samples `f` at `samples + 1` equally spaced times on `[0, t_end]`.
    pub fn sampled(f: impl Fn(T) -> T, t_end: T, samples: usize) -> Result<Self> {
        if samples == 0 || !(t_end > T::zero()) {
            return Err(Error::invalid(
                "sampled forcing needs a positive end time and samples",
            ));
        }
        let n = T::from_usize_lossy(samples);
        let times: Vec<T> = (0..=samples)
            .map(|i| t_end * T::from_usize_lossy(i) / n)
            .collect();
        let values = times.iter().map(|&t| f(t)).collect();
        Self::table(times, values)
    }

    /// `α(t) = ½(1 - cos(2πt/T))`, tabulated on `samples` intervals.
    pub fn raised_cosine(t_end: T, samples: usize) -> Result<Self> {
        let half = T::lit(0.5);
        Self::sampled(
            move |t| half * (T::one() - (T::two() * T::PI() * t / t_end).cos()),
            t_end,
            samples,
        )
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Last tabulated time.
    pub fn end_time(&self) -> T {
        self.times[self.times.len() - 1]
    }

    /// Linear interpolation; constant extrapolation outside the table.
    pub fn eval(&self, t: T) -> T {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let s = (t - t0) / (t1 - t0);
        self.values[k] + (self.values[k + 1] - self.values[k]) * s
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_linearly() {
        let f = BoundaryForcing::table(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(2.0), 1.0);
        assert_eq!(f.eval(3.0), 0.0);
        assert_eq!(f.eval(7.0), 0.0);
        assert_eq!(f.end_time(), 3.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(BoundaryForcing::table(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(BoundaryForcing::table(vec![0.5, 1.0], vec![1.0, 1.0]).is_err());
        assert!(BoundaryForcing::table(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(BoundaryForcing::<f64>::constant(1.0, 0.0).is_err());
    }

    #[test]
    fn raised_cosine_endpoints() {
        let f = BoundaryForcing::<f64>::raised_cosine(2.0, 200).unwrap();
        assert!(f.eval(0.0).abs() < 1e-15);
        assert!((f.eval(1.0) - 1.0).abs() < 1e-15);
        assert!(f.eval(2.0).abs() < 1e-15);
        assert!(!f.is_constant());
    }
}
