use std::fmt;
use std::sync::Arc;

use super::{integrate_rdr, RadialGrid};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// What a set of radial samples stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// Azimuthal velocity `u_θ(r)`; must vanish at the origin.
    VelocityTheta,
    /// Scalar vorticity `ω(r)`.
    Vorticity,
    Scalar,
}

/// One real sample per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField<T> {
    grid: Arc<RadialGrid<T>>,
    values: Vec<T>,
    kind: FieldKind,
}

impl<T: Real> RadialField<T> {
    pub fn new(grid: Arc<RadialGrid<T>>, values: Vec<T>, kind: FieldKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field has {} samples but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample {v} at node {i}")));
        }
        if kind == FieldKind::VelocityTheta && values[0] != T::zero() {
            return Err(Error::invalid(format!(
                "azimuthal velocity must vanish at r = 0, got {}",
                values[0]
            )));
        }
        Ok(RadialField { grid, values, kind })
    }

    pub fn from_fn(grid: Arc<RadialGrid<T>>, kind: FieldKind, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, kind)
    }

    pub fn zeros(grid: Arc<RadialGrid<T>>, kind: FieldKind) -> Self {
        let values = vec![T::zero(); grid.len()];
        RadialField { grid, values, kind }
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Value at `r = 1`.
    pub fn wall_value(&self) -> T {
        self.values[self.values.len() - 1]
    }

    pub(crate) fn check_same_grid(&self, other: &RadialField<T>) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::invalid("fields live on different grids"))
        }
    }

    /// `self - other` as a field of kind `kind`.
    pub fn minus(&self, other: &RadialField<T>, kind: FieldKind) -> Result<RadialField<T>> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a - b)
            .collect();
        RadialField::new(self.grid.clone(), values, kind)
    }
}

/// Sobolev class of a test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum H1Class {
    H1,
    /// Zero trace on the unit circle.
    H1_0,
}

type Profile<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Radial test function `f(r)` with its derivative.
#[derive(Clone)]
pub struct TestFunction<T> {
    name: String,
    profile: Profile<T>,
    derivative: Profile<T>,
    class: H1Class,
}

impl<T> fmt::Debug for TestFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("class", &self.class)
            .finish()
    }
}

impl<T: Real> TestFunction<T> {
    pub fn new(
        name: impl Into<String>,
        profile: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
        class: H1Class,
    ) -> Result<Self> {
        let tf = TestFunction {
            name: name.into(),
            profile: Arc::new(profile),
            derivative: Arc::new(derivative),
            class,
        };
        let trace = tf.eval(T::one());
        if !trace.is_finite() {
            return Err(Error::invalid(format!(
                "test function '{}' has non-finite trace",
                tf.name
            )));
        }
        if class == H1Class::H1_0 && trace.abs() > T::epsilon().sqrt() {
            return Err(Error::invalid(format!(
                "test function '{}' is declared H1_0 but f(1) = {trace}",
                tf.name
            )));
        }
        Ok(tf)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> H1Class {
        self.class
    }

    pub fn eval(&self, r: T) -> T {
        (self.profile)(r)
    }

    pub fn eval_derivative(&self, r: T) -> T {
        (self.derivative)(r)
    }

    /// `f(1)`; exactly zero for the `H1_0` class.
    pub fn trace(&self) -> T {
        match self.class {
            H1Class::H1_0 => T::zero(),
            H1Class::H1 => self.eval(T::one()),
        }
    }

    pub fn sample(&self, grid: &RadialGrid<T>) -> Vec<T> {
        let mut v: Vec<T> = grid.nodes().iter().map(|&r| self.eval(r)).collect();
        if self.class == H1Class::H1_0 {
            let n = v.len() - 1;
            v[n] = T::zero();
        }
        v
    }

    /// `‖∇f‖_{L²(D)} = sqrt(2π ∫₀¹ (f')² r dr)` on the given grid.
    pub fn grad_norm(&self, grid: &RadialGrid<T>) -> T {
        let sq: Vec<T> = grid
            .nodes()
            .iter()
            .map(|&r| {
                let d = self.eval_derivative(r);
                d * d
            })
            .collect();
        let integral = integrate_rdr(&sq, grid).expect("samples match the grid");
        (T::two() * T::PI() * integral).sqrt()
    }

    pub fn one() -> Self {
        Self::new("one", |_| T::one(), |_| T::zero(), H1Class::H1).expect("valid probe")
    }

    pub fn r() -> Self {
        Self::new("r", |r| r, |_| T::one(), H1Class::H1).expect("valid probe")
    }

    pub fn r_squared() -> Self {
        Self::new("r^2", |r| r * r, |r| T::two() * r, H1Class::H1).expect("valid probe")
    }

    pub fn one_minus_r_squared() -> Self {
        Self::new(
            "1-r^2",
            |r| T::one() - r * r,
            |r| -T::two() * r,
            H1Class::H1_0,
        )
        .expect("valid probe")
    }

    pub fn one_minus_r_squared_squared() -> Self {
        Self::new(
            "(1-r^2)^2",
            |r| {
                let s = T::one() - r * r;
                s * s
            },
            |r| -T::lit(4.0) * r * (T::one() - r * r),
            H1Class::H1_0,
        )
        .expect("valid probe")
    }

    /// The five default probes `{1, r, r², 1 - r², (1 - r²)²}`.
    pub fn default_probes() -> Vec<Self> {
        vec![
            Self::one(),
            Self::r(),
            Self::r_squared(),
            Self::one_minus_r_squared(),
            Self::one_minus_r_squared_squared(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, Grading};

    #[test]
    fn velocity_must_vanish_at_origin() {
        let g = make_graded_grid::<f64>(4, Grading::Uniform).unwrap();
        let err = RadialField::from_fn(g.clone(), FieldKind::VelocityTheta, |r| r + 1.0);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        assert!(RadialField::from_fn(g, FieldKind::Scalar, |r| r + 1.0).is_ok());
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let g = make_graded_grid::<f64>(4, Grading::Uniform).unwrap();
        assert!(RadialField::new(g.clone(), vec![0.0; 4], FieldKind::Scalar).is_err());
        let mut v = vec![0.0; 5];
        v[2] = f64::NAN;
        assert!(RadialField::new(g, v, FieldKind::Scalar).is_err());
    }

    #[test]
    fn probe_traces() {
        let traces: Vec<f64> = TestFunction::<f64>::default_probes()
            .iter()
            .map(|p| p.trace())
            .collect();
        assert_eq!(traces, vec![1.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn h1_0_requires_zero_trace() {
        let bad = TestFunction::<f64>::new("r", |r| r, |_| 1.0, H1Class::H1_0);
        assert!(bad.is_err());
    }

    #[test]
    fn gradient_norm_of_r_squared() {
        // ‖∇(r²)‖² = 2π ∫ 4r³ dr = 2π
        let g = make_graded_grid::<f64>(2000, Grading::Uniform).unwrap();
        let n = TestFunction::<f64>::r_squared().grad_norm(&g);
        assert!((n * n - 2.0 * std::f64::consts::PI).abs() < 1e-5);
    }
}
