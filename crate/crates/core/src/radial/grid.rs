use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Node placement law on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grading {
    /// `r_i = i / N`.
    Uniform,
    /// `r_i = sin(i π / (2N))`: spacing shrinks quadratically toward `r = 1`,
    /// where the viscous boundary layer lives.
    SineClustered,
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::Uniform => "uniform",
            Grading::SineClustered => "sine",
        })
    }
}

impl FromStr for Grading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(Grading::Uniform),
            "sine" | "sine_clustered" => Ok(Grading::SineClustered),
            other => Err(Error::invalid(format!(
                "unknown grading '{other}' (expected 'uniform' or 'sine')"
            ))),
        }
    }
}

/// Strictly increasing nodes `0 = r_0 < r_1 < ... < r_N = 1`, together with
/// the quadrature weights for the measure `r dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    grading: Grading,
}

/// Builds a graded grid with `n + 1` nodes. Requires `n >= 2`.
pub fn make_graded_grid<T: Real>(n: usize, grading: Grading) -> Result<Arc<RadialGrid<T>>> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 intervals, got N = {n}"
        )));
    }
    let nt = T::from_usize_lossy(n);
    let mut nodes: Vec<T> = (0..=n)
        .map(|i| {
            let s = T::from_usize_lossy(i) / nt;
            match grading {
                Grading::Uniform => s,
                Grading::SineClustered => (s * T::FRAC_PI_2()).sin(),
            }
        })
        .collect();
    nodes[0] = T::zero();
    nodes[n] = T::one();
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        // only reachable with a scalar type too coarse for the requested N
        return Err(Error::invalid(format!(
            "N = {n} is too fine for the scalar precision: nodes collapse"
        )));
    }
    let weights = super::quadrature::trapezoid_weights(&nodes);
    Ok(Arc::new(RadialGrid {
        nodes,
        weights,
        grading,
    }))
}

impl<T: Real> RadialGrid<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Quadrature weights `w_i` with `Σ w_i f_i ≈ ∫₀¹ f r dr`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// Number of intervals `N` (node count minus one).
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self, k: usize) -> T {
        self.nodes[k + 1] - self.nodes[k]
    }

    pub fn min_spacing(&self) -> T {
        (0..self.intervals()).fold(T::infinity(), |m, k| m.min(self.spacing(k)))
    }

    /// Number of nodes in the closed band `[1 - width, 1]`.
    pub fn nodes_within(&self, width: T) -> usize {
        let edge = T::one() - width;
        self.nodes.iter().filter(|&&r| r >= edge).count()
    }

    /// Two grids are interchangeable when their nodes agree exactly.
    pub fn same_as(&self, other: &RadialGrid<T>) -> bool {
        std::ptr::eq(self, other) || self.nodes == other.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_nodes() {
        let g = make_graded_grid::<f64>(4, Grading::Uniform).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.intervals(), 4);
    }

    #[test]
    fn sine_nodes() {
        let g = make_graded_grid::<f64>(2, Grading::SineClustered).unwrap();
        assert_eq!(g.nodes().len(), 3);
        assert_eq!(g.nodes()[0], 0.0);
        assert!((g.nodes()[1] - std::f64::consts::FRAC_1_SQRT_2).abs() <= 2e-16);
        assert_eq!(g.nodes()[2], 1.0);
    }

    #[test]
    fn too_few_intervals() {
        assert!(matches!(
            make_graded_grid::<f64>(1, Grading::Uniform),
            Err(Error::InvalidArgument(_))
        ));
        assert!(make_graded_grid::<f64>(0, Grading::SineClustered).is_err());
    }

    #[test]
    fn sine_spacing_shrinks_toward_wall() {
        let g = make_graded_grid::<f64>(64, Grading::SineClustered).unwrap();
        for k in 1..g.intervals() {
            assert!(g.spacing(k) <= g.spacing(k - 1) + 1e-15);
        }
        assert_eq!(g.min_spacing(), g.spacing(63));
    }

    #[test]
    fn works_in_single_precision() {
        let g = make_graded_grid::<f32>(16, Grading::SineClustered).unwrap();
        assert_eq!(g.nodes()[16], 1.0f32);
    }

    #[test]
    fn grading_parses() {
        assert_eq!("sine".parse::<Grading>().unwrap(), Grading::SineClustered);
        assert_eq!("uniform".parse::<Grading>().unwrap(), Grading::Uniform);
        assert!("cheb".parse::<Grading>().is_err());
    }
}
