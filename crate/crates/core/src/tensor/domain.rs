use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform tensor grid on `[0, 1]^d` with `n` intervals per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid<T> {
    dim: usize,
    n: usize,
    h: T,
    /// Composite Boole weights on `[0, 1]` (exact for degree <= 5).
    weights_1d: Vec<T>,
}

impl<T: Real> BoxGrid<T> {
    /// `n` must be a positive multiple of 4 (composite Boole rule).
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::invalid(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if n == 0 || !n.is_multiple_of(4) {
            return Err(Error::invalid(format!(
                "box grids need a positive multiple of 4 intervals, got {n}"
            )));
        }
        let h = T::one() / T::from_usize_lossy(n);
        let scale = T::lit(2.0 / 45.0) * h;
        let weights_1d = (0..=n)
            .map(|i| {
                let c = if i == 0 || i == n {
                    7.0
                } else {
                    match i % 4 {
                        0 => 14.0,
                        2 => 12.0,
                        _ => 32.0,
                    }
                };
                scale * T::lit(c)
            })
            .collect();
        Ok(BoxGrid {
            dim,
            n,
            h,
            weights_1d,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn len(&self) -> usize {
        (self.n + 1).pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn stride(&self, axis: usize) -> usize {
        (self.n + 1).pow(axis as u32)
    }

    /// Per-axis node index of a flat index.
    pub fn index(&self, flat: usize, axis: usize) -> usize {
        (flat / self.stride(axis)) % (self.n + 1)
    }

    pub fn point(&self, flat: usize) -> Vec<T> {
        (0..self.dim)
            .map(|a| T::from_usize_lossy(self.index(flat, a)) * self.h)
            .collect()
    }

    /// Nodes at least `depth` nodes away from every face.
    pub fn is_deep(&self, flat: usize, depth: usize) -> bool {
        (0..self.dim).all(|a| {
            let i = self.index(flat, a);
            i >= depth && i + depth <= self.n
        })
    }

    /// Nodes in the core cube `[¼, ¾]^d`; the same points on every grid.
    pub fn in_core(&self, flat: usize) -> bool {
        (0..self.dim).all(|a| {
            let i = self.index(flat, a);
            4 * i >= self.n && 4 * i <= 3 * self.n
        })
    }

    pub fn volume_weight(&self, flat: usize) -> T {
        (0..self.dim).fold(T::one(), |w, a| w * self.weights_1d[self.index(flat, a)])
    }

    /// `(node, outward normal, surface weight)` for every face node; nodes on
    /// edges appear once per face they belong to.
    pub fn boundary(&self) -> Vec<(usize, Vec<T>, T)> {
        let mut out = Vec::new();
        for axis in 0..self.dim {
            for (side, sign) in [(0, -T::one()), (self.n, T::one())] {
                for flat in 0..self.len() {
                    if self.index(flat, axis) != side {
                        continue;
                    }
                    let w = (0..self.dim)
                        .filter(|&b| b != axis)
                        .fold(T::one(), |w, b| w * self.weights_1d[self.index(flat, b)]);
                    let mut normal = vec![T::zero(); self.dim];
                    normal[axis] = sign;
                    out.push((flat, normal, w));
                }
            }
        }
        out
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        (0..self.dim).any(|a| {
            let i = self.index(flat, a);
            i == 0 || i == self.n
        })
    }

    /// Second-order difference along `axis`: centered inside, one-sided
    /// three-point at the faces. Exact for quadratics.
    pub fn partial(&self, f: &[T], axis: usize) -> Vec<T> {
        let s = self.stride(axis);
        let n = self.n;
        let inv2h = T::one() / (T::two() * self.h);
        let (three, four) = (T::lit(3.0), T::lit(4.0));
        (0..f.len())
            .map(|p| match self.index(p, axis) {
                0 => (-three * f[p] + four * f[p + s] - f[p + 2 * s]) * inv2h,
                i if i == n => (three * f[p] - four * f[p - s] + f[p - 2 * s]) * inv2h,
                _ => (f[p + s] - f[p - s]) * inv2h,
            })
            .collect()
    }

    /// Compact three-point second difference along `axis`; only meaningful
    /// away from the faces (zero there).
    pub fn second_partial(&self, f: &[T], axis: usize) -> Vec<T> {
        let s = self.stride(axis);
        let inv = T::one() / (self.h * self.h);
        (0..f.len())
            .map(|p| {
                let i = self.index(p, axis);
                if i == 0 || i == self.n {
                    T::zero()
                } else {
                    (f[p + s] - T::two() * f[p] + f[p - s]) * inv
                }
            })
            .collect()
    }
}

/// Tensor polar grid on the closed unit disk: `n_r` rings at
/// `r_j = (j + ½) Δr` with `Δr = 1 / (n_r - ½)` (so the last ring is the
/// unit circle and no node sits at the origin) and `n_θ` equally spaced
/// angles. Radial differences at the innermost ring use the node across the
/// origin, `(r_0, θ + π)`, which is why `n_θ` must be even.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid<T> {
    n_r: usize,
    n_theta: usize,
    dr: T,
    radii: Vec<T>,
    cos: Vec<T>,
    sin: Vec<T>,
    radial_weights: Vec<T>,
}

impl<T: Real> PolarGrid<T> {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        if n_r < 4 {
            return Err(Error::invalid(format!(
                "polar grid needs at least 4 rings, got {n_r}"
            )));
        }
        if n_theta < 4 || !n_theta.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "polar grid needs an even angle count >= 4, got {n_theta}"
            )));
        }
        let dr = T::one() / (T::from_usize_lossy(n_r) - T::lit(0.5));
        let half = T::lit(0.5);
        let mut radii: Vec<T> = (0..n_r)
            .map(|j| (T::from_usize_lossy(j) + half) * dr)
            .collect();
        radii[n_r - 1] = T::one();
        let angle =
            |k: usize| T::two() * T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(n_theta);
        let cos = (0..n_theta).map(|k| angle(k).cos()).collect();
        let sin = (0..n_theta).map(|k| angle(k).sin()).collect();
        // midpoint cells [jΔr, (j+1)Δr]; the half cell [1 - Δr/2, 1] uses the
        // last three rings, exact for quadratic r·g(r)
        let mut radial_weights: Vec<T> = radii.iter().map(|&r| r * dr).collect();
        radial_weights[n_r - 1] = T::lit(1.0 / 3.0) * dr;
        radial_weights[n_r - 2] =
            radial_weights[n_r - 2] + T::lit(5.0 / 24.0) * dr * radii[n_r - 2];
        radial_weights[n_r - 3] =
            radial_weights[n_r - 3] - T::lit(1.0 / 24.0) * dr * radii[n_r - 3];
        Ok(PolarGrid {
            n_r,
            n_theta,
            dr,
            radii,
            cos,
            sin,
            radial_weights,
        })
    }

    pub fn rings(&self) -> usize {
        self.n_r
    }

    pub fn angles(&self) -> usize {
        self.n_theta
    }

    pub fn radial_spacing(&self) -> T {
        self.dr
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flat(&self, j: usize, k: usize) -> usize {
        j * self.n_theta + k
    }

    pub fn ring_angle(&self, flat: usize) -> (usize, usize) {
        (flat / self.n_theta, flat % self.n_theta)
    }

    pub fn cos_sin(&self, k: usize) -> (T, T) {
        (self.cos[k], self.sin[k])
    }

    pub fn point(&self, flat: usize) -> Vec<T> {
        let (j, k) = self.ring_angle(flat);
        vec![self.radii[j] * self.cos[k], self.radii[j] * self.sin[k]]
    }

    /// Area weight: radial midpoint cell times the angular trapezoid.
    pub fn volume_weight(&self, flat: usize) -> T {
        let (j, _) = self.ring_angle(flat);
        self.radial_weights[j] * self.angle_weight()
    }

    pub fn angle_weight(&self) -> T {
        T::two() * T::PI() / T::from_usize_lossy(self.n_theta)
    }

    /// `(node, outward normal, arc-length weight)` on the unit circle.
    pub fn boundary(&self) -> Vec<(usize, Vec<T>, T)> {
        let j = self.n_r - 1;
        (0..self.n_theta)
            .map(|k| {
                (
                    self.flat(j, k),
                    vec![self.cos[k], self.sin[k]],
                    self.angle_weight(),
                )
            })
            .collect()
    }

    /// Radial derivative along each ray: centered inside, four-point
    /// one-sided on the unit circle. `odd` selects the reflection rule
    /// across the origin: `false` for scalars and Cartesian components,
    /// `true` for polar vector components, which change sign.
    pub fn radial_derivative(&self, f: &[T], odd: bool) -> Vec<T> {
        let nt = self.n_theta;
        let n = self.n_r;
        let inv2h = T::one() / (T::two() * self.dr);
        let w = wall_stencil(self.dr);
        let mut d = vec![T::zero(); f.len()];
        for k in 0..nt {
            let at = |j: usize| f[j * nt + k];
            let across = f[(k + nt / 2) % nt];
            let ghost = if odd { -across } else { across };
            d[k] = (at(1) - ghost) * inv2h;
            for j in 1..n - 1 {
                d[j * nt + k] = (at(j + 1) - at(j - 1)) * inv2h;
            }
            d[(n - 1) * nt + k] = (0..4).fold(T::zero(), |acc, q| acc + w[q] * at(n - 1 - q));
        }
        d
    }

    /// Spectral `∂_θ` ring by ring; the Nyquist mode has zero derivative.
    pub fn angular_derivative(&self, f: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); f.len()];
        for j in 0..self.n_r {
            let ring = &f[j * self.n_theta..(j + 1) * self.n_theta];
            let mut modes = self.forward(ring);
            for m in modes.iter_mut() {
                let (a, b, order) = (m.cos, m.sin, T::from_usize_lossy(m.order));
                if m.order == 0 || 2 * m.order == self.n_theta {
                    m.cos = T::zero();
                    m.sin = T::zero();
                } else {
                    m.cos = order * b;
                    m.sin = -order * a;
                }
            }
            out[j * self.n_theta..(j + 1) * self.n_theta].copy_from_slice(&self.inverse(&modes));
        }
        out
    }

    /// Real Fourier coefficients of one ring:
    /// `g_k = Σ_m a_m cos(m θ_k) + b_m sin(m θ_k)`, `m = 0..=n_θ/2`.
    pub fn forward(&self, ring: &[T]) -> Vec<Mode<T>> {
        let nt = self.n_theta;
        let inv = T::one() / T::from_usize_lossy(nt);
        (0..=nt / 2)
            .map(|m| {
                let (mut a, mut b) = (T::zero(), T::zero());
                for (k, &g) in ring.iter().enumerate() {
                    let idx = (m * k) % nt;
                    a = a + g * self.cos[idx];
                    b = b + g * self.sin[idx];
                }
                let scale = if m == 0 || 2 * m == nt {
                    inv
                } else {
                    T::two() * inv
                };
                let b = if m == 0 || 2 * m == nt {
                    T::zero()
                } else {
                    b * scale
                };
                Mode {
                    order: m,
                    cos: a * scale,
                    sin: b,
                }
            })
            .collect()
    }

    pub fn inverse(&self, modes: &[Mode<T>]) -> Vec<T> {
        let nt = self.n_theta;
        (0..nt)
            .map(|k| {
                modes.iter().fold(T::zero(), |acc, m| {
                    let idx = (m.order * k) % nt;
                    acc + m.cos * self.cos[idx] + m.sin * self.sin[idx]
                })
            })
            .collect()
    }
}

/// Weights of `f(1), f(1 - Δr), f(1 - 2Δr), f(1 - 3Δr)` for `f'(1)`.
pub(crate) fn wall_stencil<T: Real>(dr: T) -> [T; 4] {
    let s = T::one() / (T::lit(6.0) * dr);
    [
        T::lit(11.0) * s,
        T::lit(-18.0) * s,
        T::lit(9.0) * s,
        T::lit(-2.0) * s,
    ]
}

/// One real angular Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode<T> {
    pub order: usize,
    pub cos: T,
    pub sin: T,
}

/// Where a sampled field lives.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<T> {
    Box(BoxGrid<T>),
    Disk(PolarGrid<T>),
}

impl<T: Real> Domain<T> {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box(g) => g.dim(),
            Domain::Disk(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Domain::Box(g) => g.len(),
            Domain::Disk(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Characteristic spacing `h`.
    pub fn spacing(&self) -> T {
        match self {
            Domain::Box(g) => g.spacing(),
            Domain::Disk(g) => g.radial_spacing(),
        }
    }

    pub fn point(&self, flat: usize) -> Vec<T> {
        match self {
            Domain::Box(g) => g.point(flat),
            Domain::Disk(g) => g.point(flat),
        }
    }

    pub fn volume_weight(&self, flat: usize) -> T {
        match self {
            Domain::Box(g) => g.volume_weight(flat),
            Domain::Disk(g) => g.volume_weight(flat),
        }
    }

    pub fn boundary(&self) -> Vec<(usize, Vec<T>, T)> {
        match self {
            Domain::Box(g) => g.boundary(),
            Domain::Disk(g) => g.boundary(),
        }
    }

    /// Cartesian gradient `(∂_1 f, …, ∂_d f)` of a scalar sample.
    pub fn gradient(&self, f: &[T]) -> Vec<Vec<T>> {
        match self {
            Domain::Box(g) => (0..g.dim()).map(|a| g.partial(f, a)).collect(),
            Domain::Disk(g) => {
                let fr = g.radial_derivative(f, false);
                let ft = g.angular_derivative(f);
                let mut dx = vec![T::zero(); f.len()];
                let mut dy = vec![T::zero(); f.len()];
                for p in 0..f.len() {
                    let (j, k) = g.ring_angle(p);
                    let (c, s) = g.cos_sin(k);
                    let inv_r = T::one() / g.radii()[j];
                    dx[p] = c * fr[p] - s * inv_r * ft[p];
                    dy[p] = s * fr[p] + c * inv_r * ft[p];
                }
                vec![dx, dy]
            }
        }
    }

    /// `∫ f` by the domain's volume quadrature.
    pub fn integrate(&self, f: &[T]) -> T {
        f.iter()
            .enumerate()
            .fold(T::zero(), |acc, (p, &v)| acc + v * self.volume_weight(p))
    }
}

/// Vector (or scalar, with one component) samples on a [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample<T> {
    domain: Arc<Domain<T>>,
    components: Vec<Vec<T>>,
    boundary_flag: bool,
}

impl<T: Real> FieldSample<T> {
    pub fn new(domain: Arc<Domain<T>>, components: Vec<Vec<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("a field needs at least one component"));
        }
        if components.iter().any(|c| c.len() != domain.len()) {
            return Err(Error::invalid(format!(
                "component length does not match the {} grid nodes",
                domain.len()
            )));
        }
        if components.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("field contains non-finite samples"));
        }
        let boundary_flag = domain
            .boundary()
            .iter()
            .all(|(p, _, _)| components.iter().all(|c| c[*p] == T::zero()));
        Ok(FieldSample {
            domain,
            components,
            boundary_flag,
        })
    }

    /// Samples `f(x)` (returning `ncomp` values) at every node.
    pub fn from_fn(
        domain: Arc<Domain<T>>,
        ncomp: usize,
        f: impl Fn(&[T]) -> Vec<T>,
    ) -> Result<Self> {
        let mut components = vec![Vec::with_capacity(domain.len()); ncomp];
        for p in 0..domain.len() {
            let v = f(&domain.point(p));
            if v.len() != ncomp {
                return Err(Error::invalid(format!(
                    "sampling function returned {} components, expected {ncomp}",
                    v.len()
                )));
            }
            for (c, x) in components.iter_mut().zip(v) {
                c.push(x);
            }
        }
        Self::new(domain, components)
    }

    pub fn zeros(domain: Arc<Domain<T>>, ncomp: usize) -> Self {
        let components = vec![vec![T::zero(); domain.len()]; ncomp];
        FieldSample {
            domain,
            components,
            boundary_flag: true,
        }
    }

    pub fn domain(&self) -> &Arc<Domain<T>> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn spacing(&self) -> T {
        self.domain.spacing()
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[T] {
        &self.components[i]
    }

    /// True when every component is exactly zero on the boundary nodes.
    pub fn boundary_flag(&self) -> bool {
        self.boundary_flag
    }

    pub fn is_vector(&self) -> bool {
        self.components.len() == self.dim()
    }

    /// `grad[i][j] = ∂_j u_i`.
    pub fn gradient(&self) -> Vec<Vec<Vec<T>>> {
        self.components
            .iter()
            .map(|c| self.domain.gradient(c))
            .collect()
    }

    pub fn divergence(&self) -> Result<Vec<T>> {
        if !self.is_vector() {
            return Err(Error::invalid("divergence needs a vector field"));
        }
        let n = self.domain.len();
        let mut div = vec![T::zero(); n];
        for (i, c) in self.components.iter().enumerate() {
            let d = &self.domain.gradient(c)[i];
            for p in 0..n {
                div[p] = div[p] + d[p];
            }
        }
        Ok(div)
    }

    /// Largest absolute sample over all components.
    pub fn max_abs(&self) -> T {
        self.components
            .iter()
            .flatten()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub(crate) fn same_domain(&self, other: &FieldSample<T>) -> Result<()> {
        if Arc::ptr_eq(&self.domain, &other.domain) || *self.domain == *other.domain {
            Ok(())
        } else {
            Err(Error::invalid("fields are sampled on different domains"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boole_weights_integrate_quintics() {
        let g = BoxGrid::<f64>::new(2, 8).unwrap();
        let d = Domain::Box(g);
        let f: Vec<f64> = (0..d.len())
            .map(|p| {
                let x = d.point(p);
                x[0].powi(5) * x[1].powi(4)
            })
            .collect();
        assert!((d.integrate(&f) - 1.0 / 30.0).abs() < 1e-14);
    }

    #[test]
    fn box_rejects_bad_sizes() {
        assert!(BoxGrid::<f64>::new(2, 6).is_err());
        assert!(BoxGrid::<f64>::new(4, 8).is_err());
    }

    #[test]
    fn box_differences_exact_on_quadratics() {
        let g = BoxGrid::<f64>::new(3, 4).unwrap();
        let f: Vec<f64> = (0..g.len())
            .map(|p| {
                let x = g.point(p);
                x[0] * x[0] + 3.0 * x[1] * x[2] - x[2]
            })
            .collect();
        let d0 = g.partial(&f, 0);
        let d2 = g.partial(&f, 2);
        for p in 0..g.len() {
            let x = g.point(p);
            assert!((d0[p] - 2.0 * x[0]).abs() < 1e-12);
            assert!((d2[p] - (3.0 * x[1] - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn box_boundary_measures_faces() {
        let g = BoxGrid::<f64>::new(3, 8).unwrap();
        let area: f64 = g.boundary().iter().map(|b| b.2).sum();
        assert!((area - 6.0).abs() < 1e-13);
    }

    #[test]
    fn polar_area_and_perimeter() {
        let g = PolarGrid::<f64>::new(16, 32).unwrap();
        let d = Domain::Disk(g.clone());
        assert!((d.integrate(&vec![1.0; d.len()]) - std::f64::consts::PI).abs() < 1e-13);
        let perimeter: f64 = g.boundary().iter().map(|b| b.2).sum();
        assert!((perimeter - 2.0 * std::f64::consts::PI).abs() < 1e-13);
        assert_eq!(g.radii()[15], 1.0);
    }

    #[test]
    fn polar_gradient_of_quadratic() {
        let d = Domain::Disk(PolarGrid::<f64>::new(12, 16).unwrap());
        let f: Vec<f64> = (0..d.len())
            .map(|p| {
                let x = d.point(p);
                x[0] * x[0] - 2.0 * x[0] * x[1] + x[1]
            })
            .collect();
        let g = d.gradient(&f);
        for p in 0..d.len() {
            let x = d.point(p);
            assert!((g[0][p] - (2.0 * x[0] - 2.0 * x[1])).abs() < 1e-12);
            assert!((g[1][p] - (-2.0 * x[0] + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_round_trip() {
        let g = PolarGrid::<f64>::new(4, 10).unwrap();
        let ring: Vec<f64> = (0..10).map(|k| ((k * k) as f64).sin() + 0.3).collect();
        let back = g.inverse(&g.forward(&ring));
        for (a, b) in ring.iter().zip(back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn polar_rejects_odd_angles() {
        assert!(PolarGrid::<f64>::new(8, 15).is_err());
        assert!(PolarGrid::<f64>::new(2, 16).is_err());
    }

    #[test]
    fn boundary_flag_detects_vanishing_fields() {
        let d = Arc::new(Domain::Box(BoxGrid::<f64>::new(2, 4).unwrap()));
        let bubble = FieldSample::from_fn(d.clone(), 1, |x| {
            vec![x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1])]
        })
        .unwrap();
        assert!(bubble.boundary_flag());
        let one = FieldSample::from_fn(d, 1, |_| vec![1.0]).unwrap();
        assert!(!one.boundary_flag());
    }
}
