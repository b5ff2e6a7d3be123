use super::operator::azimuthal_stiffness;
use super::BoundaryForcing;
use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;
use crate::radial::{FieldKind, RadialField, RadialGrid};
use crate::scalar::Real;
use std::sync::Arc;

/// Minimum number of nodes required inside `[1 - sqrt(νT), 1]` before the
/// solver warns about an unresolved boundary layer.
pub const BOUNDARY_LAYER_NODES: usize = 8;

/// Knobs of the time integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Number of initial Crank–Nicolson steps replaced by two backward-Euler
    /// half steps each. Damps the stiff transient excited by initial data
    /// that does not match the boundary value.
    pub damped_startup_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            damped_startup_steps: 2,
        }
    }
}

/// Navier–Stokes solution at one viscosity, sampled at the output times.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub nu: T,
    pub times: Vec<T>,
    pub fields: Vec<RadialField<T>>,
    pub forcing: BoundaryForcing<T>,
    pub final_time: T,
}

impl<T: Real> Trajectory<T> {
    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        self.fields[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(t_k, u(t_k))` pairs in time order.
    pub fn iter(&self) -> impl Iterator<Item = (T, &RadialField<T>)> {
        self.times.iter().copied().zip(&self.fields)
    }

    pub fn last(&self) -> (T, &RadialField<T>) {
        let k = self.times.len() - 1;
        (self.times[k], &self.fields[k])
    }
}

/// `m` output times log-spaced from `fraction · T` to `T`.
pub fn log_spaced_times<T: Real>(t_final: T, m: usize, fraction: T) -> Result<Vec<T>> {
    if m == 0 || !(t_final > T::zero()) || !(fraction > T::zero() && fraction <= T::one()) {
        return Err(Error::invalid(
            "log-spaced times need m >= 1, T > 0 and 0 < fraction <= 1",
        ));
    }
    if m == 1 {
        return Ok(vec![t_final]);
    }
    let lo = fraction.ln();
    let denom = T::from_usize_lossy(m - 1);
    let mut times: Vec<T> = (0..m)
        .map(|k| t_final * (lo * (T::one() - T::from_usize_lossy(k) / denom)).exp())
        .collect();
    times[m - 1] = t_final;
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("log-spaced output times collapse"));
    }
    Ok(times)
}

/// Integrates `∂_t u = ν (u'' + u'/r - u/r²)` on `(0, 1)` with `u(0) = 0`,
/// `u(1) = α(t)` by Crank–Nicolson in time and linear finite elements with
/// lumped mass in space. Steps land exactly on every output time.
///
/// When `u₀(1) ≠ α(0)` the first step simply imposes `α(t₁)` at the wall.
pub fn solve_ns_radial<T: Real>(
    u0: &RadialField<T>,
    nu: T,
    forcing: &BoundaryForcing<T>,
    t_final: T,
    dt: T,
    output_times: &[T],
) -> Result<Trajectory<T>> {
    solve_ns_radial_with(
        u0,
        nu,
        forcing,
        t_final,
        dt,
        output_times,
        &SolverOptions::default(),
    )
}

pub fn solve_ns_radial_with<T: Real>(
    u0: &RadialField<T>,
    nu: T,
    forcing: &BoundaryForcing<T>,
    t_final: T,
    dt: T,
    output_times: &[T],
    options: &SolverOptions,
) -> Result<Trajectory<T>> {
    if !(nu > T::zero()) || !nu.is_finite() {
        return Err(Error::invalid(format!("nu must be positive, got {nu}")));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if !(t_final > T::zero()) || !t_final.is_finite() {
        return Err(Error::invalid(format!("T must be positive, got {t_final}")));
    }
    if u0.kind() != FieldKind::VelocityTheta {
        return Err(Error::invalid(
            "initial datum must be an azimuthal velocity",
        ));
    }
    if output_times.is_empty() {
        return Err(Error::invalid("at least one output time is required"));
    }
    if output_times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("output times must be strictly increasing"));
    }
    if !(output_times[0] > T::zero()) || output_times[output_times.len() - 1] > t_final {
        return Err(Error::invalid(format!(
            "output times must lie in (0, T] with T = {t_final}"
        )));
    }
    let grid = u0.grid().clone();
    let layer = (nu * t_final).sqrt();
    let resolved = grid.nodes_within(layer);
    if resolved < BOUNDARY_LAYER_NODES {
        log::warn!(
            "boundary layer of width {layer} holds only {resolved} nodes (want >= {BOUNDARY_LAYER_NODES}); refine N"
        );
    }

    let n = grid.intervals();
    let mass = grid.weights().to_vec();
    let stiff = azimuthal_stiffness(grid.nodes());
    let mut u = u0.values().to_vec();
    let mut t = T::zero();
    let mut step = 0usize;
    let mut startup_left = options.damped_startup_steps;
    let mut fields = Vec::with_capacity(output_times.len());
    let half = T::lit(0.5);

    for &target in output_times {
        let gap = target - t;
        let count = (gap / dt - T::lit(1e-9)).ceil().max(T::one());
        let count = count.to_usize().unwrap_or(1);
        let h = gap / T::from_usize_lossy(count);
        let cn = Implicit::new(&mass, &stiff, nu * h, half);
        let be = if startup_left > 0 {
            Some(Implicit::new(&mass, &stiff, nu * h * half, T::one()))
        } else {
            None
        };
        for i in 0..count {
            let t_next = if i + 1 == count { target } else { t + h };
            match (&be, startup_left > 0) {
                (Some(be), true) => {
                    let t_mid = t + h * half;
                    u = be.advance(&u, forcing.eval(t_mid))?;
                    u = be.advance(&u, forcing.eval(t_next))?;
                    startup_left -= 1;
                }
                _ => u = cn.advance(&u, forcing.eval(t_next))?,
            }
            t = t_next;
            step += 1;
            if let Some(k) = u.iter().position(|v| !v.is_finite()) {
                return Err(Error::NumericalBlowup {
                    step,
                    time: t.to_f64_lossy(),
                    detail: format!("non-finite velocity at node {k}"),
                });
            }
        }
        u[0] = T::zero();
        u[n] = forcing.eval(target);
        fields.push(RadialField::new(
            grid.clone(),
            u.clone(),
            FieldKind::VelocityTheta,
        )?);
    }

    Ok(Trajectory {
        nu,
        times: output_times.to_vec(),
        fields,
        forcing: forcing.clone(),
        final_time: t_final,
    })
}

/// One θ-scheme step `(M + θ τ K) u⁺ = (M - (1-θ) τ K) u` with Dirichlet
/// rows at both ends, `τ = ν h`.
struct Implicit<'a, T> {
    mass: &'a [T],
    stiff: &'a Tridiagonal<T>,
    explicit: T,
    implicit: T,
    system: Tridiagonal<T>,
}

impl<'a, T: Real> Implicit<'a, T> {
    fn new(mass: &'a [T], stiff: &'a Tridiagonal<T>, tau: T, theta: T) -> Self {
        let n = mass.len() - 1;
        // interior unknowns 1..n-1
        let m = n - 1;
        let mut system = Tridiagonal::zeros(m);
        for j in 0..m {
            let i = j + 1;
            system.diag[j] = mass[i] + theta * tau * stiff.diag[i];
            if j + 1 < m {
                system.upper[j] = theta * tau * stiff.upper[i];
                system.lower[j] = theta * tau * stiff.lower[i];
            }
        }
        Implicit {
            mass,
            stiff,
            explicit: (T::one() - theta) * tau,
            implicit: theta * tau,
            system,
        }
    }

    fn advance(&self, u: &[T], wall: T) -> Result<Vec<T>> {
        let n = u.len() - 1;
        let mut rhs = Vec::with_capacity(n - 1);
        for i in 1..n {
            let ku = self.stiff.lower[i - 1] * u[i - 1]
                + self.stiff.diag[i] * u[i]
                + self.stiff.upper[i] * u[i + 1];
            rhs.push(self.mass[i] * u[i] - self.explicit * ku);
        }
        if n >= 2 {
            rhs[n - 2] = rhs[n - 2] - self.implicit * self.stiff.upper[n - 1] * wall;
        }
        let inner = self.system.solve(&rhs)?;
        let mut next = Vec::with_capacity(n + 1);
        next.push(T::zero());
        next.extend(inner);
        next.push(wall);
        Ok(next)
    }
}
