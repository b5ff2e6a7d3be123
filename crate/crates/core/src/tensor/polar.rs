use std::sync::Arc;

use super::domain::{wall_stencil, Domain, FieldSample, Mode, PolarGrid};
use super::identities::AntisymmetricField;
use crate::error::{Error, Result};
use crate::linalg::DenseLu;
use crate::scalar::{max_abs, Real};

/// Relative tolerance on `max |v·n|` for fields that must be tangential.
pub const DEFAULT_TRACE_TOLERANCE: f64 = 1e-8;

fn polar_grid<T: Real>(field: &FieldSample<T>) -> Result<&PolarGrid<T>> {
    match &**field.domain() {
        Domain::Disk(g) if field.is_vector() => Ok(g),
        Domain::Disk(_) => Err(Error::invalid("expected a 2-D vector field")),
        Domain::Box(_) => Err(Error::invalid(
            "expected a field sampled on the polar disk grid",
        )),
    }
}

/// Polar components `(u_r, u_θ)` of a Cartesian vector field.
fn to_polar<T: Real>(g: &PolarGrid<T>, u: &FieldSample<T>) -> (Vec<T>, Vec<T>) {
    let (ux, uy) = (u.component(0), u.component(1));
    (0..g.len())
        .map(|p| {
            let (c, s) = g.cos_sin(g.ring_angle(p).1);
            (c * ux[p] + s * uy[p], -s * ux[p] + c * uy[p])
        })
        .unzip()
}

fn to_cartesian<T: Real>(g: &PolarGrid<T>, ur: &[T], ut: &[T]) -> Vec<Vec<T>> {
    let (x, y) = (0..g.len())
        .map(|p| {
            let (c, s) = g.cos_sin(g.ring_angle(p).1);
            (c * ur[p] - s * ut[p], s * ur[p] + c * ut[p])
        })
        .unzip();
    vec![x, y]
}

/// Mode tables `[ring][order]`.
fn modes_of<T: Real>(g: &PolarGrid<T>, f: &[T]) -> Vec<Vec<Mode<T>>> {
    (0..g.rings())
        .map(|j| g.forward(&f[j * g.angles()..(j + 1) * g.angles()]))
        .collect()
}

fn from_modes<T: Real>(g: &PolarGrid<T>, modes: &[Vec<Mode<T>>]) -> Vec<T> {
    modes.iter().flat_map(|ring| g.inverse(ring)).collect()
}

/// `F(r_j) = -∫_{r_j}^1 g(s) ds` by piecewise cubic interpolation
/// (exact for cubics).
fn integral_to_wall<T: Real>(g: &[T], dr: T) -> Vec<T> {
    let n = g.len();
    let c = |x: f64| T::lit(x / 24.0);
    let mut out = vec![T::zero(); n];
    for i in (0..n - 1).rev() {
        let s = i.saturating_sub(1).min(n - 4);
        let w = match i - s {
            0 => [c(9.0), c(19.0), c(-5.0), c(1.0)],
            1 => [c(-1.0), c(13.0), c(13.0), c(-1.0)],
            _ => [c(1.0), c(-5.0), c(19.0), c(9.0)],
        };
        let piece = (0..4).fold(T::zero(), |a, q| a + w[q] * g[s + q]);
        out[i] = out[i + 1] - dr * piece;
    }
    out
}

fn is_axial(g: &PolarGrid<impl Real>, order: usize) -> bool {
    order == 0 || 2 * order == g.angles()
}

/// Stream function `f` (zero on the unit circle) with `∇⊥f = v`, and the
/// antisymmetric potential `M = [[0, −f], [f, 0]]` with `div M = v`.
#[derive(Debug, Clone)]
pub struct StreamFunction<T> {
    pub f: FieldSample<T>,
    pub m: AntisymmetricField<T>,
    /// `max |∇⊥f − v|` with discrete derivatives.
    pub reconstruction_error: T,
    /// `max |div M − v|`.
    pub potential_error: T,
}

/// Rejects fields whose normal trace exceeds `tol · max |v|`.
fn check_tangential<T: Real>(g: &PolarGrid<T>, ur: &[T], scale: T, tol: T) -> Result<()> {
    let wall = g.rings() - 1;
    let trace = (0..g.angles())
        .map(|k| ur[g.flat(wall, k)].abs())
        .fold(T::zero(), T::max);
    if trace > tol * scale.max(T::min_positive_value()) {
        return Err(Error::invalid(format!(
            "field has a nonzero normal trace on the boundary: max |v·n| = {:e}",
            trace.to_f64_lossy()
        )));
    }
    Ok(())
}

pub fn stream_function_and_m<T: Real>(v: &FieldSample<T>) -> Result<StreamFunction<T>> {
    stream_function_and_m_with(v, T::lit(DEFAULT_TRACE_TOLERANCE))
}

/// Mode by mode: the axisymmetric (and Nyquist) part integrates
/// `∂_r f = v_θ` inward from the wall; every other mode follows
/// algebraically from `v_r = −(1/r) ∂_θ f`.
pub fn stream_function_and_m_with<T: Real>(
    v: &FieldSample<T>,
    trace_tolerance: T,
) -> Result<StreamFunction<T>> {
    let g = polar_grid(v)?;
    let (vr, vt) = to_polar(g, v);
    check_tangential(g, &vr, v.max_abs(), trace_tolerance)?;
    let radial = modes_of(g, &vr);
    let azimuthal = modes_of(g, &vt);
    let mut f_modes = radial.clone();
    for (order, _) in radial[0].iter().enumerate() {
        if is_axial(g, order) {
            let a: Vec<T> = azimuthal.iter().map(|ring| ring[order].cos).collect();
            for (ring, fa) in f_modes
                .iter_mut()
                .zip(integral_to_wall(&a, g.radial_spacing()))
            {
                ring[order].cos = fa;
                ring[order].sin = T::zero();
            }
        } else {
            let m = T::from_usize_lossy(order);
            for (j, ring) in f_modes.iter_mut().enumerate() {
                let r = g.radii()[j];
                let (c, s) = (radial[j][order].cos, radial[j][order].sin);
                ring[order].cos = r * s / m;
                ring[order].sin = -r * c / m;
            }
        }
    }
    let mut f = from_modes(g, &f_modes);
    let wall = g.rings() - 1;
    for k in 0..g.angles() {
        f[g.flat(wall, k)] = T::zero();
    }
    let domain = v.domain().clone();
    let grad = domain.gradient(&f);
    let reconstruction_error = (0..domain.len())
        .map(|p| {
            (-grad[1][p] - v.component(0)[p])
                .abs()
                .max((grad[0][p] - v.component(1)[p]).abs())
        })
        .fold(T::zero(), T::max);
    let m = AntisymmetricField::from_upper(domain.clone(), |_, _| f.iter().map(|&x| -x).collect());
    let div_m = m.divergence();
    let potential_error = (0..2)
        .map(|i| {
            let diff: Vec<T> = div_m
                .component(i)
                .iter()
                .zip(v.component(i))
                .map(|(&a, &b)| a - b)
                .collect();
            max_abs(&diff)
        })
        .fold(T::zero(), T::max);
    Ok(StreamFunction {
        f: FieldSample::new(domain, vec![f])?,
        m,
        reconstruction_error,
        potential_error,
    })
}

/// `u = v + ∇p` with `v` discretely solenoidal and tangential.
#[derive(Debug, Clone)]
pub struct Helmholtz<T> {
    pub v: FieldSample<T>,
    pub p: FieldSample<T>,
    /// `max |div v|` over the rings inside the wall.
    pub divergence: T,
    /// `max |v·n|` on the unit circle.
    pub normal_trace: T,
    /// `|(v, ∇p)|`.
    pub orthogonality: T,
}

/// Radial difference matrix of one angular mode; `parity` is the sign the
/// mode picks up across the origin.
fn radial_matrix<T: Real>(n: usize, dr: T, parity: T) -> Vec<T> {
    let inv2h = T::one() / (T::two() * dr);
    let mut d = vec![T::zero(); n * n];
    d[0] = -parity * inv2h;
    d[1] = inv2h;
    for j in 1..n - 1 {
        d[j * n + j - 1] = -inv2h;
        d[j * n + j + 1] = inv2h;
    }
    let last = (n - 1) * n;
    for (q, w) in wall_stencil(dr).into_iter().enumerate() {
        d[last + n - 1 - q] = w;
    }
    d
}

fn matmul<T: Real>(n: usize, a: &[T], b: &[T]) -> Vec<T> {
    let mut c = vec![T::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == T::zero() {
                continue;
            }
            for j in 0..n {
                c[i * n + j] = c[i * n + j] + aik * b[k * n + j];
            }
        }
    }
    c
}

/// Factorized Neumann problem `div_h ∇_h p = d` (rows inside the wall),
/// `(∇_h p)_r = g` on the wall, for one angular mode `order >= 1`.
fn mode_operator<T: Real>(g: &PolarGrid<T>, order: usize) -> Result<DenseLu<T>> {
    let n = g.rings();
    let dr = g.radial_spacing();
    let sign = if order.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    let ds = radial_matrix(n, dr, sign);
    let dv = radial_matrix(n, dr, -sign);
    let mut a = matmul(n, &dv, &ds);
    let m2 = T::from_usize_lossy(order * order);
    for j in 0..n - 1 {
        let r = g.radii()[j];
        for k in 0..n {
            a[j * n + k] = a[j * n + k] + ds[j * n + k] / r;
        }
        a[j * n + j] = a[j * n + j] - m2 / (r * r);
    }
    a[(n - 1) * n..].copy_from_slice(&ds[(n - 1) * n..]);
    DenseLu::factor(n, a)
        .map_err(|e| Error::numerical(format!("angular mode {order} solve failed: {e}")))
}

/// Discrete divergence on the polar grid, written in the polar-component
/// form that the projection inverts exactly.
fn polar_divergence<T: Real>(g: &PolarGrid<T>, ur: &[T], ut: &[T]) -> Vec<T> {
    let dur = g.radial_derivative(ur, true);
    let dut = g.angular_derivative(ut);
    (0..g.len())
        .map(|p| {
            let r = g.radii()[g.ring_angle(p).0];
            dur[p] + ur[p] / r + dut[p] / r
        })
        .collect()
}

/// Leray–Helmholtz projection on the disk, one angular Fourier mode at a
/// time. The axisymmetric and Nyquist modes have no angular gradient: their
/// radial velocity is the gradient part outright.
pub fn helmholtz_project<T: Real>(u: &FieldSample<T>) -> Result<Helmholtz<T>> {
    let g = polar_grid(u)?;
    let n = g.rings();
    let (ur, ut) = to_polar(g, u);
    let div = polar_divergence(g, &ur, &ut);
    let div_modes = modes_of(g, &div);
    let ur_modes = modes_of(g, &ur);
    let mut p_modes = ur_modes.clone();
    for order in 0..=g.angles() / 2 {
        if is_axial(g, order) {
            let a: Vec<T> = ur_modes.iter().map(|ring| ring[order].cos).collect();
            for (ring, pa) in p_modes
                .iter_mut()
                .zip(integral_to_wall(&a, g.radial_spacing()))
            {
                ring[order].cos = pa;
                ring[order].sin = T::zero();
            }
            continue;
        }
        let lu = mode_operator(g, order)?;
        for part in [false, true] {
            let pick = |m: &Mode<T>| if part { m.sin } else { m.cos };
            let mut rhs: Vec<T> = div_modes.iter().map(|ring| pick(&ring[order])).collect();
            rhs[n - 1] = pick(&ur_modes[n - 1][order]);
            let sol = lu.solve(&rhs);
            if sol.iter().any(|x| !x.is_finite()) {
                return Err(Error::numerical(format!(
                    "angular mode {order} produced non-finite values"
                )));
            }
            for (ring, x) in p_modes.iter_mut().zip(sol) {
                if part {
                    ring[order].sin = x;
                } else {
                    ring[order].cos = x;
                }
            }
        }
    }
    // gradient of the non-axial modes only
    let mut q_modes = p_modes.clone();
    for ring in q_modes.iter_mut() {
        for m in ring.iter_mut().filter(|m| is_axial(g, m.order)) {
            m.cos = T::zero();
            m.sin = T::zero();
        }
    }
    let q = from_modes(g, &q_modes);
    let qr = g.radial_derivative(&q, false);
    let qt = g.angular_derivative(&q);
    // remove the axial radial velocity as well
    let mut axial_modes = ur_modes.clone();
    for ring in axial_modes.iter_mut() {
        for m in ring.iter_mut().filter(|m| !is_axial(g, m.order)) {
            m.cos = T::zero();
            m.sin = T::zero();
        }
    }
    let ur_axial = from_modes(g, &axial_modes);
    let vr: Vec<T> = (0..g.len()).map(|p| ur[p] - qr[p] - ur_axial[p]).collect();
    let vt: Vec<T> = (0..g.len())
        .map(|p| ut[p] - qt[p] / g.radii()[g.ring_angle(p).0])
        .collect();

    let pfield = from_modes(g, &p_modes);
    let domain = u.domain().clone();
    let vdiv = polar_divergence(g, &vr, &vt);
    let divergence = max_abs(&vdiv[..(n - 1) * g.angles()]);
    let normal_trace = max_abs(&vr[(n - 1) * g.angles()..]);
    let v = FieldSample::new(domain.clone(), to_cartesian(g, &vr, &vt))?;
    let grad_p = domain.gradient(&pfield);
    let dot: Vec<T> = (0..g.len())
        .map(|p| v.component(0)[p] * grad_p[0][p] + v.component(1)[p] * grad_p[1][p])
        .collect();
    let orthogonality = domain.integrate(&dot).abs();
    Ok(Helmholtz {
        v,
        p: FieldSample::new(domain, vec![pfield])?,
        divergence,
        normal_trace,
        orthogonality,
    })
}

/// Disk grid with `n_r` rings and `n_θ` angles, shared by sampled fields.
pub fn disk<T: Real>(n_r: usize, n_theta: usize) -> Result<Arc<Domain<T>>> {
    Ok(Arc::new(Domain::Disk(PolarGrid::new(n_r, n_theta)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::RandomFields;

    fn field(d: &Arc<Domain<f64>>, f: impl Fn(&[f64]) -> Vec<f64>) -> FieldSample<f64> {
        FieldSample::from_fn(d.clone(), 2, f).unwrap()
    }

    fn max_diff(a: &FieldSample<f64>, b: &FieldSample<f64>) -> f64 {
        a.components()
            .iter()
            .zip(b.components())
            .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }

    #[test]
    fn cubic_cumulative_integral_is_exact_on_cubics() {
        let dr = 0.1;
        let r: Vec<f64> = (0..8).map(|j| (j as f64 + 0.5) * dr).collect();
        let g: Vec<f64> = r.iter().map(|x| 1.0 - 2.0 * x + x.powi(3)).collect();
        let prim = |x: f64| x - x * x + x.powi(4) / 4.0;
        let top = *r.last().unwrap();
        for (j, v) in integral_to_wall(&g, dr).iter().enumerate() {
            assert!((v + (prim(top) - prim(r[j]))).abs() < 1e-14);
        }
    }

    #[test]
    fn rigid_rotation_stream_function() {
        let d = disk::<f64>(16, 32).unwrap();
        let v = field(&d, |x| vec![-x[1], x[0]]);
        let s = stream_function_and_m(&v).unwrap();
        for p in 0..d.len() {
            let x = d.point(p);
            let want = (x[0] * x[0] + x[1] * x[1] - 1.0) / 2.0;
            assert!((s.f.component(0)[p] - want).abs() < 1e-6);
            assert!((s.m.at(1, 0, p) - want).abs() < 1e-6);
            assert!((s.m.at(0, 1, p) + want).abs() < 1e-6);
        }
        assert!(s.reconstruction_error < 1e-6 && s.potential_error < 1e-6);
    }

    #[test]
    fn zero_stream_function() {
        let d = disk::<f64>(8, 16).unwrap();
        let s = stream_function_and_m(&FieldSample::zeros(d, 2)).unwrap();
        assert_eq!(s.f.max_abs(), 0.0);
        assert_eq!(s.m.divergence().max_abs(), 0.0);
    }

    #[test]
    fn nonaxisymmetric_stream_function_converges() {
        // f = (1 - r²) x: v = ∇⊥f
        let errs: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let d = disk::<f64>(n, 32).unwrap();
                let v = field(&d, |x| {
                    let s = 1.0 - x[0] * x[0] - x[1] * x[1];
                    vec![2.0 * x[0] * x[1], s - 2.0 * x[0] * x[0]]
                });
                let sf = stream_function_and_m(&v).unwrap();
                (0..d.len())
                    .map(|p| {
                        let x = d.point(p);
                        (sf.f.component(0)[p] - (1.0 - x[0] * x[0] - x[1] * x[1]) * x[0]).abs()
                    })
                    .fold(sf.potential_error, f64::max)
            })
            .collect();
        assert!(errs[2] < 1e-3);
        assert!(errs[1] / errs[2] > 3.0, "{errs:?}");
    }

    #[test]
    fn normal_flow_is_not_in_h() {
        let d = disk::<f64>(8, 16).unwrap();
        let v = field(&d, |x| vec![x[0], x[1]]);
        let err = stream_function_and_m(&v).unwrap_err();
        assert!(err.is_usage());
        assert!(err.to_string().contains("normal trace"));
    }

    #[test]
    fn helmholtz_examples() {
        let d = disk::<f64>(16, 32).unwrap();
        let grad = helmholtz_project(&field(&d, |_| vec![1.0, 0.0])).unwrap();
        assert!(grad.v.max_abs() <= 1e-6);
        let rot = field(&d, |x| vec![-x[1], x[0]]);
        let h = helmholtz_project(&rot).unwrap();
        assert!(max_diff(&h.v, &rot) <= 1e-6 && h.p.max_abs() <= 1e-6);
        let both = helmholtz_project(&field(&d, |x| vec![1.0 - x[1], x[0]])).unwrap();
        assert!(max_diff(&both.v, &rot) <= 1e-6);
        for p in 0..d.len() {
            assert!((both.p.component(0)[p] - d.point(p)[0]).abs() <= 1e-6);
        }
    }

    #[test]
    fn helmholtz_is_idempotent_and_linear() {
        let d = disk::<f64>(24, 32).unwrap();
        let mut gen = RandomFields::new(11);
        let a = gen.vector(&d).unwrap();
        let b = gen.vector(&d).unwrap();
        let pa = helmholtz_project(&a).unwrap();
        assert!(pa.divergence < 1e-10 && pa.normal_trace < 1e-10);
        let again = helmholtz_project(&pa.v).unwrap();
        assert!(max_diff(&again.v, &pa.v) < 1e-10);
        assert!(again.p.max_abs() < 1e-10);
        let pb = helmholtz_project(&b).unwrap();
        let sum = FieldSample::new(
            d.clone(),
            (0..2)
                .map(|i| {
                    a.component(i)
                        .iter()
                        .zip(b.component(i))
                        .map(|(x, y)| x + y)
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let ps = helmholtz_project(&sum).unwrap();
        let lin = (0..2)
            .flat_map(|i| {
                let (s, x, y) = (ps.v.component(i), pa.v.component(i), pb.v.component(i));
                (0..d.len()).map(move |p| (s[p] - x[p] - y[p]).abs())
            })
            .fold(0.0, f64::max);
        assert!(lin < 1e-10);
    }

    #[test]
    fn helmholtz_orthogonality_improves_with_resolution() {
        let orth: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let d = disk::<f64>(n, 32).unwrap();
                helmholtz_project(&RandomFields::new(5).vector(&d).unwrap())
                    .unwrap()
                    .orthogonality
            })
            .collect();
        assert!(orth[2] < orth[0] / 8.0, "{orth:?}");
    }

    #[test]
    fn box_fields_are_rejected() {
        let d = Arc::new(Domain::Box(
            crate::tensor::BoxGrid::<f64>::new(2, 4).unwrap(),
        ));
        let u = FieldSample::zeros(d, 2);
        assert!(helmholtz_project(&u).is_err());
        assert!(stream_function_and_m(&u).is_err());
    }

    #[test]
    fn single_precision_projection() {
        let d = disk::<f32>(12, 16).unwrap();
        let u = FieldSample::from_fn(d, 2, |x| vec![1.0 - x[1], x[0]]).unwrap();
        let h = helmholtz_project(&u).unwrap();
        assert!(h.normal_trace < 1e-4);
    }
}
