use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::domain::{Domain, FieldSample};
use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};

/// `dim × dim` antisymmetric matrix per node, stored as the strict upper
/// triangle; the lower triangle is its exact negation.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricField<T> {
    domain: Arc<Domain<T>>,
    dim: usize,
    upper: Vec<Vec<T>>,
}

/// Vorticity matrices are antisymmetric fields.
pub type VorticityMatrix<T> = AntisymmetricField<T>;

fn upper_slot(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

impl<T: Real> AntisymmetricField<T> {
    /// Builds the field from its `(i, j)`, `i < j` entries.
    pub fn from_upper(
        domain: Arc<Domain<T>>,
        mut entry: impl FnMut(usize, usize) -> Vec<T>,
    ) -> Self {
        let dim = domain.dim();
        let mut upper = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                upper.push(entry(i, j));
            }
        }
        AntisymmetricField { domain, dim, upper }
    }

    pub fn domain(&self) -> &Arc<Domain<T>> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)` at node `p`.
    pub fn at(&self, i: usize, j: usize, p: usize) -> T {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => T::zero(),
            Less => self.upper[upper_slot(self.dim, i, j)][p],
            Greater => -self.upper[upper_slot(self.dim, j, i)][p],
        }
    }

    /// Samples of entry `(i, j)` over the whole grid.
    pub fn entry(&self, i: usize, j: usize) -> Vec<T> {
        (0..self.domain.len()).map(|p| self.at(i, j, p)).collect()
    }

    /// Largest `|M + Mᵀ|` entry; zero by construction.
    pub fn antisymmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for p in 0..self.domain.len() {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    worst = worst.max((self.at(i, j, p) + self.at(j, i, p)).abs());
                }
            }
        }
        worst
    }

    /// Row divergence `(div M)_i = Σ_j ∂_j M_ij`.
    pub fn divergence(&self) -> FieldSample<T> {
        let n = self.domain.len();
        let mut comps = vec![vec![T::zero(); n]; self.dim];
        for (i, comp) in comps.iter_mut().enumerate() {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let d = &self.domain.gradient(&self.entry(i, j))[j];
                for p in 0..n {
                    comp[p] = comp[p] + d[p];
                }
            }
        }
        FieldSample::new(self.domain.clone(), comps).expect("finite derivatives of finite samples")
    }

    /// `Σ_ij ∫ M_ij S_ij` against a symmetric matrix field given by its
    /// entries `s(i, j)` (only `i <= j` is queried).
    pub fn pair_symmetric(&self, s: impl Fn(usize, usize) -> Vec<T>) -> T {
        let mut total = T::zero();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let sij = s(i, j);
                // the (i, j) and (j, i) products cancel pairwise
                let m: Vec<T> = (0..self.domain.len())
                    .map(|p| self.at(i, j, p) * sij[p] + self.at(j, i, p) * sij[p])
                    .collect();
                total = total + self.domain.integrate(&m);
            }
        }
        total
    }
}

/// `ω(u) = ½[∇u − (∇u)ᵀ]` with `(∇u)_ij = ∂_j u_i`.
pub fn vorticity_matrix<T: Real>(u: &FieldSample<T>) -> Result<VorticityMatrix<T>> {
    if !u.is_vector() {
        return Err(Error::invalid("vorticity needs a vector field"));
    }
    let grad = u.gradient();
    let half = T::lit(0.5);
    Ok(AntisymmetricField::from_upper(
        u.domain().clone(),
        |i, j| {
            grad[i][j]
                .iter()
                .zip(&grad[j][i])
                .map(|(&a, &b)| half * (a - b))
                .collect()
        },
    ))
}

/// Identities checked by [`identity_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    /// Pointwise `2ω(u)·ω(v) = ∇u·∇v − div((v·∇)u)` for solenoidal `u`,
    /// with the divergence expanded by the product rule.
    VorticityProduct,
    /// Pointwise `div (∇x)ᵀ = ∇ div x`; the left side uses the compact
    /// second difference on the diagonal terms.
    DivGradTranspose,
    /// `(∇u, ∇v) = 2(ω(u), ω(v)) + ∫_Γ ((v·∇)u)·n` for solenoidal `u`.
    OmegaVsGrad,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 3] = [
        IdentityKind::VorticityProduct,
        IdentityKind::DivGradTranspose,
        IdentityKind::OmegaVsGrad,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityKind::VorticityProduct => "vorticity_product",
            IdentityKind::DivGradTranspose => "div_gradT",
            IdentityKind::OmegaVsGrad => "omegavsgrad",
        }
    }

    pub fn needs_solenoidal(self) -> bool {
        !matches!(self, IdentityKind::DivGradTranspose)
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown identity '{s}'")))
    }
}

/// Pointwise residuals are taken over the core cube `[¼, ¾]^d`, restricted
/// to nodes this far from the faces so every nested difference is centered.
/// A fixed region keeps the maxima comparable across refinements.
pub const DEEP_INTERIOR: usize = 2;

/// Relative divergence tolerance for the solenoidal identities:
/// `max |div u| <= tol · max |∇u|`.
pub const DEFAULT_DIVERGENCE_TOLERANCE: f64 = 0.25;

/// Residual of `which` for the fields `u`, `v` (`v` is ignored by
/// [`IdentityKind::DivGradTranspose`]), using the default divergence
/// tolerance.
pub fn identity_residual<T: Real>(
    which: IdentityKind,
    u: &FieldSample<T>,
    v: &FieldSample<T>,
) -> Result<T> {
    identity_residual_with(which, u, v, T::lit(DEFAULT_DIVERGENCE_TOLERANCE))
}

pub fn identity_residual_with<T: Real>(
    which: IdentityKind,
    u: &FieldSample<T>,
    v: &FieldSample<T>,
    divergence_tolerance: T,
) -> Result<T> {
    if !u.is_vector() || !v.is_vector() {
        return Err(Error::invalid("identity residuals need vector fields"));
    }
    u.same_domain(v)?;
    let grad_u = u.gradient();
    if which.needs_solenoidal() {
        check_solenoidal(u, &grad_u, divergence_tolerance)?;
    }
    match which {
        IdentityKind::VorticityProduct => vorticity_product(u, v, &grad_u),
        IdentityKind::DivGradTranspose => div_grad_transpose(u, &grad_u),
        IdentityKind::OmegaVsGrad => Ok(omega_vs_grad(u, v, &grad_u)),
    }
}

fn divergence_of<T: Real>(grad: &[Vec<Vec<T>>]) -> Vec<T> {
    let n = grad[0][0].len();
    (0..n)
        .map(|p| (0..grad.len()).fold(T::zero(), |s, i| s + grad[i][i][p]))
        .collect()
}

fn check_solenoidal<T: Real>(u: &FieldSample<T>, grad: &[Vec<Vec<T>>], tol: T) -> Result<()> {
    let div = max_abs(&divergence_of(grad));
    let scale = grad
        .iter()
        .flatten()
        .fold(T::zero(), |m, g| m.max(max_abs(g)));
    if div > tol * scale {
        return Err(Error::PreconditionViolation(format!(
            "field is not divergence-free: max |div u| = {:e}, max |grad u| = {:e} (h = {:e})",
            div.to_f64_lossy(),
            scale.to_f64_lossy(),
            u.spacing().to_f64_lossy()
        )));
    }
    Ok(())
}

fn box_only<T: Real>(u: &FieldSample<T>, which: &str) -> Result<()> {
    match **u.domain() {
        Domain::Box(_) => Ok(()),
        Domain::Disk(_) => Err(Error::invalid(format!(
            "the pointwise {which} residual is defined on box grids only"
        ))),
    }
}

fn deep_max<T: Real>(u: &FieldSample<T>, values: &[T]) -> T {
    let Domain::Box(g) = &**u.domain() else {
        unreachable!("checked by box_only")
    };
    values
        .iter()
        .enumerate()
        .filter(|(p, _)| g.in_core(*p) && g.is_deep(*p, DEEP_INTERIOR))
        .fold(T::zero(), |m, (_, v)| m.max(v.abs()))
}

fn vorticity_product<T: Real>(
    u: &FieldSample<T>,
    v: &FieldSample<T>,
    grad_u: &[Vec<Vec<T>>],
) -> Result<T> {
    box_only(u, "vorticity_product")?;
    let d = u.dim();
    let grad_v = v.gradient();
    let wu = vorticity_matrix(u)?;
    let wv = vorticity_matrix(v)?;
    let grad_div = u.domain().gradient(&divergence_of(grad_u));
    let residual: Vec<T> = (0..u.domain().len())
        .map(|p| {
            let mut r = T::zero();
            for i in 0..d {
                for j in 0..d {
                    r = r + T::two() * wu.at(i, j, p) * wv.at(i, j, p)
                        - grad_u[i][j][p] * grad_v[i][j][p]
                        + grad_v[i][j][p] * grad_u[j][i][p];
                }
                r = r + v.component(i)[p] * grad_div[i][p];
            }
            r
        })
        .collect();
    Ok(deep_max(u, &residual))
}

fn div_grad_transpose<T: Real>(x: &FieldSample<T>, grad: &[Vec<Vec<T>>]) -> Result<T> {
    box_only(x, "div_gradT")?;
    let Domain::Box(g) = &**x.domain() else {
        unreachable!()
    };
    let d = x.dim();
    let n = g.len();
    let div = divergence_of(grad);
    let mut worst = T::zero();
    for i in 0..d {
        let rhs = g.partial(&div, i);
        let mut lhs = g.second_partial(x.component(i), i);
        for j in (0..d).filter(|&j| j != i) {
            // ∂_j of (∇x)ᵀ_ij = ∂_i x_j
            let t = g.partial(&grad[j][i], j);
            for p in 0..n {
                lhs[p] = lhs[p] + t[p];
            }
        }
        let res: Vec<T> = lhs.iter().zip(&rhs).map(|(&a, &b)| a - b).collect();
        worst = worst.max(deep_max(x, &res));
    }
    Ok(worst)
}

fn omega_vs_grad<T: Real>(u: &FieldSample<T>, v: &FieldSample<T>, grad_u: &[Vec<Vec<T>>]) -> T {
    let d = u.dim();
    let domain = u.domain();
    let grad_v = v.gradient();
    let full: Vec<T> = (0..domain.len())
        .map(|p| {
            let mut s = T::zero();
            for i in 0..d {
                for j in 0..d {
                    s = s + grad_u[i][j][p] * grad_v[i][j][p];
                }
            }
            s
        })
        .collect();
    let wu = vorticity_matrix(u).expect("vector field");
    let wv = vorticity_matrix(v).expect("vector field");
    let omega: Vec<T> = (0..domain.len())
        .map(|p| {
            let mut s = T::zero();
            for i in 0..d {
                for j in 0..d {
                    s = s + wu.at(i, j, p) * wv.at(i, j, p);
                }
            }
            T::two() * s
        })
        .collect();
    let volume = domain.integrate(&full) - domain.integrate(&omega);
    let mut surface = T::zero();
    for (p, normal, w) in domain.boundary() {
        // ((v·∇)u)_j n_j
        let mut flux = T::zero();
        for j in 0..d {
            let mut a = T::zero();
            for i in 0..d {
                a = a + v.component(i)[p] * grad_u[j][i][p];
            }
            flux = flux + a * normal[j];
        }
        surface = surface + w * flux;
    }
    (volume - surface).abs()
}

/// `|(u, ∇f) + (div u, f) − ∫_Γ (u·n) f|` by the domain's volume and surface
/// quadrature.
pub fn ibp_residual<T: Real>(u: &FieldSample<T>, f: &FieldSample<T>) -> Result<T> {
    if !u.is_vector() {
        return Err(Error::invalid("ibp_residual needs a vector field u"));
    }
    if f.components().len() != 1 {
        return Err(Error::invalid("ibp_residual needs a scalar field f"));
    }
    u.same_domain(f)?;
    let domain = u.domain();
    let fv = f.component(0);
    let grad_f = domain.gradient(fv);
    let div = u.divergence()?;
    let integrand: Vec<T> = (0..domain.len())
        .map(|p| {
            let flow = (0..u.dim()).fold(T::zero(), |s, i| s + u.component(i)[p] * grad_f[i][p]);
            flow + div[p] * fv[p]
        })
        .collect();
    let volume = domain.integrate(&integrand);
    let surface = domain
        .boundary()
        .into_iter()
        .fold(T::zero(), |s, (p, n, w)| {
            let un = (0..u.dim()).fold(T::zero(), |a, i| a + u.component(i)[p] * n[i]);
            s + w * un * fv[p]
        });
    Ok((volume - surface).abs())
}
