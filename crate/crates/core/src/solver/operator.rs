//! Piecewise-linear finite elements for the radial operators, with the
//! lumped (row-sum) mass matrix. The lumped mass equals the `r dr`
//! trapezoid weights of the grid.

use crate::linalg::Tridiagonal;
use crate::scalar::Real;
use crate::special::gauss_legendre_unit;

/// `∫ u' v' r dr` assembled exactly (midpoint radius per element).
pub(crate) fn laplace_stiffness<T: Real>(nodes: &[T]) -> Tridiagonal<T> {
    let n = nodes.len();
    let mut k = Tridiagonal::zeros(n);
    let half = T::lit(0.5);
    for e in 0..n - 1 {
        let h = nodes[e + 1] - nodes[e];
        let c = half * (nodes[e] + nodes[e + 1]) / h;
        k.diag[e] = k.diag[e] + c;
        k.diag[e + 1] = k.diag[e + 1] + c;
        k.upper[e] = k.upper[e] - c;
        k.lower[e] = k.lower[e] - c;
    }
    k
}

/// `∫ (u' v' + u v / r²) r dr`: the weak form of `-(u'' + u'/r - u/r²)`.
pub(crate) fn azimuthal_stiffness<T: Real>(nodes: &[T]) -> Tridiagonal<T> {
    let mut k = laplace_stiffness(nodes);
    let (gx, gw) = gauss_legendre_unit(8);
    let gx: Vec<T> = gx.into_iter().map(T::lit).collect();
    let gw: Vec<T> = gw.into_iter().map(T::lit).collect();
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let one = T::one();
    for e in 0..nodes.len() - 1 {
        let a = nodes[e];
        let h = nodes[e + 1] - a;
        if a == T::zero() {
            // φ_0 is pinned by the Dirichlet condition; ∫ s² ds = 1/2 for φ_1
            k.diag[1] = k.diag[1] + half;
            continue;
        }
        // with r = a(1 + xs): ∫ φ_i φ_j dr / r = x ∫₀¹ g(s) / (1 + xs) ds
        let x = h / a;
        let (iaa, iab, ibb) = if x <= quarter {
            let mut acc = (T::zero(), T::zero(), T::zero());
            for (&s, &w) in gx.iter().zip(&gw) {
                let d = w / (one + x * s);
                acc.0 = acc.0 + d * (one - s) * (one - s);
                acc.1 = acc.1 + d * s * (one - s);
                acc.2 = acc.2 + d * s * s;
            }
            (x * acc.0, x * acc.1, x * acc.2)
        } else {
            let l = x.ln_1p();
            let s0 = l / x;
            let s1 = (x - l) / (x * x);
            let s2 = half / x - (x - l) / (x * x * x);
            (x * (s0 - T::two() * s1 + s2), x * (s1 - s2), x * s2)
        };
        k.diag[e] = k.diag[e] + iaa;
        k.diag[e + 1] = k.diag[e + 1] + ibb;
        k.upper[e] = k.upper[e] + iab;
        k.lower[e] = k.lower[e] + iab;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_graded_grid, Grading};

    #[test]
    fn annihilates_rigid_rotation_in_interior() {
        // u = r solves u'' + u'/r - u/r² = 0, so K u vanishes at interior nodes
        let g = make_graded_grid::<f64>(64, Grading::SineClustered).unwrap();
        let k = azimuthal_stiffness(g.nodes());
        let ku = k.mul_vec(g.nodes());
        for &v in &ku[1..64] {
            assert!(v.abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn laplace_kills_constants() {
        let g = make_graded_grid::<f64>(20, Grading::Uniform).unwrap();
        let k = laplace_stiffness(g.nodes());
        assert!(k.mul_vec(&[1.0; 21]).iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn both_branches_of_the_singular_integral_agree() {
        // x slightly on either side of the switch between Gauss and closed form
        for x in [0.25f64 - 1e-7, 0.25 + 1e-7] {
            let k = azimuthal_stiffness(&[0.0, 1.0, 1.0 + x]);
            let eps = 1e-12;
            assert!(k.diag[2].is_finite());
            let l = f64::ln_1p(x);
            let s2 = 0.5 / x - (x - l) / (x * x * x);
            assert!((k.diag[2] - (1.0 + 0.5 * x) / x - x * s2).abs() < 1e-9 + eps);
        }
    }
}
