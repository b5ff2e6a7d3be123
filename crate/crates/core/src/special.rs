//! Bessel functions of the first kind (orders 0 and 1), zeros of `J₁`, and
//! the modified functions `I₀`, `I₁` for moderate arguments.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Ascending power series `Σ (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`, with the
/// sign alternation switched off for the modified function `I_n`.
fn power_series(n: u32, x: f64, alternating: bool) -> f64 {
    let half = 0.5 * x;
    let q = if alternating {
        -half * half
    } else {
        half * half
    };
    let mut term = (1..=n).fold(1.0, |acc, k| acc * half / k as f64);
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence, normalized by `J₀ + 2 Σ J_{2k} = 1`.
fn backward_recurrence(x: f64) -> (f64, f64) {
    let start = 2 * ((x + 40.0 + (40.0 * x).sqrt()) as usize / 2);
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let (mut j0, mut j1) = (0.0, 0.0);
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
        if k == 2 {
            j1 = j;
        }
        if k == 1 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += j0;
    (j0 / norm, j1 / norm)
}

/// Hankel asymptotic expansion of `J_n(x)` for large `x`.
fn asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let z = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * z);
        if a.abs() >= prev || a == 0.0 {
            break;
        }
        prev = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = (n as f64) * 0.5 * PI + FRAC_PI_4;
    let (s, c) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = c * cp + s * sp;
    let sin_chi = s * cp - c * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `(J₀(x), J₁(x))`.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax <= SERIES_LIMIT {
        (power_series(0, ax, true), power_series(1, ax, true))
    } else if ax < ASYMPTOTIC_LIMIT {
        backward_recurrence(ax)
    } else {
        (asymptotic(0, ax), asymptotic(1, ax))
    };
    if x < 0.0 {
        (j0, -j1)
    } else {
        (j0, j1)
    }
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j01(x).0
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j01(x).1
}

/// First `n` positive zeros of `J₁`, by Newton iteration from `(k + 1/4) π`.
pub fn bessel_j1_zeros(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| {
            let mut x = (k as f64 + 0.25) * PI;
            for _ in 0..50 {
                let (j0, j1) = bessel_j01(x);
                let step = j1 / (j0 - j1 / x);
                x -= step;
                if step.abs() <= 1e-15 * x {
                    break;
                }
            }
            x
        })
        .collect()
}

/// `I₀(x)` by its power series; accurate for `|x| ≲ 20`.
pub fn bessel_i0(x: f64) -> f64 {
    power_series(0, x.abs(), false)
}

/// `I₁(x)` by its power series; accurate for `|x| ≲ 20`.
pub fn bessel_i1(x: f64) -> f64 {
    power_series(1, x.abs(), false) * x.signum()
}

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = x;
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from an independent arbitrary-precision evaluation
    const TABLE: &[(f64, f64, f64)] = &[
        (1.0, 0.7651976865579665, 0.44005058574493355),
        (10.0, -0.24593576445134832, 0.04347274616886141),
        (17.3, -0.13370064707576435, -0.14142333549201416),
        (30.0, -0.08636798358104031, -0.11875106261662305),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, j0, j1) in TABLE {
            let (a, b) = bessel_j01(x);
            assert!((a - j0).abs() < 1e-13, "J0({x}) = {a}");
            assert!((b - j1).abs() < 1e-13, "J1({x}) = {b}");
        }
        assert!((bessel_j1(100.5) + 0.05779112399693235).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        let (a0, a1) = (power_series(0, 8.0, true), power_series(1, 8.0, true));
        let (b0, b1) = backward_recurrence(8.0);
        assert!((a0 - b0).abs() < 1e-13 && (a1 - b1).abs() < 1e-13);
        let (c0, c1) = backward_recurrence(25.0);
        assert!((c0 - asymptotic(0, 25.0)).abs() < 1e-13);
        assert!((c1 - asymptotic(1, 25.0)).abs() < 1e-13);
    }

    #[test]
    fn wronskian_like_identity() {
        // J₀' = -J₁: compare against a centered difference
        for x in [0.5, 3.0, 9.0, 15.0, 40.0] {
            let h = 1e-5;
            let d = (bessel_j0(x + h) - bessel_j0(x - h)) / (2.0 * h);
            assert!((d + bessel_j1(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn first_zeros() {
        let z = bessel_j1_zeros(3);
        assert!((z[0] - 3.8317059702075123).abs() < 1e-9);
        assert!((z[1] - 7.01558667).abs() < 1e-8);
        assert!((z[2] - 10.17346814).abs() < 1e-8);
        for &x in &bessel_j1_zeros(300) {
            assert!(bessel_j1(x).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_rule_exact_to_degree_2n_minus_1() {
        for n in [1usize, 6, 8] {
            let (x, w) = gauss_legendre_unit(n);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for p in 0..2 * n as i32 {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
                assert!((q - 1.0 / (p + 1) as f64).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn modified_bessel_at_one() {
        assert!((bessel_i0(1.0) - 1.2660658777520084).abs() < 1e-15);
        assert!((bessel_i1(1.0) - 0.565159103992485).abs() < 1e-15);
    }
}
