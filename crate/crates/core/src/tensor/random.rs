use std::f64::consts::PI;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::{Domain, FieldSample};
use crate::error::Result;
use crate::scalar::Real;

/// Largest wave number (in units of π/2) per axis.
pub const MAX_WAVENUMBER: i32 = 2;

const BASE_FREQUENCY: f64 = PI / 2.0;

/// Smooth scalar `ψ(x) = Σ_k a_k cos(½π k·x + φ_k)` over
/// `k ∈ {0, …, MAX_WAVENUMBER}^d \ {0}`, with `|a_k| <= |k|⁻⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomScalar {
    dim: usize,
    terms: Vec<([f64; 3], f64, f64)>,
}

impl RandomScalar {
    pub fn new(dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut terms = Vec::new();
        let span = MAX_WAVENUMBER + 1;
        let kz = if dim == 3 { span } else { 1 };
        for a in 0..span {
            for b in 0..span {
                for c in 0..kz {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let k = [a as f64, b as f64, c as f64];
                    let norm2 = k.iter().map(|x| x * x).sum::<f64>();
                    let amp = rng.random_range(-1.0..1.0) / (norm2 * norm2);
                    let phase = rng.random_range(0.0..2.0 * PI);
                    terms.push((k, amp, phase));
                }
            }
        }
        RandomScalar { dim, terms }
    }

    fn arg(&self, k: &[f64; 3], x: &[f64], phase: f64) -> f64 {
        BASE_FREQUENCY * (0..self.dim).map(|i| k[i] * x[i]).sum::<f64>() + phase
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, a, ph)| a * self.arg(k, x, *ph).cos())
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (k, a, ph) in &self.terms {
            let s = -a * BASE_FREQUENCY * self.arg(k, x, *ph).sin();
            for i in 0..self.dim {
                g[i] += s * k[i];
            }
        }
        g
    }
}

fn sample<T: Real>(
    domain: &Arc<Domain<T>>,
    ncomp: usize,
    f: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<FieldSample<T>> {
    FieldSample::from_fn(domain.clone(), ncomp, |x| {
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64_lossy()).collect();
        f(&xf).into_iter().map(T::lit).collect()
    })
}

/// Seeded generator of smooth test fields.
#[derive(Debug, Clone)]
pub struct RandomFields {
    rng: ChaCha8Rng,
}

impl RandomFields {
    pub fn new(seed: u64) -> Self {
        RandomFields {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `∇⊥ψ = (−∂_2 ψ, ∂_1 ψ)` in 2-D, `curl A` in 3-D, sampled exactly.
    pub fn solenoidal<T: Real>(&mut self, domain: &Arc<Domain<T>>) -> Result<FieldSample<T>> {
        let dim = domain.dim();
        if dim == 2 {
            let psi = RandomScalar::new(2, &mut self.rng);
            sample(domain, 2, |x| {
                let g = psi.gradient(x);
                vec![-g[1], g[0]]
            })
        } else {
            let a: Vec<RandomScalar> = (0..3)
                .map(|_| RandomScalar::new(3, &mut self.rng))
                .collect();
            sample(domain, 3, |x| {
                let g: Vec<[f64; 3]> = a.iter().map(|s| s.gradient(x)).collect();
                vec![g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
            })
        }
    }

    /// Vector field with independent random components.
    pub fn vector<T: Real>(&mut self, domain: &Arc<Domain<T>>) -> Result<FieldSample<T>> {
        let dim = domain.dim();
        let comps: Vec<RandomScalar> = (0..dim)
            .map(|_| RandomScalar::new(dim, &mut self.rng))
            .collect();
        sample(domain, dim, |x| comps.iter().map(|s| s.value(x)).collect())
    }

    pub fn scalar<T: Real>(&mut self, domain: &Arc<Domain<T>>) -> Result<FieldSample<T>> {
        let s = RandomScalar::new(domain.dim(), &mut self.rng);
        sample(domain, 1, |x| vec![s.value(x)])
    }

    /// Divergence-free quadratic: `∇⊥` (2-D) or curl (3-D) of random cubics.
    pub fn solenoidal_quadratic<T: Real>(
        &mut self,
        domain: &Arc<Domain<T>>,
    ) -> Result<FieldSample<T>> {
        let dim = domain.dim();
        let potentials: Vec<Polynomial> = (0..if dim == 2 { 1 } else { 3 })
            .map(|_| Polynomial::random(dim, 3, &mut self.rng))
            .collect();
        sample(domain, dim, |x| {
            let g: Vec<Vec<f64>> = potentials.iter().map(|p| p.gradient(x)).collect();
            if dim == 2 {
                vec![-g[0][1], g[0][0]]
            } else {
                vec![g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
            }
        })
    }

    /// Vector field whose components are random polynomials of `degree`.
    pub fn polynomial_vector<T: Real>(
        &mut self,
        domain: &Arc<Domain<T>>,
        degree: u32,
    ) -> Result<FieldSample<T>> {
        let dim = domain.dim();
        let comps: Vec<Polynomial> = (0..dim)
            .map(|_| Polynomial::random(dim, degree, &mut self.rng))
            .collect();
        sample(domain, dim, |x| comps.iter().map(|p| p.value(x)).collect())
    }

    pub fn polynomial_scalar<T: Real>(
        &mut self,
        domain: &Arc<Domain<T>>,
        degree: u32,
    ) -> Result<FieldSample<T>> {
        let p = Polynomial::random(domain.dim(), degree, &mut self.rng);
        sample(domain, 1, |x| vec![p.value(x)])
    }
}

/// Dense polynomial `Σ c_e x^e` over exponents with total degree <= `degree`.
#[derive(Debug, Clone, PartialEq)]
struct Polynomial {
    terms: Vec<([u32; 3], f64)>,
}

impl Polynomial {
    fn random(dim: usize, degree: u32, rng: &mut ChaCha8Rng) -> Self {
        let top = degree + 1;
        let mut terms = Vec::new();
        for a in 0..top {
            for b in 0..top {
                for c in 0..if dim == 3 { top } else { 1 } {
                    if a + b + c <= degree {
                        terms.push(([a, b, c], rng.random_range(-1.0..1.0)));
                    }
                }
            }
        }
        Polynomial { terms }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * (0..x.len())
                    .map(|i| x[i].powi(e[i] as i32))
                    .product::<f64>()
            })
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..x.len())
            .map(|d| {
                self.terms
                    .iter()
                    .filter(|(e, _)| e[d] > 0)
                    .map(|(e, c)| {
                        c * e[d] as f64
                            * (0..x.len())
                                .map(|i| {
                                    let p = e[i] as i32 - i32::from(i == d);
                                    x[i].powi(p)
                                })
                                .product::<f64>()
                    })
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::BoxGrid;

    #[test]
    fn same_seed_same_field() {
        let d = Arc::new(Domain::Box(BoxGrid::<f64>::new(2, 8).unwrap()));
        let a = RandomFields::new(9).solenoidal(&d).unwrap();
        let b = RandomFields::new(9).solenoidal(&d).unwrap();
        let c = RandomFields::new(10).solenoidal(&d).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gradient_matches_difference_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = RandomScalar::new(3, &mut rng);
        let x = [0.3, 0.7, 0.1];
        let g = s.gradient(&x);
        for i in 0..3 {
            let (mut a, mut b) = (x, x);
            a[i] += 1e-6;
            b[i] -= 1e-6;
            assert!(((s.value(&a) - s.value(&b)) / 2e-6 - g[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn polynomial_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = Polynomial::random(2, 3, &mut rng);
        let x = [0.4, -0.2];
        let g = p.gradient(&x);
        for i in 0..2 {
            let (mut a, mut b) = (x, x);
            a[i] += 1e-6;
            b[i] -= 1e-6;
            assert!(((p.value(&a) - p.value(&b)) / 2e-6 - g[i]).abs() < 1e-7);
        }
    }
}
