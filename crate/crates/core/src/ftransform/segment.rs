//! High-order Filon rule for ∫_a^b F(ω) e^{−iωt} dω from equispaced samples.
//!
//! On every cell the samples are replaced by the degree-q Lagrange
//! interpolant through the q+1 nearest nodes (one-sided near the ends, so
//! nothing is extrapolated) and the product with e^{−iωt} is integrated
//! exactly through Chebyshev moments. The number of samples used does not
//! depend on t.

use super::moments::cheb_moments;
use crate::error::{Error, Result};
use crate::quad::{cheb1_coefficients, cheb1_nodes};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct FilonRule {
    order: usize,
    /// coef[o][k][m]: Chebyshev coefficient m (cell mapped to [-1, 1]) of
    /// Lagrange basis k for a cell at offset o inside its stencil.
    coef: Vec<Vec<Vec<f64>>>,
}

impl FilonRule {
    /// Local interpolation degree `order` (even, at least 2).
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 || order % 2 == 1 {
            return Err(Error::config("frequency.order", format!("Filon order must be even and >= 2, got {order}")));
        }
        let nodes = cheb1_nodes(order + 1);
        let coef = (0..order)
            .map(|o| {
                (0..=order)
                    .map(|k| {
                        let vals: Vec<f64> = nodes
                            .iter()
                            .map(|&u| {
                                let s = 0.5 * (1.0 + u) + o as f64;
                                (0..=order)
                                    .filter(|&j| j != k)
                                    .map(|j| (s - j as f64) / (k as f64 - j as f64))
                                    .product()
                            })
                            .collect();
                        cheb1_coefficients(&vals)
                    })
                    .collect()
            })
            .collect();
        Ok(FilonRule { order, coef })
    }

    pub fn standard() -> Self {
        Self::new(16).expect("default Filon order")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn min_samples(&self) -> usize {
        self.order + 1
    }

    /// Weights w with Σ_k w_k F(a + kh) ≈ ∫_a^{a+(J−1)h} F(ω) e^{−iωt} dω.
    pub fn weights(&self, j: usize, a: f64, h: f64, t: f64) -> Result<Vec<C64>> {
        let mut w = vec![C64::new(0.0, 0.0); j];
        self.accumulate(j, a, h, t, C64::new(1.0, 0.0), &mut w)?;
        Ok(w)
    }

    /// Adds `scale` times the weights into `w`.
    pub fn accumulate(&self, j: usize, a: f64, h: f64, t: f64, scale: C64, w: &mut [C64]) -> Result<()> {
        let q = self.order;
        if j < q + 1 {
            return Err(Error::config(
                "frequency.J",
                format!("the band rule needs at least {} samples, got {j}", q + 1),
            ));
        }
        debug_assert_eq!(w.len(), j);
        let mom = cheb_moments(q, -0.5 * t * h);
        let cell: Vec<Vec<C64>> = self
            .coef
            .iter()
            .map(|layout| {
                layout
                    .iter()
                    .map(|c| c.iter().zip(&mom).map(|(ci, mi)| mi * *ci).sum::<C64>() * (0.5 * h))
                    .collect()
            })
            .collect();
        // phase at cell centres advances by e^{−ith}
        let step = C64::from_polar(1.0, -t * h);
        let mut phase = scale * C64::from_polar(1.0, -t * (a + 0.5 * h));
        for n in 0..j - 1 {
            let lo = n.saturating_sub(q / 2).min(j - 1 - q);
            let v = &cell[n - lo];
            for (k, vk) in v.iter().enumerate() {
                w[lo + k] += phase * vk;
            }
            phase *= step;
            if n % 64 == 63 {
                phase = scale * C64::from_polar(1.0, -t * (a + (n as f64 + 1.5) * h));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre_on;

    fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, j: usize, t: f64) -> C64 {
        let rule = FilonRule::standard();
        let h = (b - a) / (j - 1) as f64;
        let w = rule.weights(j, a, h, t).unwrap();
        (0..j).map(|k| w[k] * f(a + k as f64 * h)).sum()
    }

    fn reference(f: impl Fn(f64) -> C64, a: f64, b: f64, t: f64) -> C64 {
        let panels = 800;
        let mut s = C64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + (b - a) * p as f64 / panels as f64;
            let hi = a + (b - a) * (p + 1) as f64 / panels as f64;
            let (x, w) = gauss_legendre_on(30, lo, hi);
            for (xi, wi) in x.iter().zip(&w) {
                s += f(*xi) * C64::from_polar(1.0, -xi * t) * *wi;
            }
        }
        s
    }

    #[test]
    fn constant_is_exact() {
        let v = integrate(|_| C64::new(1.0, 0.0), 5.0, 25.0, 101, 0.0);
        assert!((v - 20.0).norm() < 1e-12, "{v}");
        for &t in &[3.0, 70.0, 1.0e4] {
            let exact = (C64::from_polar(1.0, -25.0 * t) - C64::from_polar(1.0, -5.0 * t)) / C64::new(0.0, -t);
            let v = integrate(|_| C64::new(1.0, 0.0), 5.0, 25.0, 101, t);
            assert!((v - exact).norm() < 1e-12, "t={t}: {v} vs {exact}");
        }
    }

    #[test]
    fn cosine_against_closed_form() {
        let t = 7.0;
        let prim = |w: f64| {
            let e1 = C64::from_polar(1.0, (3.0 - t) * w) / C64::new(0.0, 3.0 - t);
            let e2 = C64::from_polar(1.0, (-3.0 - t) * w) / C64::new(0.0, -3.0 - t);
            0.5 * (e1 + e2)
        };
        let exact = prim(25.0) - prim(5.0);
        let v = integrate(|w| C64::new((3.0 * w).cos(), 0.0), 5.0, 25.0, 201, t);
        assert!((v - exact).norm() < 1e-9, "{:e}", (v - exact).norm());
    }

    #[test]
    fn rational_against_quadrature() {
        let f = |w: f64| C64::new(1.0 / (1.0 + w * w), 0.0);
        let v = integrate(f, 5.0, 25.0, 201, 50.0);
        let r = reference(f, 5.0, 25.0, 50.0);
        assert!((v - r).norm() < 1e-8, "{:e}", (v - r).norm());
    }

    #[test]
    fn accuracy_is_uniform_in_time() {
        // the same samples serve every t
        let f = |w: f64| C64::from_polar((-(w - 10.0) * (w - 10.0) / 8.0).exp(), 6.0 * w);
        let mut errs = vec![];
        for &t in &[10.0, 1000.0] {
            let r = reference(f, 1.0, 20.0, t);
            errs.push((integrate(f, 1.0, 20.0, 401, t) - r).norm());
        }
        assert!(errs[0] < 1e-10 && errs[1] < 10.0 * errs[0].max(1e-13), "{errs:?}");
    }

    #[test]
    fn too_few_samples() {
        assert!(FilonRule::standard().weights(10, 0.0, 0.1, 1.0).is_err());
        assert!(FilonRule::new(3).is_err());
    }
}
