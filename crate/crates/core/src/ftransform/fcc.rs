//! Filon–Clenshaw–Curtis quadrature for ∫_0^{w_c} G(ω) e^{−iωt} dω on a
//! graded mesh μ_j = w_c (j/P)^p, for G with a logarithmic singularity at 0.

use super::moments::cheb_moments;
use crate::error::{Error, Result};
use crate::quad::{cheb1_nodes, gauss_legendre, Barycentric};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Grading parameters of the low band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowBand {
    /// Number of graded subintervals P.
    pub count: usize,
    /// Grading exponent p.
    pub exponent: f64,
    /// Clenshaw–Curtis order per subinterval.
    pub order: usize,
    /// Power r of the substitution ω = μ_1 u^r on (0, μ_1).
    pub inner_power: u32,
}

impl Default for LowBand {
    fn default() -> Self {
        LowBand {
            count: 8,
            exponent: 3.0,
            order: 16,
            inner_power: 8,
        }
    }
}

/// Graded FCC rule on (0, w_c]. Nodes are ascending and end with w_c.
#[derive(Debug, Clone)]
pub struct GradedFcc {
    pub w_c: f64,
    pub params: LowBand,
    nodes: Vec<f64>,
    /// Interpolation at first-kind Chebyshev points in u ∈ (0, 1) (as x = 2u − 1)
    /// for the innermost piece, and dω/du at those points.
    inner: Barycentric,
    inner_jac: Vec<f64>,
    /// Start index of each graded subinterval's CC points in `nodes`.
    starts: Vec<usize>,
    breaks: Vec<f64>,
}

impl GradedFcc {
    pub fn new(w_c: f64, params: LowBand) -> Result<Self> {
        if !(w_c > 0.0) || !w_c.is_finite() {
            return Err(Error::config("frequency.w_c", format!("cutoff must be positive, got {w_c}")));
        }
        if params.count < 2 || params.order < 2 || !(params.exponent >= 1.0) || params.inner_power == 0 {
            return Err(Error::config("frequency.low_band", format!("invalid grading {params:?}")));
        }
        let p = params.count;
        let breaks: Vec<f64> = (0..=p).map(|j| w_c * (j as f64 / p as f64).powf(params.exponent)).collect();
        let n = params.order;
        let mu1 = breaks[1];
        let inner = Barycentric::cheb1(n);
        let r = params.inner_power as i32;
        let us: Vec<f64> = cheb1_nodes(n).iter().map(|x| 0.5 * (1.0 + x)).collect();
        let mut nodes: Vec<f64> = us.iter().map(|u| mu1 * u.powi(r)).collect();
        let inner_jac = us.iter().map(|u| mu1 * r as f64 * u.powi(r - 1)).collect();
        let mut starts = vec![];
        for j in 1..p {
            let (lo, hi) = (breaks[j], breaks[j + 1]);
            starts.push(nodes.len());
            // CC points ascending; the left endpoint is shared with the previous piece
            let first = if j == 1 { 0 } else { 1 };
            for k in first..=n {
                let x = -(PI * k as f64 / n as f64).cos();
                nodes.push(0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
            }
            if j > 1 {
                *starts.last_mut().unwrap() -= 1;
            }
        }
        *nodes.last_mut().unwrap() = w_c;
        Ok(GradedFcc {
            w_c,
            params,
            nodes,
            inner,
            inner_jac,
            starts,
            breaks,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Adds `scale` times the weights of ∫_0^{w_c} G e^{−iωt} dω into `w`
    /// (indexed like `nodes()`).
    pub fn accumulate(&self, t: f64, scale: C64, w: &mut [C64]) {
        debug_assert_eq!(w.len(), self.nodes.len());
        let n = self.params.order;
        // innermost piece: ω = μ1 u^r; the product G(ω(u)) ω'(u) vanishes to
        // order r − 1 at u = 0 and is interpolated in u
        let mu1 = self.breaks[1];
        let r = self.params.inner_power as i32;
        let pts = n + (mu1 * t.abs()).ceil() as usize + 16;
        let (x, gw) = gauss_legendre(pts);
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut basis = vec![0.0; n];
        for (xi, wi) in x.iter().zip(&gw) {
            let om = mu1 * (0.5 * (1.0 + xi)).powi(r);
            self.inner.basis(*xi, &mut basis);
            let e = C64::from_polar(0.5 * wi, -om * t);
            for (a, b) in acc.iter_mut().zip(&basis) {
                *a += e * *b;
            }
        }
        for (k, a) in acc.iter().enumerate() {
            w[k] += scale * a * self.inner_jac[k];
        }
        // graded pieces: Clenshaw–Curtis interpolant times exact moments
        for (piece, &start) in self.starts.iter().enumerate() {
            let (lo, hi) = (self.breaks[piece + 1], self.breaks[piece + 2]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mom = cheb_moments(n, -half * t);
            let pre = scale * C64::from_polar(half, -mid * t);
            for k in 0..=n {
                // point x_k = -cos(πk/n); c_m = (2/n) Σ'' f_k T_m(x_k)
                let ck = if k == 0 || k == n { 0.5 } else { 1.0 };
                let mut s = C64::new(0.0, 0.0);
                for (m, mm) in mom.iter().enumerate() {
                    let cm = if m == 0 || m == n { 0.5 } else { 1.0 };
                    let tm = (PI * (m * (n - k)) as f64 / n as f64).cos();
                    s += mm * (cm * ck * 2.0 / n as f64 * tm);
                }
                w[start + k] += pre * s;
            }
        }
    }
}
