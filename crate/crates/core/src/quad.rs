//! Quadrature rules and Chebyshev tools shared by the discretizations.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    (
        x.iter().map(|t| m + h * t).collect(),
        w.iter().map(|t| h * t).collect(),
    )
}

/// Chebyshev points of the first kind, ascending: -cos(pi (2l+1) / 2p).
pub fn cheb1_nodes(p: usize) -> Vec<f64> {
    (0..p)
        .map(|l| -(PI * (2 * l + 1) as f64 / (2 * p) as f64).cos())
        .collect()
}

/// Fejér's first rule on the first-kind points (ascending order).
pub fn fejer1_weights(p: usize) -> Vec<f64> {
    (0..p)
        .map(|l| {
            // ascending node l corresponds to angle index p-1-l
            let th = PI * (2 * (p - 1 - l) + 1) as f64 / (2 * p) as f64;
            let mut s = 0.0;
            for k in 1..=p / 2 {
                s += (2.0 * k as f64 * th).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
            2.0 / p as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

/// Chebyshev coefficients of the interpolant through first-kind point values
/// (values given at ascending nodes as produced by [`cheb1_nodes`]).
pub fn cheb1_coefficients<T>(values: &[T]) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
{
    let p = values.len();
    let mut c = vec![T::default(); p];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = T::default();
        for (l, &v) in values.iter().enumerate() {
            let m = (k * (2 * (p - 1 - l) + 1)) % (4 * p);
            s = s + v * (PI * m as f64 / (2 * p) as f64).cos();
        }
        let f = if k == 0 { 1.0 } else { 2.0 } / p as f64;
        *ck = s * f;
    }
    c
}

/// Barycentric interpolation on an arbitrary node set.
#[derive(Debug, Clone)]
pub struct Barycentric {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Barycentric {
    pub fn cheb1(p: usize) -> Self {
        let nodes = cheb1_nodes(p);
        let weights = (0..p)
            .map(|l| {
                let th = PI * (2 * (p - 1 - l) + 1) as f64 / (2 * p) as f64;
                let sign = if (p - 1 - l) % 2 == 0 { 1.0 } else { -1.0 };
                sign * th.sin()
            })
            .collect();
        Barycentric { nodes, weights }
    }

    /// Fills `out` with the Lagrange basis values at `x`.
    pub fn basis(&self, x: f64, out: &mut [f64]) {
        let n = self.nodes.len();
        debug_assert_eq!(out.len(), n);
        let mut sum = 0.0;
        for l in 0..n {
            let d = x - self.nodes[l];
            if d == 0.0 {
                out.iter_mut().for_each(|v| *v = 0.0);
                out[l] = 1.0;
                return;
            }
            out[l] = self.weights[l] / d;
            sum += out[l];
        }
        out.iter_mut().for_each(|v| *v /= sum);
    }

    pub fn basis_vec(&self, x: f64) -> Vec<f64> {
        let mut b = vec![0.0; self.nodes.len()];
        self.basis(x, &mut b);
        b
    }
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600017450555,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

fn gk21<F: FnMut(f64, &mut [f64])>(
    f: &mut F,
    a: f64,
    b: f64,
    dim: usize,
    buf: &mut [f64],
    k: &mut [f64],
    g: &mut [f64],
) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    k.iter_mut().for_each(|v| *v = 0.0);
    g.iter_mut().for_each(|v| *v = 0.0);
    for j in 0..11 {
        let xs: &[f64] = if j == 10 { &[0.0] } else { &[-1.0, 1.0] };
        for &sgn in xs {
            f(c + sgn * h * XGK[j], buf);
            for d in 0..dim {
                k[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    g[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
    }
}

/// Adaptive vector-valued Gauss–Kronrod (10/21) integration on [a, b].
///
/// The interval is bisected until the componentwise Kronrod/Gauss gap is below
/// `tol * (width / (b - a))`.
pub fn adaptive_gk<F: FnMut(f64, &mut [f64])>(mut f: F, a: f64, b: f64, dim: usize, tol: f64) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        gk21(&mut f, lo, hi, dim, &mut buf, &mut k, &mut g);
        let err = k.iter().zip(&g).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if err <= tol * (hi - lo).abs() / total || depth >= 48 {
            for d in 0..dim {
                out[d] += k[d];
            }
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    out
}

/// Scalar convenience wrapper around [`adaptive_gk`].
pub fn adaptive_gk_scalar<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_gk(|x, o| o[0] = f(x), a, b, 1, tol)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 41, 120] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}: {s} vs {exact}");
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn fejer_matches_exp_integral() {
        let p = 24;
        let x = cheb1_nodes(p);
        let w = fejer1_weights(p);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert!((s - (1f64.exp() - (-1f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn cheb_coefficients_recover_t3() {
        let p = 8;
        let x = cheb1_nodes(p);
        let v: Vec<f64> = x.iter().map(|&t| 4.0 * t * t * t - 3.0 * t).collect();
        let c = cheb1_coefficients(&v);
        for (k, ck) in c.iter().enumerate() {
            let e = if k == 3 { 1.0 } else { 0.0 };
            assert!((ck - e).abs() < 1e-14);
        }
    }

    #[test]
    fn barycentric_reproduces_polynomial() {
        let b = Barycentric::cheb1(12);
        let f = |t: f64| 1.0 + t - 3.0 * t.powi(7);
        let vals: Vec<f64> = b.nodes.iter().map(|&t| f(t)).collect();
        for x in [-0.99, -0.3, 0.0, 0.71, 1.0] {
            let l = b.basis_vec(x);
            let y: f64 = l.iter().zip(&vals).map(|(a, b)| a * b).sum();
            assert!((y - f(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_log_singularity() {
        let v = adaptive_gk_scalar(|x| x.abs().ln(), 0.0, 1.0, 1e-14);
        assert!((v + 1.0).abs() < 1e-13, "{v}");
    }
}
