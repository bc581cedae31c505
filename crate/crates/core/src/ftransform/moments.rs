//! Oscillatory Chebyshev moments I_m(σ) = ∫_{-1}^{1} T_m(x) e^{iσx} dx.

use crate::quad::gauss_legendre;
use num_complex::Complex64 as C64;

/// Moments I_0..=I_n. Forward recursion is stable only while m stays below
/// |σ|, so for |σ| ≤ 2n (and always for small σ) the moments come from a
/// Gauss–Legendre rule resolving both T_n and the oscillation instead.
pub fn cheb_moments(n: usize, sigma: f64) -> Vec<C64> {
    if sigma.abs() <= (2 * n).max(4) as f64 {
        by_quadrature(n, sigma)
    } else {
        by_recursion(n, sigma)
    }
}

fn by_quadrature(n: usize, sigma: f64) -> Vec<C64> {
    let pts = n + sigma.abs().ceil() as usize + 12;
    let (x, w) = gauss_legendre(pts);
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    for (&xi, &wi) in x.iter().zip(&w) {
        let e = C64::from_polar(wi, sigma * xi);
        let (mut t0, mut t1) = (1.0, xi);
        out[0] += e;
        if n >= 1 {
            out[1] += e * t1;
        }
        for o in out.iter_mut().skip(2) {
            let t2 = 2.0 * xi * t1 - t0;
            *o += e * t2;
            t0 = t1;
            t1 = t2;
        }
    }
    out
}

fn by_recursion(n: usize, sigma: f64) -> Vec<C64> {
    let (s, c) = sigma.sin_cos();
    let ep = C64::new(c, s);
    let em = C64::new(c, -s);
    // B_k = T_k e^{iσx} evaluated between the endpoints
    let b = |k: usize| if k % 2 == 0 { ep - em } else { ep + em };
    let is = C64::new(0.0, sigma);
    let mut out = Vec::with_capacity(n + 1);
    out.push(C64::new(2.0 * s / sigma, 0.0));
    if n >= 1 {
        out.push(C64::new(0.0, 2.0 * (s - sigma * c) / (sigma * sigma)));
    }
    if n >= 2 {
        out.push((b(2) - 4.0 * out[1]) / is);
    }
    for m in 2..n {
        let mf = m as f64;
        let next = (mf + 1.0) / is * (b(m + 1) / (mf + 1.0) - b(m - 1) / (mf - 1.0) - 2.0 * out[m])
            + (mf + 1.0) / (mf - 1.0) * out[m - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_near_the_switch() {
        for &(n, s) in &[(8usize, 17.0f64), (16, 33.0), (24, 50.0), (16, -40.0)] {
            let a = by_quadrature(n, s);
            let b = by_recursion(n, s);
            for m in 0..=n {
                assert!((a[m] - b[m]).norm() < 1e-12, "n={n} s={s} m={m}: {} {}", a[m], b[m]);
            }
        }
    }

    #[test]
    fn zero_frequency_values() {
        let v = cheb_moments(6, 0.0);
        // ∫T_m = 2/(1-m²) for even m, 0 for odd m
        let exact = [2.0, 0.0, -2.0 / 3.0, 0.0, -2.0 / 15.0, 0.0, -2.0 / 35.0];
        for m in 0..=6 {
            assert!((v[m] - exact[m]).norm() < 1e-15);
        }
    }

    #[test]
    fn large_sigma_decays() {
        let v = cheb_moments(16, 1.0e4);
        assert!(v.iter().all(|z| z.norm() < 1e-3));
    }
}
