//! Dense complex matrices, LU factorization and restarted GMRES.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.cols);
        for (i, yi) in y.iter_mut().enumerate().take(self.rows) {
            let r = self.row(i);
            let mut s = C64::new(0.0, 0.0);
            for (a, b) in r.iter().zip(x) {
                s += a * b;
            }
            *yi = s;
        }
    }

    /// self · other.
    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut c = CMatrix::zeros(self.rows, other.cols);
        gemm(self.rows, self.cols, other.cols, &self.data, &other.data, &mut c.data, false);
        Ok(c)
    }
}

/// C (m×n) = A (m×k) · B (k×n), or C += A·B when `accumulate`; row-major.
pub fn gemm(m: usize, k: usize, n: usize, a: &[C64], b: &[C64], c: &mut [C64], accumulate: bool) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        if !accumulate {
            c[..m * n].iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        }
        return;
    }
    let beta = if accumulate { [1.0, 0.0] } else { [0.0, 0.0] };
    // SAFETY: slices are bounds-checked above; Complex<f64> is repr(C) with
    // the same layout as [f64; 2].
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            k as isize,
            1,
            b.as_ptr() as *const [f64; 2],
            n as isize,
            1,
            beta,
            c.as_mut_ptr() as *mut [f64; 2],
            n as isize,
            1,
        );
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    piv: Vec<usize>,
}

impl Lu {
    pub fn factor(a: CMatrix) -> Result<Lu> {
        if a.rows != a.cols {
            return Err(Error::Shape(format!("LU of non-square {}x{}", a.rows, a.cols)));
        }
        let n = a.rows;
        let mut lu = a.data;
        let mut piv: Vec<usize> = (0..n).collect();
        let scale = lu.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 1e-300 * scale.max(1e-300)) || !best.is_finite() {
                return Err(Error::Singular(format!("zero pivot at column {k}")));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let inv = 1.0 / lu[k * n + k];
            let (top, bottom) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &top[k * n + k + 1..k * n + n];
            for i in 0..n - k - 1 {
                let row = &mut bottom[i * n..i * n + n];
                let l = row[k] * inv;
                row[k] = l;
                if l.re != 0.0 || l.im != 0.0 {
                    for (r, pr) in row[k + 1..].iter_mut().zip(pivot_row) {
                        *r -= l * pr;
                    }
                }
            }
        }
        Ok(Lu { n, lu, piv })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves A x = b in place.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let mut s = x[i];
            for (a, xj) in row.iter().zip(&x[..i]) {
                s -= a * xj;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..i * n + n];
            let mut s = x[i];
            for (a, xj) in row.iter().zip(&x[i + 1..]) {
                s -= a * xj;
            }
            x[i] = s / self.lu[i * n + i];
        }
        b.copy_from_slice(&x);
    }

    /// A⁻¹ as a dense matrix.
    pub fn inverse(&self) -> CMatrix {
        let n = self.n;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            e.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            e[i] = C64::new(1.0, 0.0);
            self.solve_in_place(&mut e);
            for (r, v) in e.iter().enumerate() {
                inv.data[r * n + i] = *v;
            }
        }
        inv
    }
}

/// Restarted GMRES settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        GmresConfig {
            tol: 1e-10,
            restart: 200,
            max_iter: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresResult {
    pub x: Vec<C64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// GMRES(m) with modified Gram–Schmidt and Givens rotations, zero initial
/// guess. Convergence is ‖b − Ax‖ ≤ tol ‖b‖. `iterations` counts Arnoldi
/// steps over all restarts.
pub fn gmres<F: FnMut(&[C64], &mut [C64])>(mut apply: F, b: &[C64], cfg: GmresConfig) -> Result<GmresResult> {
    let n = b.len();
    let bnorm = norm(b);
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    if bnorm == 0.0 {
        return Ok(GmresResult {
            x,
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let m = cfg.restart.max(1).min(n.max(1));
    let mut total = 0usize;
    let mut r = b.to_vec();
    let mut w = vec![zero; n];
    let mut rel = 1.0;
    while total < cfg.max_iter {
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= cfg.tol {
            break;
        }
        let mut v: Vec<Vec<C64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h = vec![vec![zero; m]; m + 1];
        let mut cs = vec![zero; m];
        let mut sn = vec![zero; m];
        let mut g = vec![zero; m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k = 0;
        while k < m && total < cfg.max_iter {
            apply(&v[k], &mut w);
            for (i, vi) in v.iter().enumerate() {
                let hij: C64 = vi.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                h[i][k] = hij;
                for (wj, vj) in w.iter_mut().zip(vi) {
                    *wj -= hij * vj;
                }
            }
            let hn = norm(&w);
            h[k + 1][k] = C64::new(hn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[i][k] + sn[i].conj() * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let (a, bb) = (h[k][k], h[k + 1][k]);
            let d = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if d == 0.0 {
                cs[k] = C64::new(1.0, 0.0);
                sn[k] = zero;
            } else {
                cs[k] = a / d;
                sn[k] = bb / d;
            }
            h[k][k] = cs[k].conj() * a + sn[k].conj() * bb;
            h[k + 1][k] = zero;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k].conj() * g[k];
            total += 1;
            k += 1;
            rel = g[k].norm() / bnorm;
            if rel <= cfg.tol || hn == 0.0 {
                break;
            }
            v.push(w.iter().map(|z| z / hn).collect());
        }
        // back substitution for the k×k triangular system
        let mut y = vec![zero; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&v[j]) {
                *xi += yj * vi;
            }
        }
        apply(&x, &mut w);
        for i in 0..n {
            r[i] = b[i] - w[i];
        }
        rel = norm(&r) / bnorm;
        if rel <= cfg.tol {
            break;
        }
    }
    if rel <= cfg.tol {
        Ok(GmresResult {
            x,
            iterations: total,
            residual: rel,
            converged: true,
        })
    } else {
        Err(Error::NotConverged {
            iterations: total,
            residual: rel,
            best: x,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn test_matrix(n: usize, seed: u64) -> CMatrix {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 2.0 } else { 0.0 };
                a.set(i, j, C64::new(d + rnd() / n as f64 * 4.0, rnd() / n as f64 * 4.0));
            }
        }
        a
    }

    #[test]
    fn lu_and_gmres_agree() {
        let n = 60;
        let a = test_matrix(n, 7);
        let b: Vec<C64> = (0..n).map(|i| C64::new((i as f64).sin(), 1.0 / (1.0 + i as f64))).collect();
        let mut xd = b.clone();
        Lu::factor(a.clone()).unwrap().solve_in_place(&mut xd);
        let res = gmres(
            |v, w| a.matvec(v, w),
            &b,
            GmresConfig {
                tol: 1e-12,
                restart: 20,
                max_iter: 500,
            },
        )
        .unwrap();
        assert!(res.converged);
        let err: f64 = xd.iter().zip(&res.x).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn gmres_nonconvergence_reports_best() {
        let n = 30;
        // a shift-like matrix is hard for GMRES with a tiny Krylov space
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, (i + 1) % n, C64::new(1.0, 0.0));
        }
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = C64::new(1.0, 0.0);
        let e = gmres(
            |v, w| a.matvec(v, w),
            &b,
            GmresConfig {
                tol: 1e-12,
                restart: 3,
                max_iter: 9,
            },
        );
        match e {
            Err(Error::NotConverged { iterations, best, .. }) => {
                assert_eq!(iterations, 9);
                assert_eq!(best.len(), n);
            }
            _ => panic!("expected non-convergence"),
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = test_matrix(17, 11);
        let inv = Lu::factor(a.clone()).unwrap().inverse();
        let p = a.matmul(&inv).unwrap();
        for i in 0..17 {
            for j in 0..17 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p.get(i, j) - e).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn gemm_matches_naive() {
        let a = test_matrix(7, 3);
        let mut b = CMatrix::zeros(7, 5);
        for (k, v) in b.data.iter_mut().enumerate() {
            *v = C64::new(k as f64, -(k as f64) * 0.5);
        }
        let c = a.matmul(&b).unwrap();
        for i in 0..7 {
            for j in 0..5 {
                let s: C64 = (0..7).map(|k| a.get(i, k) * b.get(k, j)).sum();
                assert!((s - c.get(i, j)).norm() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn lu_residual_small(seed in 0u64..1000, n in 1usize..40) {
            let a = test_matrix(n, seed);
            let b: Vec<C64> = (0..n).map(|i| C64::new(1.0, i as f64)).collect();
            let mut x = b.clone();
            Lu::factor(a.clone()).unwrap().solve_in_place(&mut x);
            let mut r = vec![C64::new(0.0, 0.0); n];
            a.matvec(&x, &mut r);
            let e = r.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            prop_assert!(e < 1e-11 * (1.0 + n as f64));
        }
    }
}
