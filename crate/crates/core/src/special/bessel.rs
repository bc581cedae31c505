//! Bessel functions of the first and second kind, orders 0 and 1.
//!
//! On [0, 25] the functions are read from piecewise Chebyshev tables of J0, J1
//! and the entire remainders R0, R1 in
//!   Y0 = (2/pi) ln(x/2) J0 + R0,   Y1 = (2/pi) ln(x/2) J1 - 2/(pi x) + R1.
//! Table samples come from the power series in double-double arithmetic.
//! Beyond 25 the Hankel asymptotic expansions are used.

use super::dd::Dd;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::OnceLock;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EULER_GAMMA_LO: f64 = -4.942_915_152_430_645e-18;

/// Upper end of the tabulated range.
pub const TABLE_MAX: f64 = 25.0;
const H: f64 = 0.5;
const NI: usize = 50;
const DEG: usize = 18;

struct Tables {
    // per interval: [j0, r0, j1, r1] coefficient blocks of length DEG
    coef: Vec<[[f64; DEG]; 4]>,
}

fn series(x: f64) -> [f64; 4] {
    let half = Dd::new(x * 0.5);
    let z = half.mul(half);
    let gamma = Dd {
        hi: EULER_GAMMA,
        lo: EULER_GAMMA_LO,
    };
    // J0 and the harmonic sum for R0
    let mut t = Dd::new(1.0);
    let mut j0 = t;
    let mut s0 = Dd::default();
    let mut hm = Dd::default();
    // J1/(x/2) terms and harmonic sums for R1
    let mut u = Dd::new(1.0);
    let mut j1 = u;
    let mut s1 = u; // H_0 + H_1 = 1
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        t = t.mul(z).div_f(mf * mf).neg();
        hm = hm.add(Dd::new(1.0).div_f(mf));
        j0 = j0.add(t);
        s0 = s0.add(t.mul(hm).neg());
        u = u.mul(z).div_f(mf * (mf + 1.0)).neg();
        let hm1 = hm.add(Dd::new(1.0).div_f(mf + 1.0));
        j1 = j1.add(u);
        s1 = s1.add(u.mul(hm.add(hm1)));
        if m > 8 && t.hi.abs() < 1e-36 && u.hi.abs() < 1e-36 {
            break;
        }
        m += 1;
    }
    let r0 = gamma.mul(j0).add(s0).to_f64() * FRAC_2_PI;
    let j1v = j1.mul(half);
    let r1 = -(s1.mul(half).add(gamma.mul(j1v).mul_f(-2.0)).to_f64()) / PI;
    [j0.to_f64(), r0, j1v.to_f64(), r1]
}

fn build() -> Tables {
    let nodes: Vec<f64> = (0..DEG)
        .map(|l| (PI * (2 * l + 1) as f64 / (2 * DEG) as f64).cos())
        .collect();
    let coef = (0..NI)
        .map(|k| {
            let a = k as f64 * H;
            let vals: Vec<[f64; 4]> = nodes.iter().map(|&s| series(a + 0.5 * H * (s + 1.0))).collect();
            let mut block = [[0.0; DEG]; 4];
            for (f, row) in block.iter_mut().enumerate() {
                for (j, c) in row.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for l in 0..DEG {
                        acc += vals[l][f] * (PI * ((j * (2 * l + 1)) % (4 * DEG)) as f64 / (2 * DEG) as f64).cos();
                    }
                    *c = acc * if j == 0 { 1.0 } else { 2.0 } / DEG as f64;
                }
            }
            block
        })
        .collect();
    Tables { coef }
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(build)
}

#[inline]
fn clenshaw(c: &[f64; DEG], s: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let s2 = 2.0 * s;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + s2 * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + s * b1 - b2
}

#[inline]
fn locate(x: f64) -> (usize, f64) {
    let k = ((x / H) as usize).min(NI - 1);
    let s = 2.0 * (x - k as f64 * H) / H - 1.0;
    (k, s)
}

/// Asymptotic P, Q for order `nu` (0 or 1).
fn hankel_pq(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kk = (2 * k - 1) as f64;
        term *= (mu - kk * kk) / (k as f64 * 8.0 * x);
        if term.abs() >= prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

/// (J_nu, Y_nu) from the asymptotic expansion, x >= TABLE_MAX.
fn asymptotic(nu: u32, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, x);
    let (s, c) = x.sin_cos();
    // chi = x - pi/4 (nu = 0) or x - 3 pi/4 (nu = 1)
    let (cs, sn) = if nu == 0 {
        ((c + s) * std::f64::consts::FRAC_1_SQRT_2, (s - c) * std::f64::consts::FRAC_1_SQRT_2)
    } else {
        ((s - c) * std::f64::consts::FRAC_1_SQRT_2, -(c + s) * std::f64::consts::FRAC_1_SQRT_2)
    };
    let a = (FRAC_2_PI / x).sqrt();
    (a * (p * cs - q * sn), a * (p * sn + q * cs))
}

/// J0, J1 together with the log-free remainders R0, R1 (x in [0, TABLE_MAX]).
#[inline]
pub fn table_values(x: f64) -> [f64; 4] {
    let (k, s) = locate(x);
    let b = &tables().coef[k];
    [clenshaw(&b[0], s), clenshaw(&b[1], s), clenshaw(&b[2], s), clenshaw(&b[3], s)]
}

/// (J0(x), Y0(x), J1(x), Y1(x)) for x > 0.
#[inline]
pub fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x < TABLE_MAX {
        let [j0, r0, j1, r1] = table_values(x);
        let l = FRAC_2_PI * (0.5 * x).ln();
        (j0, l * j0 + r0, j1, l * j1 - FRAC_2_PI / x + r1)
    } else {
        let (j0, y0) = asymptotic(0, x);
        let (j1, y1) = asymptotic(1, x);
        (j0, y0, j1, y1)
    }
}

/// J0(x), valid for all x >= 0.
#[inline]
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < TABLE_MAX {
        let (k, s) = locate(x);
        clenshaw(&tables().coef[k][0], s)
    } else {
        asymptotic(0, x).0
    }
}

/// J1(x), odd in x.
#[inline]
pub fn j1(x: f64) -> f64 {
    let a = x.abs();
    let v = if a < TABLE_MAX {
        let (k, s) = locate(a);
        clenshaw(&tables().coef[k][2], s)
    } else {
        asymptotic(1, a).0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// (H0^(1)(x), H1^(1)(x)) for x > 0.
#[inline]
pub fn hankel01(x: f64) -> (C64, C64) {
    let (j0, y0, j1, y1) = jy01(x);
    (C64::new(j0, y0), C64::new(j1, y1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J,
    Y,
}

/// Checked real Bessel function J_n or Y_n, n in {0, 1}.
pub fn bessel(kind: BesselKind, order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::Domain(format!("Bessel order {order} not in {{0, 1}}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite Bessel argument {x}")));
    }
    match kind {
        BesselKind::J => Ok(if order == 0 { j0(x) } else { j1(x) }),
        BesselKind::Y => {
            if x <= 0.0 {
                return Err(Error::Domain(format!("Y_{order} requires x > 0, got {x}")));
            }
            let (_, y0, _, y1) = jy01(x);
            Ok(if order == 0 { y0 } else { y1 })
        }
    }
}

/// Checked Hankel function H_n^(1)(x), n in {0, 1}, x > 0.
pub fn hankel1(order: u32, x: f64) -> Result<C64> {
    let j = bessel(BesselKind::J, order, x)?;
    let y = bessel(BesselKind::Y, order, x)?;
    Ok(C64::new(j, y))
}

/// Y_n(x) for integer n >= 0 by upward recurrence (stable for Y).
pub fn bessel_yn(n: u32, x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("Y_{n} requires x > 0, got {x}")));
    }
    let (_, y0, _, y1) = jy01(x);
    if n == 0 {
        return Ok(y0);
    }
    let (mut a, mut b) = (y0, y1);
    for k in 1..n {
        let c = 2.0 * k as f64 / x * b - a;
        a = b;
        b = c;
    }
    Ok(b)
}

/// J_n(x) for integer n >= 0 by Miller's downward recurrence normalized with
/// J0 + 2 sum J_2k = 1.
pub fn bessel_jn(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite Bessel argument {x}")));
    }
    let ax = x.abs();
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if n == 0 {
        return Ok(j0(ax));
    }
    if ax == 0.0 {
        return Ok(0.0);
    }
    if ax > n as f64 {
        // upward recurrence is stable here
        let (mut a, mut b) = (j0(ax), j1(ax));
        for k in 1..n {
            let c = 2.0 * k as f64 / ax * b - a;
            a = b;
            b = c;
        }
        return Ok(sign * b);
    }
    let start = 2 * ((n as f64).max(ax) as usize + 30 + (ax.sqrt() * 10.0) as usize) / 2;
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut want = 0.0;
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / ax * j - jp;
        jp = j;
        j = jm;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
        if (k - 1) as u32 == n {
            want = j;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    Ok(sign * want / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath values: (x, J0, J1, Y0, Y1)
    const REF: [(f64, f64, f64, f64, f64); 11] = [
        (0.001, 0.9999997500000156, 0.0004999999375000026, -4.471416611375923, -636.6221672311394),
        (0.1, 0.99750156206604, 0.049937526036242, -1.5342386513503667, -6.4589510947020266),
        (1.0, 0.7651976865579666, 0.4400505857449335, 0.08825696421567696, -0.7812128213002887),
        (2.404825557695773, -1.201195007367686e-16, 0.5191474972894667, 0.509924383448479, 0.10274668243825964),
        (5.0, -0.1775967713143383, -0.32757913759146523, -0.30851762524903376, 0.14786314339122683),
        (10.0, -0.24593576445134835, 0.04347274616886144, 0.055671167283599395, 0.24901542420695388),
        (24.9, 0.08324596835301568, -0.13485569953140875, -0.1364991839967651, -0.08600255759555445),
        (25.1, 0.1082756714999493, -0.11463478413442273, -0.11676770763803711, -0.11062223322783082),
        (30.0, -0.08636798358104021, -0.11875106261662294, -0.11729573168666403, 0.08442557066174723),
        (100.0, 0.019985850304223122, -0.07714535201411216, -0.07724431336508315, -0.020372312002759792),
        (1000.0, 0.024786686152420176, 0.004728311907089524, 0.0047159179776228135, -0.024784331292351778),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, rj0, rj1, ry0, ry1) in REF.iter() {
            let (a, b, c, d) = jy01(x);
            let tol = 1e-14 * (1.0 + ry1.abs());
            assert!((a - rj0).abs() < 1e-15, "J0({x}) {a} vs {rj0}");
            assert!((c - rj1).abs() < 1e-15, "J1({x}) {c} vs {rj1}");
            assert!((b - ry0).abs() < 2e-15 * (1.0 + ry0.abs()), "Y0({x}) {b} vs {ry0}");
            assert!((d - ry1).abs() < tol, "Y1({x}) {d} vs {ry1}");
        }
    }

    #[test]
    fn y_rejects_nonpositive() {
        assert!(bessel(BesselKind::Y, 0, 0.0).is_err());
        assert!(bessel(BesselKind::Y, 1, -1.0).is_err());
        assert!(bessel(BesselKind::J, 2, 1.0).is_err());
        assert!((bessel(BesselKind::J, 0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    // mpmath values (n, x, J_n, Y_n)
    const JN: [(u32, f64, f64, f64); 6] = [
        (8, 1.0, 9.4223441726045e-08, -425674.6184865067),
        (5, 2.0, 0.007039629755871685, -9.935989128481975),
        (8, 2.0, 2.2179552287925905e-05, -1853.9221751598764),
        (3, 5.0, 0.364831230613667, 0.14626716269319276),
        (7, 5.0, 0.053376410155890716, -1.2628988357693234),
        (8, 5.0, 0.018405216654802, -2.8208693825455953),
    ];

    #[test]
    fn integer_orders() {
        for &(n, x, j, y) in JN.iter() {
            let jv = bessel_jn(n, x).unwrap();
            let yv = bessel_yn(n, x).unwrap();
            assert!((jv - j).abs() < 1e-14 * j.abs().max(1e-3), "J{n}({x}) {jv} vs {j}");
            assert!((yv - y).abs() < 1e-13 * y.abs(), "Y{n}({x}) {yv} vs {y}");
        }
    }

    fn log_grid() -> Vec<f64> {
        (0..=600).map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 600.0)).collect()
    }

    #[test]
    fn wronskian_identity() {
        for x in log_grid() {
            let (j0, y0, j1, y1) = jy01(x);
            let w = j1 * y0 - j0 * y1;
            let e = 2.0 / (PI * x);
            assert!(((w - e) / e).abs() < 1e-12, "x={x}: {w} vs {e}");
        }
    }

    #[test]
    fn derivative_relations() {
        // eighth-order central differences
        let c = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let d = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            let mut s = 0.0;
            for (k, ck) in c.iter().enumerate() {
                let kh = (k + 1) as f64 * h;
                s += ck * (f(x + kh) - f(x - kh));
            }
            s / h
        };
        for x in log_grid().into_iter().filter(|&x| x > 0.05) {
            let h = (0.01 * x).min(0.02);
            let fj1 = |t: f64| jy01(t).2;
            let fy1 = |t: f64| jy01(t).3;
            let (j0, y0, j1, y1) = jy01(x);
            let dj = d(&fj1, x, h);
            let dy = d(&fy1, x, h);
            let sj = 1.0 + (j0 - j1 / x).abs() + j1.abs() / x;
            let sy = 1.0 + (y0 - y1 / x).abs() + y1.abs() / x;
            assert!((dj - (j0 - j1 / x)).abs() < 1e-12 * sj * (1.0 + 1.0 / x), "J1' at {x}");
            assert!((dy - (y0 - y1 / x)).abs() < 1e-12 * sy * (1.0 + 1.0 / x), "Y1' at {x}");
        }
    }
}
