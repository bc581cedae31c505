//! The 2D Helmholtz kernel Φ_ω(x, y) = (i/4) H0^(1)(κ|x − y|), its normal
//! derivative, and their logarithmic splits.

use super::bessel::{jy01, table_values, EULER_GAMMA, TABLE_MAX};
use crate::error::{Error, Result};
use crate::geometry::{ParametricCurve, Point};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_2_PI, PI};

pub const INV_2PI: f64 = 0.5 / PI;

/// Φ = -(1/2π) J0(κr) ln r + rem. Returns (J0(κr), rem); κ, r > 0.
#[inline]
pub fn sl_parts(kappa: f64, r: f64) -> (f64, C64) {
    let x = kappa * r;
    if x < TABLE_MAX {
        let [j0, r0, _, _] = table_values(x);
        (j0, C64::new(-INV_2PI * (0.5 * kappa).ln() * j0 - 0.25 * r0, 0.25 * j0))
    } else {
        let (j0, y0, _, _) = jy01(x);
        (j0, C64::new(-0.25 * y0 + INV_2PI * j0 * r.ln(), 0.25 * j0))
    }
}

/// Φ_κ(r) for κ, r > 0.
#[inline]
pub fn phi(kappa: f64, r: f64) -> C64 {
    let (j0, y0, _, _) = jy01(kappa * r);
    C64::new(-0.25 * y0, 0.25 * j0)
}

/// g(r) with ∂_{ν_y} Φ(x, y) = g(r) · ((x − y)·ν_y), i.e. g = (iκ/4) H1(κr)/r.
#[inline]
pub fn dl_factor(kappa: f64, r: f64) -> C64 {
    let (_, _, j1, y1) = jy01(kappa * r);
    C64::new(-0.25 * kappa * y1 / r, 0.25 * kappa * j1 / r)
}

/// Φ and g together.
#[inline]
pub fn phi_and_dl(kappa: f64, r: f64) -> (C64, C64) {
    let (j0, y0, j1, y1) = jy01(kappa * r);
    (
        C64::new(-0.25 * y0, 0.25 * j0),
        C64::new(-0.25 * kappa * y1 / r, 0.25 * kappa * j1 / r),
    )
}

/// g = -(κ/2π) J1(κr)/r · ln r + rem. Returns (J1(κr)/r, rem). The remainder
/// contains the 1/(2π r²) Laplace term and is only bounded once multiplied by
/// (x − y)·ν_y.
#[inline]
pub fn dl_parts(kappa: f64, r: f64) -> (f64, C64) {
    let x = kappa * r;
    if x < TABLE_MAX {
        let [_, _, j1, r1] = table_values(x);
        let j1r = j1 / r;
        (
            j1r,
            C64::new(
                -kappa * INV_2PI * (0.5 * kappa).ln() * j1r + INV_2PI / (r * r) - 0.25 * kappa * r1 / r,
                0.25 * kappa * j1r,
            ),
        )
    } else {
        let (_, _, j1, y1) = jy01(x);
        let j1r = j1 / r;
        (j1r, C64::new(-0.25 * kappa * y1 / r + kappa * INV_2PI * j1r * r.ln(), 0.25 * kappa * j1r))
    }
}

fn kappa_of(omega: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("wave speed must be positive, got {c}")));
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("kernel undefined at omega = {omega}")));
    }
    Ok(omega / c)
}

fn separation(x: Point, y: Point) -> Result<f64> {
    let r = (x[0] - y[0]).hypot(x[1] - y[1]);
    if r == 0.0 {
        return Err(Error::Domain("coincident points x = y".into()));
    }
    Ok(r)
}

/// Φ_ω(x, y) with κ = ω/c; negative ω uses Φ_{-ω} = conj(Φ_ω).
pub fn kernel_phi(omega: f64, c: f64, x: Point, y: Point) -> Result<C64> {
    let k = kappa_of(omega, c)?;
    let r = separation(x, y)?;
    let v = phi(k.abs(), r);
    Ok(if k < 0.0 { v.conj() } else { v })
}

/// ∂Φ_ω(x, y)/∂ν_y = (iκ/4) H1(κr) (x − y)·ν_y / r.
pub fn kernel_normal_derivative(omega: f64, c: f64, x: Point, y: Point, nu_y: Point) -> Result<C64> {
    let k = kappa_of(omega, c)?;
    let r = separation(x, y)?;
    let a = (x[0] - y[0]) * nu_y[0] + (x[1] - y[1]) * nu_y[1];
    let v = dl_factor(k.abs(), r) * a;
    Ok(if k < 0.0 { v.conj() } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    SingleLayer,
    DoubleLayer,
}

/// Periodic log split of a boundary kernel on a closed curve:
/// kernel(θ, τ) = M1 ln(4 sin²((θ − τ)/2)) + M2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSplit {
    pub m1: C64,
    pub m2: C64,
}

/// Split of Φ(x(θ), x(τ)) (single layer) or ∂_{ν(τ)}Φ(x(θ), x(τ)) (double
/// layer, unit outward normal) including the diagonal limits.
pub fn split_kernel(op: Operator, omega: f64, c: f64, curve: &ParametricCurve, theta: f64, tau: f64) -> Result<KernelSplit> {
    if !curve.is_closed() {
        return Err(Error::Domain("periodic kernel split requires a closed curve".into()));
    }
    let k = kappa_of(omega, c)?;
    let ka = k.abs();
    let px = curve.at(theta);
    let py = curve.at(tau);
    let d = (theta - tau).rem_euclid(2.0 * PI);
    let same = d < 1e-14 || 2.0 * PI - d < 1e-14;
    let s = match op {
        Operator::SingleLayer => {
            if same {
                let sp = px.speed();
                KernelSplit {
                    m1: C64::new(-0.5 * INV_2PI, 0.0),
                    m2: C64::new(-INV_2PI * ((0.5 * ka * sp).ln() + EULER_GAMMA), 0.25),
                }
            } else {
                let r = crate::geometry::dist(px.pos, py.pos);
                let l = (4.0 * (0.5 * (theta - tau)).sin().powi(2)).ln();
                let (j0, _) = sl_parts(ka, r);
                let m1 = C64::new(-0.5 * INV_2PI * j0, 0.0);
                KernelSplit {
                    m1,
                    m2: phi(ka, r) - m1 * l,
                }
            }
        }
        Operator::DoubleLayer => {
            let nu = curve.normal_at(&py);
            if same {
                let sp2 = py.d1[0].powi(2) + py.d1[1].powi(2);
                KernelSplit {
                    m1: C64::new(0.0, 0.0),
                    m2: C64::new(0.5 * INV_2PI * (py.d2[0] * nu[0] + py.d2[1] * nu[1]) / sp2, 0.0),
                }
            } else {
                let r = crate::geometry::dist(px.pos, py.pos);
                let a = (px.pos[0] - py.pos[0]) * nu[0] + (px.pos[1] - py.pos[1]) * nu[1];
                let l = (4.0 * (0.5 * (theta - tau)).sin().powi(2)).ln();
                let (j1r, _) = dl_parts(ka, r);
                let m1 = C64::new(-0.5 * INV_2PI * ka * j1r * a, 0.0);
                KernelSplit {
                    m1,
                    m2: dl_factor(ka, r) * a - m1 * l,
                }
            }
        }
    };
    Ok(if k < 0.0 {
        KernelSplit {
            m1: s.m1.conj(),
            m2: s.m2.conj(),
        }
    } else {
        s
    })
}

/// (2/π) for callers assembling Y-type limits.
pub const TWO_OVER_PI: f64 = FRAC_2_PI;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::{Circle, Kite};
    use proptest::prelude::*;
    use std::sync::Arc;

    #[test]
    fn phi_reference_value() {
        // (i/4) H0(1) from J0(1), Y0(1)
        let v = kernel_phi(2.0, 2.0, [0.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((v.re + 0.25 * 0.08825696421567696).abs() < 1e-16);
        assert!((v.im - 0.25 * 0.7651976865579666).abs() < 1e-16);
        assert!(kernel_phi(0.0, 1.0, [0.0, 0.0], [1.0, 0.0]).is_err());
        assert!(kernel_phi(1.0, 1.0, [0.5, 0.0], [0.5, 0.0]).is_err());
    }

    #[test]
    fn diagonal_limits_are_continuous() {
        for curve in [
            ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap(),
            ParametricCurve::closed(Arc::new(Kite {
                center: [0.0, 0.0],
                scale: 1.0,
                rotation: 0.2,
            }))
            .unwrap(),
        ] {
            for op in [Operator::SingleLayer, Operator::DoubleLayer] {
                let d = split_kernel(op, 3.0, 1.0, &curve, 0.7, 0.7).unwrap();
                let n = split_kernel(op, 3.0, 1.0, &curve, 0.7, 0.7 + 1e-5).unwrap();
                assert!((d.m2 - n.m2).norm() < 1e-4, "{op:?}: {} vs {}", d.m2, n.m2);
                assert!((d.m1 - n.m1).norm() < 1e-4);
            }
        }
        let circ = ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap();
        let d = split_kernel(Operator::DoubleLayer, 3.0, 1.0, &circ, 1.0, 1.0).unwrap();
        assert!((d.m2.re + 0.25 / PI).abs() < 1e-15);
    }

    #[test]
    fn split_parts_recombine() {
        for &(k, r) in &[(1.0, 0.3), (10.0, 0.01), (20.0, 2.0), (3.0, 12.0)] {
            let (j0, rem) = sl_parts(k, r);
            let v = rem - INV_2PI * j0 * r.ln();
            assert!((v - phi(k, r)).norm() < 1e-14 * (1.0 + phi(k, r).norm()));
            let (j1r, rem) = dl_parts(k, r);
            let g = rem - k * INV_2PI * j1r * r.ln();
            assert!((g - dl_factor(k, r)).norm() < 1e-12 * dl_factor(k, r).norm());
        }
    }

    #[test]
    fn normal_derivative_values() {
        let h1 = C64::new(0.4400505857449335, -0.7812128213002887);
        let v = kernel_normal_derivative(1.0, 1.0, [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]).unwrap();
        let e = C64::new(0.0, 0.25) * h1;
        assert!((v - e).norm() < 1e-15);
        let z = kernel_normal_derivative(1.0, 1.0, [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(z.norm(), 0.0);
        let h = crate::special::hankel1(0, 500.0).unwrap();
        assert!((h.norm() / (2.0 / (PI * 500.0)).sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn split_reassembles_kernel() {
        let curves = [
            ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap(),
            ParametricCurve::closed(Arc::new(Kite {
                center: [0.2, 0.1],
                scale: 1.0,
                rotation: 0.0,
            }))
            .unwrap(),
        ];
        // deterministic pseudo-random pairs
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for curve in &curves {
            for &k in &[1.0, 5.0, 25.0] {
                for _ in 0..1000 {
                    let t = 2.0 * PI * next();
                    let mut u = 2.0 * PI * next();
                    if (t - u).abs() < 1e-3 {
                        u += 2e-3;
                    }
                    let l = (4.0 * (0.5 * (t - u)).sin().powi(2)).ln();
                    let x = curve.at(t);
                    let y = curve.at(u);
                    let sv = split_kernel(Operator::SingleLayer, k, 1.0, curve, t, u).unwrap();
                    let direct = kernel_phi(k, 1.0, x.pos, y.pos).unwrap();
                    assert!((sv.m1 * l + sv.m2 - direct).norm() < 1e-12);
                    let sk = split_kernel(Operator::DoubleLayer, k, 1.0, curve, t, u).unwrap();
                    let direct = kernel_normal_derivative(k, 1.0, x.pos, y.pos, curve.normal_at(&y)).unwrap();
                    assert!((sk.m1 * l + sk.m2 - direct).norm() < 1e-12 * (1.0 + direct.norm()));
                }
            }
        }
        let circ = &curves[0];
        let d = split_kernel(Operator::SingleLayer, 1.0, 1.0, circ, 0.4, 0.4).unwrap();
        assert!((d.m1.re + 0.25 / PI).abs() < 1e-16);
        let e = C64::new(-INV_2PI * ((0.5f64).ln() + EULER_GAMMA), 0.25);
        assert!((d.m2 - e).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(w in 0.1f64..40.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
            prop_assume!(x.hypot(y) > 1e-3);
            let a = kernel_phi(w, 1.0, [0.0, 0.0], [x, y]).unwrap();
            let b = kernel_phi(-w, 1.0, [0.0, 0.0], [x, y]).unwrap();
            prop_assert!((a.conj() - b).norm() == 0.0);
            let p = kernel_phi(w, 1.0, [x, y], [0.0, 0.0]).unwrap();
            prop_assert!((a - p).norm() == 0.0);
        }
    }
}
