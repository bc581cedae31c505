//! Curve catalog: analytic shapes plus trigonometric and Chebyshev
//! interpolants of sampled points.

use super::curve::{CurvePoint, Point, Shape};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }
}

impl Shape for Circle {
    fn eval(&self, t: f64) -> CurvePoint {
        let (s, c) = t.sin_cos();
        let r = self.radius;
        CurvePoint {
            pos: [self.center[0] + r * c, self.center[1] + r * s],
            d1: [-r * s, r * c],
            d2: [-r * c, -r * s],
        }
    }
}

/// Ellipse with semi-axes `a`, `b`, rotated by `rotation`.
#[derive(Debug, Clone)]
pub struct Ellipse {
    pub center: Point,
    pub a: f64,
    pub b: f64,
    pub rotation: f64,
}

#[inline]
fn rotate(v: Point, rs: f64, rc: f64) -> Point {
    [rc * v[0] - rs * v[1], rs * v[0] + rc * v[1]]
}

impl Shape for Ellipse {
    fn eval(&self, t: f64) -> CurvePoint {
        let (s, c) = t.sin_cos();
        let (rs, rc) = self.rotation.sin_cos();
        let p = rotate([self.a * c, self.b * s], rs, rc);
        CurvePoint {
            pos: [self.center[0] + p[0], self.center[1] + p[1]],
            d1: rotate([-self.a * s, self.b * c], rs, rc),
            d2: rotate([-self.a * c, -self.b * s], rs, rc),
        }
    }
}

/// The standard kite (cos t + 0.65 cos 2t − 0.65, 1.5 sin t), scaled and rotated.
#[derive(Debug, Clone)]
pub struct Kite {
    pub center: Point,
    pub scale: f64,
    pub rotation: f64,
}

impl Kite {
    /// Unit-scale kite at the origin.
    pub fn standard() -> Self {
        Kite {
            center: [0.0, 0.0],
            scale: 1.0,
            rotation: 0.0,
        }
    }
}

impl Shape for Kite {
    fn eval(&self, t: f64) -> CurvePoint {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        let (rs, rc) = self.rotation.sin_cos();
        let k = self.scale;
        let p = rotate([k * (c + 0.65 * c2 - 0.65), k * 1.5 * s], rs, rc);
        CurvePoint {
            pos: [self.center[0] + p[0], self.center[1] + p[1]],
            d1: rotate([k * (-s - 1.3 * s2), k * 1.5 * c], rs, rc),
            d2: rotate([k * (-c - 2.6 * c2), -k * 1.5 * s], rs, rc),
        }
    }
}

/// Closed curve given by a truncated Fourier series in each coordinate.
#[derive(Debug, Clone)]
pub struct FourierCurve {
    /// (cos, sin) coefficients of x and y for k = 0..=K.
    cx: Vec<(f64, f64)>,
    cy: Vec<(f64, f64)>,
}

impl FourierCurve {
    /// Trigonometric interpolant of points sampled at t_k = 2πk/n.
    pub fn interpolate(points: &[Point]) -> Result<Self> {
        Self::from_samples(points, None)
    }

    /// Trigonometric interpolant with a Gaussian low-pass filter exp(-(k eps)^2 / 2);
    /// modes below 1e-17 relative are dropped.
    pub fn from_samples(points: &[Point], eps: Option<f64>) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::DegenerateCurve("need at least 3 sample points".into()));
        }
        let mut buf: Vec<C64> = points.iter().map(|p| C64::new(p[0], p[1])).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let kmax = (n - 1) / 2;
        let mut cx = Vec::with_capacity(kmax + 1);
        let mut cy = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let f = eps.map_or(1.0, |e| (-0.5 * (k as f64 * e).powi(2)).exp());
            if f < 1e-17 {
                break;
            }
            // z(t) = sum_k Z_k e^{ikt}; split into x and y parts
            let zp = buf[k] / n as f64 * f;
            let zm = if k == 0 { C64::new(0.0, 0.0) } else { buf[n - k] / n as f64 * f };
            if k == 0 {
                cx.push((zp.re, 0.0));
                cy.push((zp.im, 0.0));
            } else {
                // x = Re z: Re(zp e^{ikt} + zm e^{-ikt})
                cx.push((zp.re + zm.re, -zp.im + zm.im));
                cy.push((zp.im + zm.im, zp.re - zm.re));
            }
        }
        Ok(FourierCurve { cx, cy })
    }

    pub fn modes(&self) -> usize {
        self.cx.len()
    }
}

impl Shape for FourierCurve {
    fn eval(&self, t: f64) -> CurvePoint {
        let (s1, c1) = t.sin_cos();
        let (mut s, mut c) = (0.0f64, 1.0f64);
        let mut out = CurvePoint {
            pos: [0.0; 2],
            d1: [0.0; 2],
            d2: [0.0; 2],
        };
        for k in 0..self.cx.len() {
            if k > 0 {
                let ns = s * c1 + c * s1;
                let nc = c * c1 - s * s1;
                s = ns;
                c = nc;
            }
            let kf = k as f64;
            for (d, co) in [&self.cx, &self.cy].iter().enumerate() {
                let (a, b) = co[k];
                out.pos[d] += a * c + b * s;
                out.d1[d] += kf * (-a * s + b * c);
                out.d2[d] -= kf * kf * (a * c + b * s);
            }
        }
        out
    }
}

/// Closed polygon resampled uniformly in arc length and smoothed so that the
/// corners become rounded with radius of order `rounding`.
pub fn rounded_polygon(vertices: &[Point], rounding: f64) -> Result<FourierCurve> {
    let nv = vertices.len();
    if nv < 3 || !(rounding > 0.0) {
        return Err(Error::DegenerateCurve("rounded polygon needs >= 3 vertices and rounding > 0".into()));
    }
    let seg: Vec<f64> = (0..nv)
        .map(|i| super::curve::dist(vertices[i], vertices[(i + 1) % nv]))
        .collect();
    let perim: f64 = seg.iter().sum();
    let n = 8192;
    let mut pts = Vec::with_capacity(n);
    let mut i = 0;
    let mut acc = 0.0;
    for k in 0..n {
        let s = perim * k as f64 / n as f64;
        while s > acc + seg[i] && i + 1 < nv {
            acc += seg[i];
            i += 1;
        }
        let f = (s - acc) / seg[i];
        let a = vertices[i];
        let b = vertices[(i + 1) % nv];
        pts.push([a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]);
    }
    FourierCurve::from_samples(&pts, Some(rounding * 2.0 * PI / perim))
}

/// H-shaped outline of width and height 2 with bar and leg thickness 0.6.
pub fn h_shape(center: Point, scale: f64, rounding: f64) -> Result<FourierCurve> {
    let v: [Point; 12] = [
        [-1.0, -1.0],
        [-0.4, -1.0],
        [-0.4, -0.3],
        [0.4, -0.3],
        [0.4, -1.0],
        [1.0, -1.0],
        [1.0, 1.0],
        [0.4, 1.0],
        [0.4, 0.3],
        [-0.4, 0.3],
        [-0.4, 1.0],
        [-1.0, 1.0],
    ];
    let v: Vec<Point> = v
        .iter()
        .map(|p| [center[0] + scale * p[0], center[1] + scale * p[1]])
        .collect();
    rounded_polygon(&v, rounding)
}

/// Rocket-like outline starting at the nozzle (bottom centre) and running
/// counter-clockwise; parameter 0 sits in the middle of the nozzle so the
/// cavity is the restriction to (gap, 2π − gap).
pub fn rocket_shape(center: Point, scale: f64, rounding: f64) -> Result<FourierCurve> {
    let v: [Point; 10] = [
        [0.0, -1.0],
        [0.45, -1.0],
        [0.8, -1.4],
        [0.5, -0.5],
        [0.5, 0.9],
        [0.0, 1.8],
        [-0.5, 0.9],
        [-0.5, -0.5],
        [-0.8, -1.4],
        [-0.45, -1.0],
    ];
    let v: Vec<Point> = v
        .iter()
        .map(|p| [center[0] + scale * p[0], center[1] + scale * p[1]])
        .collect();
    rounded_polygon(&v, rounding)
}

/// Open arc given by Chebyshev interpolation of points sampled at the
/// Chebyshev–Lobatto points -cos(πk/(n−1)); parameter interval [-1, 1].
#[derive(Debug, Clone)]
pub struct ChebyshevArc {
    c: [Vec<f64>; 2],
    d: [Vec<f64>; 2],
    dd: [Vec<f64>; 2],
}

fn cheb_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n];
    for k in (0..n - 1).rev() {
        d[k] = (if k + 2 < n { d[k + 2] } else { 0.0 }) + 2.0 * (k + 1) as f64 * c[k + 1];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + x * b1 - b2
}

impl ChebyshevArc {
    pub fn from_lobatto_samples(points: &[Point]) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::DegenerateCurve("need at least 2 sample points".into()));
        }
        let m = n - 1;
        let mut c = [vec![0.0; n], vec![0.0; n]];
        for (dim, cd) in c.iter_mut().enumerate() {
            for (k, ck) in cd.iter_mut().enumerate() {
                let mut s = 0.0;
                for (j, p) in points.iter().enumerate() {
                    // sample j sits at -cos(pi j / m) = cos(pi (m - j) / m)
                    let w = if j == 0 || j == m { 0.5 } else { 1.0 };
                    s += w * p[dim] * (PI * ((k * (m - j)) % (2 * m)) as f64 / m as f64).cos();
                }
                let w = if k == 0 || k == m { 0.5 } else { 1.0 };
                *ck = 2.0 * w * s / m as f64;
            }
        }
        let d = [cheb_derivative(&c[0]), cheb_derivative(&c[1])];
        let dd = [cheb_derivative(&d[0]), cheb_derivative(&d[1])];
        Ok(ChebyshevArc { c, d, dd })
    }
}

impl Shape for ChebyshevArc {
    fn eval(&self, t: f64) -> CurvePoint {
        CurvePoint {
            pos: [clenshaw(&self.c[0], t), clenshaw(&self.c[1], t)],
            d1: [clenshaw(&self.d[0], t), clenshaw(&self.d[1], t)],
            d2: [clenshaw(&self.dd[0], t), clenshaw(&self.dd[1], t)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ParametricCurve;
    use std::sync::Arc;

    fn fd_check(s: &dyn Shape, t: f64) {
        let h = 1e-5;
        let p = s.eval(t);
        let a = s.eval(t + h);
        let b = s.eval(t - h);
        for d in 0..2 {
            let d1 = (a.pos[d] - b.pos[d]) / (2.0 * h);
            let d2 = (a.d1[d] - b.d1[d]) / (2.0 * h);
            assert!((d1 - p.d1[d]).abs() < 1e-6 * (1.0 + p.d1[d].abs()), "d1 {d1} vs {}", p.d1[d]);
            assert!((d2 - p.d2[d]).abs() < 1e-5 * (1.0 + p.d2[d].abs()), "d2 {d2} vs {}", p.d2[d]);
        }
    }

    #[test]
    fn derivatives_consistent() {
        let e = Ellipse {
            center: [0.3, -0.2],
            a: 1.2,
            b: 0.5,
            rotation: 0.4,
        };
        let k = Kite {
            center: [1.0, 1.0],
            scale: 0.7,
            rotation: -0.3,
        };
        let h = h_shape([0.0, 0.0], 1.0, 0.1).unwrap();
        for t in [0.0, 0.7, 2.0, 4.5] {
            fd_check(&e, t);
            fd_check(&k, t);
            fd_check(&h, t);
        }
    }

    #[test]
    fn fourier_interpolant_reproduces_circle() {
        let pts: Vec<Point> = (0..16)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 16.0;
                [2.0 * t.cos() + 1.0, 2.0 * t.sin()]
            })
            .collect();
        let f = FourierCurve::interpolate(&pts).unwrap();
        let p = f.eval(0.3);
        assert!((p.pos[0] - (2.0 * 0.3f64.cos() + 1.0)).abs() < 1e-14);
        assert!((p.pos[1] - 2.0 * 0.3f64.sin()).abs() < 1e-14);
        assert!((p.d1[0] + 2.0 * 0.3f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn rounded_shapes_are_regular() {
        for s in [h_shape([0.0, 0.0], 1.0, 0.08).unwrap(), rocket_shape([0.0, 0.0], 1.0, 0.08).unwrap()] {
            let c = ParametricCurve::closed(Arc::new(s)).unwrap();
            assert_eq!(c.orientation(), 1.0);
            let min = (0..4000)
                .map(|k| c.at(2.0 * PI * k as f64 / 4000.0).speed())
                .fold(f64::INFINITY, f64::min);
            assert!(min > 0.1, "min speed {min}");
        }
    }

    #[test]
    fn chebyshev_arc_reproduces_parabola() {
        let n = 9;
        let pts: Vec<Point> = (0..n)
            .map(|j| {
                let t = -(PI * j as f64 / (n - 1) as f64).cos();
                [t, t * t]
            })
            .collect();
        let a = ChebyshevArc::from_lobatto_samples(&pts).unwrap();
        let p = a.eval(0.37);
        assert!((p.pos[0] - 0.37).abs() < 1e-14 && (p.pos[1] - 0.37 * 0.37).abs() < 1e-14);
        assert!((p.d1[1] - 0.74).abs() < 1e-13 && (p.d2[1] - 2.0).abs() < 1e-12);
    }
}
