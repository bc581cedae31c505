use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

pub type Point = [f64; 2];

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Position and first two derivatives of a parameterization at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub pos: Point,
    pub d1: Point,
    pub d2: Point,
}

impl CurvePoint {
    #[inline]
    pub fn speed(&self) -> f64 {
        self.d1[0].hypot(self.d1[1])
    }

    #[inline]
    pub fn tangent(&self) -> Point {
        let s = self.speed();
        [self.d1[0] / s, self.d1[1] / s]
    }

    /// Unit normal to the right of the direction of travel, (y', -x') / |x'|.
    #[inline]
    pub fn right_normal(&self) -> Point {
        let s = self.speed();
        [self.d1[1] / s, -self.d1[0] / s]
    }
}

/// A smooth map from a parameter interval into the plane.
///
/// Closed shapes are 2π-periodic; open shapes are evaluated on their own
/// interval only.
pub trait Shape: Send + Sync + Debug {
    fn eval(&self, t: f64) -> CurvePoint;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    Closed,
    Open { a: f64, b: f64 },
}

/// A closed curve or an open arc in the plane.
#[derive(Debug, Clone)]
pub struct ParametricCurve {
    shape: Arc<dyn Shape>,
    kind: CurveKind,
    /// +1 when the closed parent is traversed counter-clockwise.
    orientation: f64,
}

/// Sample returned by [`ParametricCurve::eval_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub point: Point,
    pub tangent: Point,
    pub normal: Point,
    pub speed: f64,
}

impl ParametricCurve {
    /// Closed curve from a 2π-periodic shape. Orientation is detected from the
    /// signed area so that normals point outward.
    pub fn closed(shape: Arc<dyn Shape>) -> Result<Self> {
        let n = 512;
        let mut area = 0.0;
        let mut min_speed = f64::INFINITY;
        for k in 0..n {
            let p = shape.eval(2.0 * PI * k as f64 / n as f64);
            area += p.pos[0] * p.d1[1] - p.pos[1] * p.d1[0];
            min_speed = min_speed.min(p.speed());
        }
        if !(min_speed > 0.0) || area.abs() < 1e-300 {
            return Err(Error::DegenerateCurve("closed curve with vanishing speed or area".into()));
        }
        Ok(ParametricCurve {
            shape,
            kind: CurveKind::Closed,
            orientation: area.signum(),
        })
    }

    /// Open arc: the restriction of `shape` to [a, b]. If `shape` is periodic
    /// the normal convention of the closed parent is inherited.
    pub fn open(shape: Arc<dyn Shape>, a: f64, b: f64) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateCurve(format!("empty arc interval [{a}, {b}]")));
        }
        let n = 256;
        let mut area = 0.0;
        for k in 0..=n {
            let t = a + (b - a) * k as f64 / n as f64;
            let p = shape.eval(t);
            if !(p.speed() > 0.0) {
                return Err(Error::DegenerateCurve(format!("zero speed at parameter {t}")));
            }
            area += p.pos[0] * p.d1[1] - p.pos[1] * p.d1[0];
        }
        Ok(ParametricCurve {
            shape,
            kind: CurveKind::Open { a, b },
            orientation: if area < 0.0 { -1.0 } else { 1.0 },
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.kind, CurveKind::Closed)
    }

    pub fn shape(&self) -> &Arc<dyn Shape> {
        &self.shape
    }

    /// Parameter interval; [0, 2π) for closed curves.
    pub fn interval(&self) -> (f64, f64) {
        match self.kind {
            CurveKind::Closed => (0.0, 2.0 * PI),
            CurveKind::Open { a, b } => (a, b),
        }
    }

    /// Unchecked evaluation (closed curves are periodic in θ).
    #[inline]
    pub fn at(&self, t: f64) -> CurvePoint {
        self.shape.eval(t)
    }

    /// Unit normal; outward for closed curves.
    #[inline]
    pub fn normal_at(&self, p: &CurvePoint) -> Point {
        let n = p.right_normal();
        [self.orientation * n[0], self.orientation * n[1]]
    }

    /// Normal scaled by the speed, i.e. the normal line element.
    #[inline]
    pub fn scaled_normal(&self, p: &CurvePoint) -> Point {
        [self.orientation * p.d1[1], -self.orientation * p.d1[0]]
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Checked evaluation. Closed curves accept every finite θ (the parameter
    /// domain is the circle); open arcs reject θ outside [a, b].
    pub fn eval_curve(&self, t: f64) -> Result<CurveSample> {
        if !t.is_finite() {
            return Err(Error::ParameterDomain {
                param: "theta",
                value: t,
                lo: self.interval().0,
                hi: self.interval().1,
            });
        }
        if let CurveKind::Open { a, b } = self.kind {
            let slack = 1e-12 * (b - a);
            if t < a - slack || t > b + slack {
                return Err(Error::ParameterDomain {
                    param: "theta",
                    value: t,
                    lo: a,
                    hi: b,
                });
            }
        }
        let p = self.at(t);
        Ok(CurveSample {
            point: p.pos,
            tangent: p.tangent(),
            normal: self.normal_at(&p),
            speed: p.speed(),
        })
    }

    /// Arc length between parameters t0 < t1 (no wrapping).
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        let (x, w) = gl32();
        let panels = (((t1 - t0).abs() / 0.25).ceil() as usize).max(1);
        let h = (t1 - t0) / panels as f64;
        let mut s = 0.0;
        for k in 0..panels {
            let a = t0 + k as f64 * h;
            for (xi, wi) in x.iter().zip(w.iter()) {
                s += wi * 0.5 * h * self.at(a + 0.5 * h * (xi + 1.0)).speed();
            }
        }
        s
    }

    /// Total length.
    pub fn length(&self) -> f64 {
        let (a, b) = self.interval();
        self.arc_length(a, b)
    }

    /// Uniform parameter sampling of [t0, t1] with `n` points, endpoints included.
    pub fn sample(&self, t0: f64, t1: f64, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| self.at(t0 + (t1 - t0) * k as f64 / (n - 1).max(1) as f64).pos)
            .collect()
    }
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static R: std::sync::OnceLock<(Vec<f64>, Vec<f64>)> = std::sync::OnceLock::new();
    R.get_or_init(|| crate::quad::gauss_legendre(32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::Circle;

    #[test]
    fn circle_samples() {
        let c = ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap();
        let s = c.eval_curve(0.0).unwrap();
        assert!((s.point[0] - 1.0).abs() < 1e-15 && s.point[1].abs() < 1e-15);
        assert!((s.normal[0] - 1.0).abs() < 1e-15 && s.normal[1].abs() < 1e-15);
        assert!((s.speed - 1.0).abs() < 1e-15);
        let s = c.eval_curve(PI / 2.0).unwrap();
        assert!(s.point[0].abs() < 1e-15 && (s.point[1] - 1.0).abs() < 1e-15);
        let c2 = ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 2.0))).unwrap();
        let s = c2.eval_curve(0.0).unwrap();
        assert!((s.point[0] - 2.0).abs() < 1e-15 && (s.speed - 2.0).abs() < 1e-15);
        assert!((c2.length() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn open_arc_rejects_outside() {
        let arc = ParametricCurve::open(Arc::new(Circle::new([0.0, 0.0], 1.0)), 0.1, 2.0).unwrap();
        assert!(arc.eval_curve(0.0).is_err());
        assert!(arc.eval_curve(2.5).is_err());
        assert!(arc.eval_curve(1.0).is_ok());
        assert!(arc.eval_curve(f64::NAN).is_err());
    }

    #[test]
    fn clockwise_circle_normal_is_outward() {
        #[derive(Debug)]
        struct Cw;
        impl Shape for Cw {
            fn eval(&self, t: f64) -> CurvePoint {
                let (s, c) = t.sin_cos();
                CurvePoint {
                    pos: [c, -s],
                    d1: [-s, -c],
                    d2: [-c, s],
                }
            }
        }
        let c = ParametricCurve::closed(Arc::new(Cw)).unwrap();
        let s = c.eval_curve(0.3).unwrap();
        assert!((s.normal[0] - s.point[0]).abs() < 1e-14 && (s.normal[1] - s.point[1]).abs() < 1e-14);
    }
}
