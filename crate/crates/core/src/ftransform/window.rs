use crate::error::{Error, Result};
use crate::geometry::{eta_window, WindowProfile};

const HALF_TO_ONE: WindowProfile = WindowProfile { t0: 0.5, t1: 1.0 };

/// Overlapping time windows ⊓_q(t) = ⊓(t − s_q) with s_q = 1.5 q H
/// (q counted from 0). Each window is 1 on [s_q − H/2, s_q + H/2] and
/// neighbouring windows cross-fade over [s_q + H/2, s_q + H].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindowPartition {
    pub half_width: f64,
    pub count: usize,
}

impl TimeWindowPartition {
    pub fn new(half_width: f64, count: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::config("time.H", format!("window half-width must be positive, got {half_width}")));
        }
        if count == 0 {
            return Err(Error::config("time.Q", "at least one window is required"));
        }
        Ok(TimeWindowPartition { half_width, count })
    }

    pub fn center(&self, q: usize) -> f64 {
        1.5 * q as f64 * self.half_width
    }

    pub fn support(&self, q: usize) -> (f64, f64) {
        let s = self.center(q);
        (s - self.half_width, s + self.half_width)
    }

    /// Reference window ⊓(s).
    pub fn profile(&self, s: f64) -> f64 {
        let h = self.half_width;
        if s.abs() >= h {
            0.0
        } else if s >= -0.5 * h {
            eta_window(s / h, HALF_TO_ONE)
        } else {
            1.0 - eta_window(s / h + 1.5, HALF_TO_ONE)
        }
    }

    pub fn window(&self, q: usize, t: f64) -> f64 {
        self.profile(t - self.center(q))
    }

    /// End of the last window support, s_Q + H.
    pub fn end_time(&self) -> f64 {
        self.center(self.count - 1) + self.half_width
    }

    /// Upper end of the interval [0, T] on which the windows sum to one.
    pub fn unity_end(&self) -> f64 {
        self.center(self.count - 1) + 0.5 * self.half_width
    }
}

/// Uniform sample times t_k = t0 + k·dt, k = 0..n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::config("time.dt", format!("time step must be positive, got {dt}")));
        }
        if n == 0 {
            return Err(Error::config("time.dt", "empty time grid"));
        }
        Ok(TimeGrid { t0, dt, n })
    }

    /// Grid covering [t0, t_end] with spacing dt (t_end rounded up to the grid).
    pub fn covering(t0: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(t_end > t0) {
            return Err(Error::config("time", format!("empty time range [{t0}, {t_end}]")));
        }
        let n = ((t_end - t0) / dt - 1e-9).ceil() as usize + 1;
        Self::new(t0, dt, n)
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.time(k)).collect()
    }

    /// Index k with t_k = t (within 1e-9 dt), if any.
    pub fn index_of(&self, t: f64) -> Option<i64> {
        let x = (t - self.t0) / self.dt;
        let k = x.round();
        ((x - k).abs() < 1e-6).then_some(k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn window_shape() {
        let p = TimeWindowPartition::new(10.0, 3).unwrap();
        assert_eq!(p.center(2), 30.0);
        assert_eq!(p.window(0, 0.0), 1.0);
        assert_eq!(p.window(0, -5.0), 1.0);
        assert_eq!(p.window(0, 5.0), 1.0);
        assert_eq!(p.window(0, 10.0), 0.0);
        assert_eq!(p.window(0, -10.0), 0.0);
        assert!((p.window(0, 7.5) - 0.581_967_233_335_490_6).abs() < 1e-15);
        assert!((p.window(1, 7.5) - (1.0 - 0.581_967_233_335_490_6)).abs() < 1e-15);
        assert_eq!(p.end_time(), 40.0);
        assert!(TimeWindowPartition::new(-1.0, 1).is_err());
        assert!(TimeGrid::new(0.0, -0.1, 10).is_err());
    }

    #[test]
    fn reassembly_of_smooth_signal() {
        let p = TimeWindowPartition::new(10.0, 3).unwrap();
        let g = |t: f64| t.sin() * (-(t - 15.0) * (t - 15.0) / 20.0).exp();
        for k in 0..=3500 {
            let t = k as f64 * 0.01;
            let s: f64 = (0..3).map(|q| g(t) * p.window(q, t)).sum();
            assert!((s - g(t)).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(t in 0.0f64..35.0, h in 1.0f64..20.0) {
            let p = TimeWindowPartition::new(h, 3).unwrap();
            let t = t / 35.0 * p.unity_end();
            let s: f64 = (0..3).map(|q| p.window(q, t)).sum();
            prop_assert!((s - 1.0).abs() < 1e-14);
            for q in 0..3 {
                let (a, b) = p.support(q);
                if t <= a || t >= b {
                    prop_assert_eq!(p.window(q, t), 0.0);
                }
            }
        }
    }
}
