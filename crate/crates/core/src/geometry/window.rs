/// Transition thresholds of the bump η(·; t0, t1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowProfile {
    pub t0: f64,
    pub t1: f64,
}

impl WindowProfile {
    pub fn new(t0: f64, t1: f64) -> Self {
        debug_assert!(t1 > t0 && t0 >= 0.0);
        WindowProfile { t0, t1 }
    }
}

/// C∞ bump: 1 on |t| ≤ t0, 0 on |t| ≥ t1, and
/// exp(2 e^{-1/s} / (s - 1)) with s = (|t| - t0)/(t1 - t0) in between.
#[inline]
pub fn eta_window(t: f64, profile: WindowProfile) -> f64 {
    let a = t.abs();
    if a <= profile.t0 {
        return 1.0;
    }
    if a >= profile.t1 {
        return 0.0;
    }
    let s = (a - profile.t0) / (profile.t1 - profile.t0);
    (2.0 * (-1.0 / s).exp() / (s - 1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: WindowProfile = WindowProfile { t0: 0.5, t1: 1.0 };

    #[test]
    fn branch_values() {
        assert_eq!(eta_window(0.3, P), 1.0);
        assert_eq!(eta_window(1.2, P), 0.0);
        // arbitrary-precision value of exp(-4 e^{-2})
        assert!((eta_window(0.75, P) - 0.581_967_233_335_490_6).abs() < 1e-15);
        assert_eq!(eta_window(-0.75, P), eta_window(0.75, P));
    }

    #[test]
    fn derivatives_continuous_across_joins() {
        // fourth-order differences with step 1e-4 show no jumps at t0 and t1
        let h = 1e-4;
        let d = |k: usize, t: f64| -> f64 {
            let f = |x: f64| eta_window(x, P);
            match k {
                1 => (f(t + h) - f(t - h)) / (2.0 * h),
                2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
                _ => unreachable!(),
            }
        };
        for &j in &[P.t0, P.t1] {
            for k in 1..=2 {
                let jump = (d(k, j + 2.0 * h) - d(k, j - 2.0 * h)).abs();
                assert!(jump < 1e-6, "order {k} jump {jump} at {j}");
            }
        }
        // bounded higher derivatives on the transition
        let mut max4: f64 = 0.0;
        let hh = 1e-3;
        let mut t = 0.4;
        while t < 1.1 {
            let f = |x: f64| eta_window(x, P);
            let v = (f(t + 2.0 * hh) - 4.0 * f(t + hh) + 6.0 * f(t) - 4.0 * f(t - hh) + f(t - 2.0 * hh)) / hh.powi(4);
            max4 = max4.max(v.abs());
            t += 0.0037;
        }
        assert!(max4.is_finite() && max4 < 1e6);
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(a in 0.0f64..1.5, b in 0.0f64..1.5) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let (fl, fh) = (eta_window(lo, P), eta_window(hi, P));
            prop_assert!((0.0..=1.0).contains(&fl) && (0.0..=1.0).contains(&fh));
            prop_assert!(fh <= fl);
        }
    }
}
