//! Incident fields: a Gaussian-modulated point source and plane wave given
//! by their spectra, and a pulsed plane wave (single and repeated) given in
//! closed form in time.

use crate::error::{Error, Result};
use crate::ftransform::{FrequencyGrid, InverseFt, SignalClass};
use crate::geometry::{dist, Point};
use crate::special::hankel01;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IncidentKind {
    /// U = (5i/2) H0(ω|x − z0|) e^{−(ω−ω0)²/σ²} e^{iωτ0}.
    PointSource {
        z0: Point,
        #[serde(default = "d_omega0")]
        omega0: f64,
        #[serde(default = "d_sigma1")]
        sigma: f64,
        #[serde(default = "d_tau1")]
        tau0: f64,
    },
    /// U = e^{iω x·d} e^{−(ω−ω0)²/σ²} e^{iωτ0}.
    GaussianPlane {
        #[serde(default)]
        theta: f64,
        #[serde(default = "d_omega0")]
        omega0: f64,
        #[serde(default = "d_sigma2")]
        sigma: f64,
        #[serde(default = "d_tau2")]
        tau0: f64,
    },
    /// u = −sin(4ℓ) e^{−1.6(ℓ−3)²}, ℓ = t − t_lag − x·d.
    PulsePlane {
        #[serde(default)]
        theta: f64,
        #[serde(default = "d_lag")]
        t_lag: f64,
    },
    /// Σ_{j<count} of the pulse delayed by j·spacing.
    MultiPulse {
        #[serde(default)]
        theta: f64,
        #[serde(default = "d_lag")]
        t_lag: f64,
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_spacing")]
        spacing: f64,
    },
}

fn d_omega0() -> f64 {
    15.0
}
fn d_sigma1() -> f64 {
    2.0
}
fn d_tau1() -> f64 {
    4.0
}
fn d_sigma2() -> f64 {
    2f64.sqrt()
}
fn d_tau2() -> f64 {
    6.0
}
fn d_lag() -> f64 {
    2.0
}
fn d_count() -> usize {
    5
}
fn d_spacing() -> f64 {
    10.0
}
fn d_one() -> f64 {
    1.0
}

/// An incident field with an overall amplitude factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidentFieldSpec {
    #[serde(rename = "field")]
    pub kind: IncidentKind,
    #[serde(default = "d_one")]
    pub amplitude: f64,
}

impl IncidentKind {
    /// The kebab-case config tag.
    pub fn label(&self) -> &'static str {
        match self {
            IncidentKind::PointSource { .. } => "point-source",
            IncidentKind::GaussianPlane { .. } => "gaussian-plane",
            IncidentKind::PulsePlane { .. } => "pulse-plane",
            IncidentKind::MultiPulse { .. } => "multi-pulse",
        }
    }
}

pub fn direction(theta: f64) -> Point {
    [theta.cos(), theta.sin()]
}

fn pulse(l: f64) -> f64 {
    -(4.0 * l).sin() * (-1.6 * (l - 3.0) * (l - 3.0)).exp()
}

impl IncidentFieldSpec {
    pub fn new(kind: IncidentKind) -> Self {
        IncidentFieldSpec { kind, amplitude: 1.0 }
    }

    pub fn point_source(z0: Point) -> Self {
        Self::new(IncidentKind::PointSource {
            z0,
            omega0: d_omega0(),
            sigma: d_sigma1(),
            tau0: d_tau1(),
        })
    }

    pub fn gaussian_plane(theta: f64) -> Self {
        Self::new(IncidentKind::GaussianPlane {
            theta,
            omega0: d_omega0(),
            sigma: d_sigma2(),
            tau0: d_tau2(),
        })
    }

    pub fn pulse_plane(theta: f64) -> Self {
        Self::new(IncidentKind::PulsePlane { theta, t_lag: d_lag() })
    }

    pub fn multi_pulse(theta: f64, count: usize) -> Self {
        Self::new(IncidentKind::MultiPulse {
            theta,
            t_lag: d_lag(),
            count,
            spacing: d_spacing(),
        })
    }

    pub fn scaled(mut self, a: f64) -> Self {
        self.amplitude *= a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |k: &str, m: String| Err(Error::config(format!("incident.{k}"), m));
        match self.kind {
            IncidentKind::PointSource { omega0, sigma, tau0, .. } | IncidentKind::GaussianPlane { omega0, sigma, tau0, .. } => {
                if !(sigma > 0.0) {
                    return bad("sigma", format!("must be positive, got {sigma}"));
                }
                if !omega0.is_finite() || !tau0.is_finite() {
                    return bad("omega0", "must be finite".into());
                }
            }
            IncidentKind::MultiPulse { count, spacing, .. } => {
                if count == 0 || !(spacing > 0.0) {
                    return bad("count", format!("need count > 0 and spacing > 0, got {count}, {spacing}"));
                }
            }
            IncidentKind::PulsePlane { .. } => {}
        }
        if !self.amplitude.is_finite() {
            return bad("amplitude", "must be finite".into());
        }
        Ok(())
    }

    /// Spectral class of the time signal.
    pub fn signal_class(&self) -> SignalClass {
        match self.kind {
            IncidentKind::PointSource { .. } | IncidentKind::GaussianPlane { .. } => SignalClass::Analytic,
            _ => SignalClass::Real,
        }
    }

    /// Whether time values are obtained through the inverse transform.
    pub fn needs_band(&self) -> bool {
        matches!(self.kind, IncidentKind::PointSource { .. })
    }

    /// U^i(x, ω). For ω < 0 the point source uses the conjugate Hankel
    /// function, consistent with a real-valued impulse response.
    pub fn eval_freq(&self, x: Point, omega: f64) -> Result<C64> {
        let gauss = |w0: f64, s: f64, tau: f64| {
            C64::from_polar((-(omega - w0) * (omega - w0) / (s * s)).exp(), omega * tau)
        };
        let v = match self.kind {
            IncidentKind::PointSource { z0, omega0, sigma, tau0 } => {
                let r = dist(x, z0);
                if r == 0.0 || omega == 0.0 {
                    return Err(Error::Domain(format!("point source undefined at r = {r}, omega = {omega}")));
                }
                let (h0, _) = hankel01(omega.abs() * r);
                let h0 = if omega < 0.0 { h0.conj() } else { h0 };
                C64::new(0.0, 2.5) * h0 * gauss(omega0, sigma, tau0)
            }
            IncidentKind::GaussianPlane { theta, omega0, sigma, tau0 } => {
                let d = direction(theta);
                let xd = x[0] * d[0] + x[1] * d[1];
                C64::from_polar(1.0, omega * xd) * gauss(omega0, sigma, tau0)
            }
            _ => {
                return Err(Error::config(
                    "incident.variant",
                    "the pulse variants are defined in time only and have no frequency form here",
                ))
            }
        };
        Ok(v * self.amplitude)
    }

    /// Closed-form time value; the point source has none.
    pub fn eval_time_exact(&self, x: Point, t: f64) -> Result<C64> {
        let v = match self.kind {
            IncidentKind::GaussianPlane { theta, omega0, sigma, tau0 } => {
                let d = direction(theta);
                let l = t - tau0 - (x[0] * d[0] + x[1] * d[1]);
                C64::from_polar(sigma / (2.0 * PI.sqrt()) * (-sigma * sigma * l * l / 4.0).exp(), -omega0 * l)
            }
            IncidentKind::PulsePlane { theta, t_lag } => {
                let d = direction(theta);
                C64::new(pulse(t - t_lag - (x[0] * d[0] + x[1] * d[1])), 0.0)
            }
            IncidentKind::MultiPulse { theta, t_lag, count, spacing } => {
                let d = direction(theta);
                let l = t - t_lag - (x[0] * d[0] + x[1] * d[1]);
                C64::new((0..count).map(|j| pulse(l - spacing * j as f64)).sum(), 0.0)
            }
            IncidentKind::PointSource { .. } => {
                return Err(Error::config(
                    "frequency",
                    "the point source is evaluated in time through the frequency band, which is not configured",
                ))
            }
        };
        Ok(v * self.amplitude)
    }

    /// u^i(x, t): closed form for the pulses, inverse transform over `band`
    /// for the spectrally defined fields.
    pub fn eval_time(&self, x: Point, t: f64, band: Option<&FrequencyGrid>) -> Result<C64> {
        Ok(self.traces(&[x], &[t], band)?[0])
    }

    /// u^i at every (time, point) pair, row-major times × points.
    pub fn traces(&self, points: &[Point], times: &[f64], band: Option<&FrequencyGrid>) -> Result<Vec<C64>> {
        match self.kind {
            IncidentKind::PointSource { .. } | IncidentKind::GaussianPlane { .. } => {
                let grid = band.ok_or_else(|| {
                    Error::config("frequency", "a frequency band is required to evaluate this incident field in time")
                })?;
                let nodes = grid.nodes();
                let mut spec = vec![C64::new(0.0, 0.0); nodes.len() * points.len()];
                for (row, &w) in spec.chunks_mut(points.len().max(1)).zip(&nodes) {
                    for (v, &x) in row.iter_mut().zip(points) {
                        *v = self.eval_freq(x, w)?;
                    }
                }
                if points.is_empty() {
                    return Ok(vec![]);
                }
                InverseFt::new(grid, times)?.apply_block(&spec, points.len())
            }
            _ => {
                let mut out = Vec::with_capacity(times.len() * points.len());
                for &t in times {
                    for &x in points {
                        out.push(self.eval_time_exact(x, t)?);
                    }
                }
                Ok(out)
            }
        }
    }

    /// u^i at nodes × frequencies, row-major frequencies × points.
    pub fn spectra(&self, points: &[Point], freqs: &[f64]) -> Result<Vec<C64>> {
        let mut out = Vec::with_capacity(freqs.len() * points.len());
        for &w in freqs {
            for &x in points {
                out.push(self.eval_freq(x, w)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftransform::FrequencyGrid;
    use proptest::prelude::*;

    fn band() -> FrequencyGrid {
        FrequencyGrid::new(5.0, 25.0, 501, None, SignalClass::Analytic).unwrap()
    }

    #[test]
    fn plane_wave_peak_and_width() {
        let f = IncidentFieldSpec::gaussian_plane(0.0);
        let v = f.eval_freq([0.0, 3.0], 15.0).unwrap();
        assert!((v - C64::from_polar(1.0, 90.0)).norm() < 1e-13);
        let s = 2f64.sqrt();
        let p = f.eval_freq([0.4, 0.0], 15.0).unwrap().norm();
        for w in [15.0 - s, 15.0 + s] {
            assert!((f.eval_freq([0.4, 0.0], w).unwrap().norm() / p - (-1f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn point_source_oracle() {
        let f = IncidentFieldSpec::point_source([0.0, 0.0]);
        let v = f.eval_freq([0.6, 0.8], 1.0).unwrap();
        let exact = C64::new(8.346_570_694_468_328e-22, -5.680_319_219_655_019e-22);
        assert!((v - exact).norm() < 1e-13 * exact.norm(), "{v}");
        assert!(f.eval_freq([0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn point_source_in_time() {
        let f = IncidentFieldSpec::point_source([0.0, 0.0]);
        let g = band();
        let cases = [
            ([1.0, 0.0], 5.0, C64::new(0.207_837_620_373_039_1, 0.204_363_421_724_112_23)),
            ([0.0, 0.7], 4.9, C64::new(-0.200_489_672_968_325_98, -0.267_975_781_300_101_56)),
            ([-1.2, 1.6], 6.3, C64::new(-0.159_894_463_681_378_18, 0.099_570_912_927_933_82)),
        ];
        for (x, t, e) in cases {
            let v = f.eval_time(x, t, Some(&g)).unwrap();
            assert!((v - e).norm() < 1e-8, "{v} vs {e}");
        }
        assert!(f.eval_time([1.0, 0.0], 5.0, None).is_err());
    }

    #[test]
    fn plane_wave_transform_matches_closed_form() {
        let f = IncidentFieldSpec::gaussian_plane(0.3);
        let g = band();
        let pts = [[0.0, 0.0], [0.5, -0.2], [-1.0, 1.0]];
        let times: Vec<f64> = (0..60).map(|k| -2.0 + 0.25 * k as f64).collect();
        let tr = f.traces(&pts, &times, Some(&g)).unwrap();
        for (i, &t) in times.iter().enumerate() {
            for (j, &x) in pts.iter().enumerate() {
                let e = f.eval_time_exact(x, t).unwrap();
                assert!((tr[i * 3 + j] - e).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn plane_wave_is_causal_at_origin() {
        let f = IncidentFieldSpec::gaussian_plane(0.0);
        for k in 0..100 {
            let t = -k as f64 * 0.1;
            assert!(f.eval_time_exact([0.0, 0.0], t).unwrap().norm() < 1e-8);
        }
    }

    #[test]
    fn pulse_values() {
        let f = IncidentFieldSpec::pulse_plane(0.0);
        // ℓ = t − 2 − x1
        let v = f.eval_time_exact([1.0, 5.0], 6.0).unwrap();
        assert!((v.re - 0.536_572_918_000_434_97).abs() < 1e-15);
        assert!(f.eval_time_exact([0.0, 0.0], 5.0 + 10.0).unwrap().norm() < 1e-10);
        assert!(f.eval_time_exact([0.0, 0.0], 5.0 - 10.0).unwrap().norm() < 1e-10);
        assert!(f.eval_freq([0.0, 0.0], 3.0).is_err());
        let m = IncidentFieldSpec::multi_pulse(0.0, 5);
        let v = m.eval_time_exact([0.0, 0.0], 25.0).unwrap();
        assert!((v.re - 0.536_572_918_000_434_97).abs() < 1e-12);
    }

    #[test]
    fn zero_amplitude_gives_zero_trace() {
        let f = IncidentFieldSpec::gaussian_plane(1.0).scaled(0.0);
        let tr = f.traces(&[[0.1, 0.2], [0.3, 0.0]], &[0.0, 3.0, 6.0], Some(&band())).unwrap();
        assert!(tr.iter().all(|v| v.norm() == 0.0));
    }

    // fourth-order residual of u_tt − Δu on a small space-time stencil
    fn wave_residual(u: impl Fn(Point, f64) -> f64, x: Point, t: f64, h: f64) -> f64 {
        let d2 = |f: &dyn Fn(f64) -> f64| (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
        let utt = d2(&|s| u(x, t + s));
        let uxx = d2(&|s| u([x[0] + s, x[1]], t));
        let uyy = d2(&|s| u([x[0], x[1] + s], t));
        (utt - uxx - uyy).abs()
    }

    #[test]
    fn wave_equation_residual() {
        let f = IncidentFieldSpec::multi_pulse(0.7, 2);
        for &(x, t) in &[([0.1, 0.2], 4.0), ([-0.5, 0.3], 5.5), ([0.0, 0.0], 15.2)] {
            let r = wave_residual(|x, t| f.eval_time_exact(x, t).unwrap().re, x, t, 1e-3);
            assert!(r < 1e-4, "{r}");
        }
        let g = band();
        let planes = IncidentFieldSpec::gaussian_plane(-0.4);
        let source = IncidentFieldSpec::point_source([2.0, 1.0]);
        for f in [planes, source] {
            for &(x, t) in &[([0.1, 0.2], 6.0), ([-0.5, 0.3], 7.0)] {
                for part in [0, 1] {
                    let u = |x: Point, t: f64| {
                        let v = f.eval_time(x, t, Some(&g)).unwrap();
                        if part == 0 {
                            v.re
                        } else {
                            v.im
                        }
                    };
                    let r = wave_residual(u, x, t, 2e-3);
                    assert!(r < 1e-4, "{:?} {r}", f.kind);
                }
            }
        }
    }

    #[test]
    fn config_round_trip() {
        let f: IncidentFieldSpec = serde_json::from_str(r#"{"field":{"variant":"gaussian-plane","theta":0.0}}"#).unwrap();
        assert_eq!(f, IncidentFieldSpec::gaussian_plane(0.0));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<IncidentFieldSpec>(&s).unwrap(), f);
        assert!(serde_json::from_str::<IncidentFieldSpec>(r#"{"field":{"variant":"pulse-plane","bogus":1}}"#).is_err());
    }

    proptest! {
        #[test]
        fn plane_pulse_translation_covariance(x0 in -2.0f64..2.0, x1 in -2.0f64..2.0, s in -3.0f64..3.0, th in 0.0f64..6.3) {
            let f = IncidentFieldSpec::pulse_plane(th);
            let d = direction(th);
            let a = f.eval_time_exact([x0, x1], 5.0).unwrap().re;
            let b = f.eval_time_exact([x0 + s * d[0], x1 + s * d[1]], 5.0 + s).unwrap().re;
            prop_assert!((a - b).abs() < 1e-12);
            let c = f.eval_time_exact([x0 - s * d[1], x1 + s * d[0]], 5.0).unwrap().re;
            prop_assert!((a - c).abs() < 1e-12);
        }
    }
}
