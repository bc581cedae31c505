//! Inverse transform g(t) = (1/2π) ∫ G(ω) e^{−iωt} dω as a fixed weight
//! matrix over a set of evaluation times.

use super::grid::{FrequencyGrid, SignalClass};
use crate::error::{Error, Result};
use crate::linalg::gemm;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct InverseFt {
    class: SignalClass,
    times: Vec<f64>,
    nodes: usize,
    /// Row-major times × nodes.
    weights: Vec<C64>,
}

impl InverseFt {
    pub fn new(grid: &FrequencyGrid, times: &[f64]) -> Result<Self> {
        let nodes = grid.len();
        let p = grid.positive_count();
        let lc = grid.low_count();
        let scale = match grid.class {
            SignalClass::Real => 1.0 / PI,
            _ => 0.5 / PI,
        };
        let mut weights = vec![C64::new(0.0, 0.0); times.len() * nodes];
        weights
            .par_chunks_mut(nodes)
            .zip(times.par_iter())
            .try_for_each(|(row, &t)| -> Result<()> {
                let half = |t: f64, w: &mut [C64]| -> Result<()> {
                    let s = C64::new(scale, 0.0);
                    if let Some(l) = grid.low_band() {
                        l.accumulate(t, s, &mut w[..=lc]);
                    }
                    grid.rule().accumulate(grid.count, grid.lo, grid.spacing(), t, s, &mut w[lc..p])
                };
                half(t, &mut row[..p])?;
                if grid.class == SignalClass::General {
                    // ∫_{−W}^0 G(ω) e^{−iωt} dω = ∫_0^W G(−ν) e^{iνt} dν
                    half(-t, &mut row[p..])?;
                }
                Ok(())
            })?;
        Ok(InverseFt {
            class: grid.class,
            times: times.to_vec(),
            nodes,
            weights,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// g at every time for one spectrum given on the grid nodes.
    pub fn apply(&self, values: &[C64]) -> Result<Vec<C64>> {
        self.apply_block(values, 1)
    }

    /// Columns of a row-major nodes × m block transformed to times × m.
    pub fn apply_block(&self, values: &[C64], m: usize) -> Result<Vec<C64>> {
        if values.len() != self.nodes * m {
            return Err(Error::config(
                "frequency",
                format!("expected {} spectral values, got {}", self.nodes * m, values.len()),
            ));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.times.len() * m];
        gemm(self.times.len(), self.nodes, m, &self.weights, values, &mut out, false);
        if self.class == SignalClass::Real {
            out.iter_mut().for_each(|v| v.im = 0.0);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftransform::LowBand;

    // G(ω) = e^{−(ω−ω0)²/σ²}  ⇔  g(t) = σ/(2√π) e^{−iω0 t} e^{−σ²t²/4}
    fn gaussian_pair(w0: f64, sigma: f64) -> (impl Fn(f64) -> C64, impl Fn(f64) -> C64) {
        let g = move |w: f64| C64::new((-(w - w0) * (w - w0) / (sigma * sigma)).exp(), 0.0);
        let time = move |t: f64| C64::from_polar(sigma / (2.0 * PI.sqrt()) * (-sigma * sigma * t * t / 4.0).exp(), -w0 * t);
        (g, time)
    }

    #[test]
    fn gaussian_pair_analytic() {
        let (g, exact) = gaussian_pair(15.0, 2.0);
        let grid = FrequencyGrid::new(1.0, 30.0, 401, Some(LowBand::default()), SignalClass::Analytic).unwrap();
        let times = [0.0, 1.0, 10.0, 100.0, 1000.0];
        let inv = InverseFt::new(&grid, &times).unwrap();
        let vals: Vec<C64> = grid.nodes().iter().map(|&w| g(w)).collect();
        let out = inv.apply(&vals).unwrap();
        for (t, v) in times.iter().zip(&out) {
            assert!((v - exact(*t)).norm() < 1e-8, "t={t}: {v} vs {}", exact(*t));
        }
    }

    #[test]
    fn gaussian_pair_real_and_general() {
        let (g, exact) = gaussian_pair(8.0, 1.5);
        let times = [0.3, 10.0, 1000.0];
        for class in [SignalClass::Real, SignalClass::General] {
            let grid = FrequencyGrid::new(1.0, 20.0, 301, Some(LowBand::default()), class).unwrap();
            let inv = InverseFt::new(&grid, &times).unwrap();
            let vals: Vec<C64> = grid.nodes().iter().map(|&w| if w > 0.0 { g(w) } else { g(-w).conj() }).collect();
            let out = inv.apply(&vals).unwrap();
            for (t, v) in times.iter().zip(&out) {
                let e = 2.0 * exact(*t).re;
                assert!((v - e).norm() < 1e-8, "{class:?} t={t}: {v} vs {e}");
            }
        }
    }

    #[test]
    fn zero_and_shape_errors() {
        let grid = FrequencyGrid::new(5.0, 25.0, 101, None, SignalClass::Analytic).unwrap();
        let inv = InverseFt::new(&grid, &[0.0, 5.0]).unwrap();
        let out = inv.apply(&vec![C64::new(0.0, 0.0); grid.len()]).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
        assert!(inv.apply(&[C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn cost_does_not_grow_with_time() {
        let grid = FrequencyGrid::new(1.0, 20.0, 201, Some(LowBand::default()), SignalClass::Real).unwrap();
        let a = InverseFt::new(&grid, &[10.0]).unwrap();
        let b = InverseFt::new(&grid, &[1000.0]).unwrap();
        assert_eq!(a.node_count(), b.node_count());
    }

    #[test]
    fn round_trip_through_slow_transform() {
        use crate::ftransform::{SlowForward, TimeGrid, TimeWindowPartition};
        let part = TimeWindowPartition::new(10.0, 1).unwrap();
        let tg = TimeGrid::covering(-10.0, 10.0, 0.05).unwrap();
        let g = |t: f64| C64::from_polar((-t * t / 2.0).exp(), -10.0 * t);
        let trace: Vec<C64> = tg.times().iter().map(|&t| g(t)).collect();
        let grid = FrequencyGrid::new(1.0, 20.0, 301, Some(LowBand::default()), SignalClass::Analytic).unwrap();
        let spec = SlowForward::new(part, tg, &grid.nodes()).unwrap().apply(0, &trace).unwrap();
        let times = tg.times();
        let back = InverseFt::new(&grid, &times).unwrap().apply(&spec).unwrap();
        let err = times
            .iter()
            .zip(&back)
            .map(|(&t, v)| (v - g(t) * part.profile(t)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err:e}");
    }
}
