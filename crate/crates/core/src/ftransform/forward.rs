//! Slow forward transform of one window:
//! G_q(ω) = ∫_{−H}^{H} g(τ + s_q) ⊓(τ) e^{iωτ} dτ.
//!
//! The windowed samples on τ_n = −H + nΔt are expanded in a 2H-periodic
//! trigonometric polynomial and every term is integrated exactly, which
//! gives a dense frequency × sample matrix.

use super::window::{TimeGrid, TimeWindowPartition};
use crate::error::{Error, Result};
use crate::linalg::gemm;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SlowForward {
    partition: TimeWindowPartition,
    grid: TimeGrid,
    freqs: Vec<f64>,
    /// Samples per window, N = 2H/Δt.
    n: usize,
    /// Row-major freqs × N, window values folded in.
    matrix: Vec<C64>,
}

impl SlowForward {
    pub fn new(partition: TimeWindowPartition, grid: TimeGrid, freqs: &[f64]) -> Result<Self> {
        let h = partition.half_width;
        let ratio = 2.0 * h / grid.dt;
        let n = ratio.round() as usize;
        if (ratio - n as f64).abs() > 1e-6 || n < 4 {
            return Err(Error::config(
                "time.dt",
                format!("window width 2H = {} must be a multiple of dt = {}", 2.0 * h, grid.dt),
            ));
        }
        for q in 0..partition.count {
            if grid.index_of(partition.center(q) - h).is_none() {
                return Err(Error::config("time.t0", "window supports must start on the time grid"));
            }
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let taus: Vec<f64> = (0..n).map(|k| -h + k as f64 * grid.dt).collect();
        let win: Vec<f64> = taus.iter().map(|&t| partition.profile(t)).collect();
        let mut matrix = vec![C64::new(0.0, 0.0); freqs.len() * n];
        let half = n / 2;
        let sinc = |x: f64| if x.abs() < 1e-12 { 1.0 } else { x.sin() / x };
        for (row, &w) in matrix.chunks_mut(n).zip(freqs) {
            for k in 0..n {
                // mode index in (−N/2, N/2], split evenly at the Nyquist mode
                let kk = if k <= half { k as i64 } else { k as i64 - n as i64 };
                let sign = if kk.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let s = |m: i64| sinc((w + PI * m as f64 / h) * h);
                let v = if n % 2 == 0 && k == half {
                    0.5 * (s(kk) + s(-kk))
                } else {
                    s(kk)
                };
                row[k] = C64::new(sign * v, 0.0);
            }
            fft.process(row);
            let scale = 2.0 * h / n as f64;
            for (r, wv) in row.iter_mut().zip(&win) {
                *r *= scale * wv;
            }
        }
        Ok(SlowForward {
            partition,
            grid,
            freqs: freqs.to_vec(),
            n,
            matrix,
        })
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn partition(&self) -> &TimeWindowPartition {
        &self.partition
    }

    /// Grid index of the first sample of window q (may be negative).
    fn first_index(&self, q: usize) -> i64 {
        self.grid
            .index_of(self.partition.center(q) - self.partition.half_width)
            .expect("checked in new")
    }

    /// G_q at every frequency for one trace on the time grid.
    pub fn apply(&self, q: usize, trace: &[C64]) -> Result<Vec<C64>> {
        self.apply_block(q, trace, 1)
    }

    /// Spectra of several traces, returned row-major freqs × traces.
    pub fn apply_many(&self, q: usize, traces: &[&[C64]]) -> Result<Vec<C64>> {
        if let Some(t) = traces.iter().find(|t| t.len() != self.grid.n) {
            return Err(Error::config(
                "time",
                format!("trace has {} samples, grid has {}", t.len(), self.grid.n),
            ));
        }
        let m = traces.len();
        let mut block = vec![C64::new(0.0, 0.0); self.grid.n * m];
        for (j, tr) in traces.iter().enumerate() {
            for (k, v) in tr.iter().enumerate() {
                block[k * m + j] = *v;
            }
        }
        self.apply_block(q, &block, m)
    }

    /// Spectra of the columns of a row-major (grid times) × m block,
    /// returned row-major freqs × m. Samples off the grid count as zero.
    pub fn apply_block(&self, q: usize, block: &[C64], m: usize) -> Result<Vec<C64>> {
        if q >= self.partition.count {
            return Err(Error::config("time.Q", format!("window {q} out of range")));
        }
        if block.len() != self.grid.n * m {
            return Err(Error::config(
                "time",
                format!("block has {} values, expected {} x {m}", block.len(), self.grid.n),
            ));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.freqs.len() * m];
        if m == 0 {
            return Ok(out);
        }
        // window samples k ↦ grid row k0 + k; only the overlap with the grid is multiplied
        let k0 = self.first_index(q);
        let lo = (-k0).max(0) as usize;
        let hi = ((self.grid.n as i64 - k0).max(0) as usize).min(self.n);
        if lo >= hi {
            return Ok(out);
        }
        let rows = hi - lo;
        let first = (k0 + lo as i64) as usize;
        let b = &block[first * m..(first + rows) * m];
        if rows == self.n {
            gemm(self.freqs.len(), rows, m, &self.matrix, b, &mut out, false);
        } else {
            let sub: Vec<C64> = (0..self.freqs.len())
                .flat_map(|f| self.matrix[f * self.n + lo..f * self.n + hi].iter().copied())
                .collect();
            gemm(self.freqs.len(), rows, m, &sub, b, &mut out, false);
        }
        Ok(out)
    }
}
