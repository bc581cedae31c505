//! Precomputed target/source geometry for repeated potential evaluation at
//! many frequencies.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::CMatrix;
use crate::special::kernel::{phi, phi_and_dl, sl_parts, INV_2PI};
use num_complex::Complex64 as C64;

/// Where a potential is evaluated. `on` names the parent curve and parameter
/// when the point lies on a discretized curve, which enables the log-product
/// rules for nearby panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub pos: Point,
    pub on: Option<(usize, f64)>,
}

impl Target {
    pub fn free(pos: Point) -> Self {
        Target { pos, on: None }
    }

    pub fn on_curve(pos: Point, curve_id: usize, param: f64) -> Self {
        Target { pos, on: Some((curve_id, param)) }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Block {
    /// Single layer over one panel: entry = -(1/2π) J0(κr) α + b rem(κ, r).
    Split { target: usize, col0: usize, r: Vec<f64>, alpha: Vec<f64>, b: Vec<f64> },
    /// Single layer over one panel through a fine rule and an interpolation
    /// matrix (rows = fine points, cols = panel unknowns).
    Fine { target: usize, col0: usize, ncols: usize, r: Vec<f64>, interp: Vec<f64> },
    /// Combined field D − iηS from a trapezoidal rule on a closed curve;
    /// `a` = (x − y)·n and `s` = |y'| with the weight folded into both.
    Trapezoid { target: usize, r: Vec<f64>, a: Vec<f64>, s: Vec<f64> },
    /// Same on an upsampled grid, mapped back through trigonometric interpolation.
    TrapezoidFine { target: usize, r: Vec<f64>, a: Vec<f64>, s: Vec<f64>, interp: Vec<f64> },
}

/// A linear map from densities to field values at a set of targets.
#[derive(Debug, Clone)]
pub struct EvalPlan {
    pub n_targets: usize,
    pub n_unknowns: usize,
    pub(crate) blocks: Vec<Block>,
}

/// CFIE coupling parameter used throughout.
#[inline]
pub fn cfie_eta(kappa: f64) -> f64 {
    kappa.abs().max(1.0)
}

impl EvalPlan {
    /// Dense evaluation matrix at angular frequency ω (targets × unknowns).
    pub fn matrix(&self, omega: f64, c: f64) -> Result<CMatrix> {
        if omega == 0.0 || !omega.is_finite() || !(c > 0.0) {
            return Err(Error::Domain(format!("cannot evaluate potentials at omega = {omega}, c = {c}")));
        }
        let kappa = omega.abs() / c;
        let eta = cfie_eta(kappa);
        let mut m = CMatrix::zeros(self.n_targets, self.n_unknowns);
        let mut tmp: Vec<C64> = Vec::new();
        for blk in &self.blocks {
            match blk {
                Block::Split { target, col0, r, alpha, b } => {
                    let row = m.row_mut(*target);
                    for l in 0..r.len() {
                        let (j0, rem) = sl_parts(kappa, r[l]);
                        row[col0 + l] += rem * b[l] - C64::new(INV_2PI * j0 * alpha[l], 0.0);
                    }
                }
                Block::Fine { target, col0, ncols, r, interp } => {
                    let row = m.row_mut(*target);
                    for (g, &rg) in r.iter().enumerate() {
                        let f = phi(kappa, rg);
                        let w = &interp[g * ncols..(g + 1) * ncols];
                        for l in 0..*ncols {
                            row[col0 + l] += f * w[l];
                        }
                    }
                }
                Block::Trapezoid { target, r, a, s } => {
                    let row = m.row_mut(*target);
                    for j in 0..r.len() {
                        let (p, g) = phi_and_dl(kappa, r[j]);
                        row[j] += g * a[j] - C64::new(0.0, eta) * p * s[j];
                    }
                }
                Block::TrapezoidFine { target, r, a, s, interp } => {
                    let n = self.n_unknowns;
                    tmp.clear();
                    tmp.extend(r.iter().enumerate().map(|(g, &rg)| {
                        let (p, d) = phi_and_dl(kappa, rg);
                        d * a[g] - C64::new(0.0, eta) * p * s[g]
                    }));
                    let row = m.row_mut(*target);
                    for (g, v) in tmp.iter().enumerate() {
                        let w = &interp[g * n..(g + 1) * n];
                        for j in 0..n {
                            row[j] += v * w[j];
                        }
                    }
                }
            }
        }
        if omega < 0.0 {
            for z in m.data.iter_mut() {
                *z = z.conj();
            }
        }
        Ok(m)
    }
}

