//! Nyström discretization of the combined-field equation
//! (½I + K − iηV)ψ = F on a smooth closed curve, with logarithmic splits
//! handled by trigonometric product weights.

use super::plan::{cfie_eta, Block, EvalPlan, Target};
use super::{Discretization, Representation};
use crate::error::{Error, Result};
use crate::geometry::{dist, CurvePoint, ParametricCurve, Point};
use crate::linalg::CMatrix;
use crate::special::kernel::{dl_parts, phi_and_dl, sl_parts, INV_2PI};
use crate::special::EULER_GAMMA;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Largest upsampling factor used for targets close to the curve.
pub const MAX_UPSAMPLE: usize = 16;
/// Targets closer than this many (upsampled) node spacings are rejected.
const NEAR_RATIO: f64 = 4.5;

#[derive(Debug, Clone, Copy)]
enum Mode {
    Single,
    Double,
    Cfie(f64),
}

#[derive(Debug, Clone)]
pub struct ClosedCurveDiscretization {
    curve: ParametricCurve,
    curve_id: usize,
    n: usize,
    params: Vec<f64>,
    pts: Vec<CurvePoint>,
    normals: Vec<Point>,
    /// Product weights by index difference.
    kress: Vec<f64>,
    /// ln(4 sin²(kπ/2n)) by index difference (k ≠ 0).
    logs: Vec<f64>,
    spacing: f64,
}

impl ClosedCurveDiscretization {
    /// `nodes` equispaced parameters on a closed curve; `nodes` must be even and ≥ 8.
    pub fn new(curve: ParametricCurve, curve_id: usize, nodes: usize) -> Result<Self> {
        if !curve.is_closed() {
            return Err(Error::Domain("CFIE discretization needs a closed curve".into()));
        }
        if nodes < 8 || nodes % 2 != 0 {
            return Err(Error::Config {
                key: "nodes".into(),
                msg: format!("closed-curve node count must be even and >= 8, got {nodes}"),
            });
        }
        let n = nodes / 2;
        let params: Vec<f64> = (0..nodes).map(|j| PI * j as f64 / n as f64).collect();
        let pts: Vec<CurvePoint> = params.iter().map(|&t| curve.at(t)).collect();
        let normals = pts.iter().map(|p| curve.scaled_normal(p)).collect();
        let kress = (0..nodes)
            .map(|k| {
                let t = PI * k as f64 / n as f64;
                let mut s = 0.0;
                for m in 1..n {
                    s += (m as f64 * t).cos() / m as f64;
                }
                -2.0 * PI / n as f64 * s - PI / (n * n) as f64 * (n as f64 * t).cos()
            })
            .collect();
        let logs = (0..nodes)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    (4.0 * (0.5 * PI * k as f64 / n as f64).sin().powi(2)).ln()
                }
            })
            .collect();
        let spacing = pts
            .iter()
            .zip(pts.iter().cycle().skip(1))
            .map(|(a, b)| dist(a.pos, b.pos))
            .fold(0.0, f64::max);
        Ok(ClosedCurveDiscretization {
            curve,
            curve_id,
            n,
            params,
            pts,
            normals,
            kress,
            logs,
            spacing,
        })
    }

    pub fn curve(&self) -> &ParametricCurve {
        &self.curve
    }

    pub fn curve_id(&self) -> usize {
        self.curve_id
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn positions(&self) -> Vec<Point> {
        self.pts.iter().map(|p| p.pos).collect()
    }

    /// Largest distance between consecutive nodes.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Nyström matrix of V alone.
    pub fn assemble_single_layer(&self, omega: f64, c: f64) -> Result<CMatrix> {
        self.assemble(omega, c, Mode::Single)
    }

    /// Nyström matrix of K alone.
    pub fn assemble_double_layer(&self, omega: f64, c: f64) -> Result<CMatrix> {
        self.assemble(omega, c, Mode::Double)
    }

    /// Nyström matrix of ½I + K − iηV.
    pub fn assemble_cfie(&self, omega: f64, c: f64, eta: f64) -> Result<CMatrix> {
        self.assemble(omega, c, Mode::Cfie(eta))
    }

    fn assemble(&self, omega: f64, c: f64, mode: Mode) -> Result<CMatrix> {
        if omega == 0.0 || !omega.is_finite() || !(c > 0.0) {
            return Err(Error::Domain(format!("cannot assemble at omega = {omega}, c = {c}")));
        }
        let kappa = omega.abs() / c;
        let nn = 2 * self.n;
        let w = PI / self.n as f64;
        let mut m = CMatrix::zeros(nn, nn);
        for i in 0..nn {
            let x = &self.pts[i];
            let row = m.row_mut(i);
            for j in 0..nn {
                let y = &self.pts[j];
                let k = (i + nn - j) % nn;
                let sp = y.speed();
                let (v1, v2, k1, k2);
                if i == j {
                    v1 = -0.5 * INV_2PI * sp;
                    v2 = C64::new(-INV_2PI * ((0.5 * kappa * sp).ln() + EULER_GAMMA), 0.25) * sp;
                    k1 = 0.0;
                    let nrm = self.normals[i];
                    k2 = C64::new(0.5 * INV_2PI * (x.d2[0] * nrm[0] + x.d2[1] * nrm[1]) / (sp * sp), 0.0);
                } else {
                    let r = dist(x.pos, y.pos);
                    let nrm = self.normals[j];
                    let a = (x.pos[0] - y.pos[0]) * nrm[0] + (x.pos[1] - y.pos[1]) * nrm[1];
                    let (j0, _) = sl_parts(kappa, r);
                    let (j1r, _) = dl_parts(kappa, r);
                    let (p, g) = phi_and_dl(kappa, r);
                    v1 = -0.5 * INV_2PI * j0 * sp;
                    v2 = p * sp - v1 * self.logs[k];
                    k1 = -0.5 * INV_2PI * kappa * j1r * a;
                    k2 = g * a - k1 * self.logs[k];
                }
                let vv = || v2 * w + v1 * self.kress[k];
                let kk = || k2 * w + k1 * self.kress[k];
                row[j] = match mode {
                    Mode::Single => vv(),
                    Mode::Double => kk(),
                    Mode::Cfie(eta) => {
                        let d = if i == j { 0.5 } else { 0.0 };
                        kk() + d - C64::new(0.0, eta) * vv()
                    }
                };
            }
        }
        if omega < 0.0 {
            for z in m.data.iter_mut() {
                *z = z.conj();
            }
        }
        Ok(m)
    }

    /// Distance from `x` to the nearest node.
    fn node_distance(&self, x: Point) -> f64 {
        self.pts.iter().map(|p| dist(p.pos, x)).fold(f64::INFINITY, f64::min)
    }

    fn target_block(&self, idx: usize, x: Point) -> Result<Block> {
        let d = self.node_distance(x);
        let mut f = 1usize;
        while d < NEAR_RATIO * self.spacing / f as f64 {
            f *= 2;
            if f > MAX_UPSAMPLE {
                return Err(Error::Domain(format!(
                    "target ({}, {}) at distance {d:.3e} is too close to the curve for the available upsampling",
                    x[0], x[1]
                )));
            }
        }
        let nn = 2 * self.n;
        let g = nn * f;
        let w = PI / (self.n * f) as f64;
        let mut r = Vec::with_capacity(g);
        let mut a = Vec::with_capacity(g);
        let mut s = Vec::with_capacity(g);
        for k in 0..g {
            let t = PI * k as f64 / (self.n * f) as f64;
            let p = self.curve.at(t);
            let nrm = self.curve.scaled_normal(&p);
            r.push(dist(x, p.pos));
            a.push(w * ((x[0] - p.pos[0]) * nrm[0] + (x[1] - p.pos[1]) * nrm[1]));
            s.push(w * p.speed());
        }
        if f == 1 {
            return Ok(Block::Trapezoid { target: idx, r, a, s });
        }
        let mut interp = vec![0.0; g * nn];
        let n = self.n as f64;
        for k in 0..g {
            let t = PI * k as f64 / (self.n * f) as f64;
            for j in 0..nn {
                let u = t - self.params[j];
                let h = 0.5 * u;
                interp[k * nn + j] = if h.sin().abs() < 1e-14 {
                    1.0
                } else {
                    (n * u).sin() * (h.cos() / h.sin()) / (2.0 * n)
                };
            }
        }
        Ok(Block::TrapezoidFine { target: idx, r, a, s, interp })
    }

    /// Combined field (D − iηS)ψ at off-curve points.
    pub fn eval_combined(&self, density: &[C64], omega: f64, c: f64, targets: &[Point]) -> Result<Vec<C64>> {
        let t: Vec<Target> = targets.iter().map(|&p| Target::free(p)).collect();
        let m = self.plan(&t)?.matrix(omega, c)?;
        let mut out = vec![C64::new(0.0, 0.0); targets.len()];
        m.matvec(density, &mut out);
        Ok(out)
    }
}

impl Discretization for ClosedCurveDiscretization {
    fn unknowns(&self) -> usize {
        2 * self.n
    }

    fn collocation(&self) -> Vec<Target> {
        self.pts
            .iter()
            .zip(&self.params)
            .map(|(p, &t)| Target::on_curve(p.pos, self.curve_id, t))
            .collect()
    }

    fn system(&self, omega: f64, c: f64) -> Result<CMatrix> {
        self.assemble_cfie(omega, c, cfie_eta(omega / c))
    }

    fn plan(&self, targets: &[Target]) -> Result<EvalPlan> {
        let mut blocks = Vec::with_capacity(targets.len());
        for (i, t) in targets.iter().enumerate() {
            if matches!(t.on, Some((id, _)) if id == self.curve_id) {
                return Err(Error::Domain("closed-curve potentials are not evaluated on their own curve".into()));
            }
            blocks.push(self.target_block(i, t.pos)?);
        }
        Ok(EvalPlan {
            n_targets: targets.len(),
            n_unknowns: 2 * self.n,
            blocks,
        })
    }

    fn representation(&self) -> Representation {
        Representation::Closed
    }
}
