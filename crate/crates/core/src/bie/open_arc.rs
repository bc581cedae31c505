//! Single-layer discretization on open arcs.
//!
//! The arc is split into integration panels whose ends fall on the arc
//! endpoints and on the endpoints of the neighbouring patches. On every
//! panel the density is represented at first-kind Chebyshev points in a
//! variable s, mapped to the panel parameter θ ∈ [−1, 1] by a cosine change
//! of variables that vanishes to first order at the flagged ends. The
//! unknown is ψ̃(s) = Ψ(θ(s)) θ′(s) with Ψ the density per unit arc length;
//! the inverse-square-root edge singularity of Ψ is absorbed by θ′, so ψ̃ is
//! smooth and no separate endpoint weight is needed.
//!
//! Self and near-self interactions use product integration against
//! ln|θ(s) − θ_x|; off-curve targets near a panel use adaptive oversampling.

use super::plan::{Block, EvalPlan, Target};
use super::{Discretization, Representation};
use crate::error::{Error, Result};
use crate::geometry::{dist, ParametricCurve, Point};
use crate::linalg::CMatrix;
use crate::quad::{cheb1_coefficients, fejer1_weights, gauss_legendre, Barycentric};
use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

/// Which ends of a panel carry a cosine change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CovSelector {
    None,
    Both,
    Left,
    Right,
}

impl CovSelector {
    pub fn from_flags(left: bool, right: bool) -> Self {
        match (left, right) {
            (false, false) => CovSelector::None,
            (true, true) => CovSelector::Both,
            (true, false) => CovSelector::Left,
            (false, true) => CovSelector::Right,
        }
    }

    fn code(self) -> u8 {
        self as u8
    }
}

/// θ(s) and θ′(s) for s ∈ [−1, 1].
pub fn cov_theta(s: f64, selector: CovSelector) -> (f64, f64) {
    match selector {
        CovSelector::None => (s, 1.0),
        CovSelector::Both => {
            let (sn, cs) = (FRAC_PI_2 * s).sin_cos();
            (sn, FRAC_PI_2 * cs)
        }
        CovSelector::Left => {
            let (sn, cs) = (FRAC_PI_4 * (1.0 + s)).sin_cos();
            (1.0 - 2.0 * cs, FRAC_PI_2 * sn)
        }
        CovSelector::Right => {
            let (sn, cs) = (FRAC_PI_4 * (1.0 - s)).sin_cos();
            (2.0 * cs - 1.0, FRAC_PI_2 * sn)
        }
    }
}

/// Inverse of [`cov_theta`] on [−1, 1].
pub fn cov_inverse(theta: f64, selector: CovSelector) -> f64 {
    let t = theta.clamp(-1.0, 1.0);
    match selector {
        CovSelector::None => t,
        CovSelector::Both => t.asin() / FRAC_PI_2,
        CovSelector::Left => ((1.0 - t) / 2.0).acos() / FRAC_PI_4 - 1.0,
        CovSelector::Right => 1.0 - ((1.0 + t) / 2.0).acos() / FRAC_PI_4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    /// Parent parameters of the panel ends (lifted, lo < hi).
    pub lo: f64,
    pub hi: f64,
    pub selector: CovSelector,
    pub length: f64,
}

impl Panel {
    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn half(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// One collocation/quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcNode {
    pub panel: usize,
    pub s: f64,
    pub theta: f64,
    pub dtheta: f64,
    /// Parent parameter.
    pub tau: f64,
    pub pos: Point,
    /// |dy/dθ| for the panel parameter θ.
    pub sp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenArcParams {
    pub nodes_per_panel: usize,
    /// Upper bound on the arc length of a panel.
    pub max_panel_length: f64,
    /// Targets farther than this multiple of the panel length use the plain rule.
    pub far_ratio: f64,
}

impl Default for OpenArcParams {
    fn default() -> Self {
        OpenArcParams {
            nodes_per_panel: 40,
            max_panel_length: f64::INFINITY,
            far_ratio: 0.5,
        }
    }
}

impl OpenArcParams {
    /// Panels of at most `wavelengths` wavelengths at wavenumber `kappa_max`.
    pub fn for_wavenumber(kappa_max: f64, wavelengths: f64) -> Self {
        OpenArcParams {
            max_panel_length: wavelengths * 2.0 * PI / kappa_max.abs().max(1e-12),
            ..Default::default()
        }
    }
}

/// Parameter targets within this many half-panel lengths use the log-product rule.
const NEAR_THETA: f64 = 3.0;
/// Ratio of the graded mesh used for the logarithmic moments.
const GRADING: f64 = 0.15;
const GL_ORDER: usize = 20;
const FINE_GL: usize = 16;

/// Gauss–Legendre order that integrates a degree p − 1 basis exactly, with
/// headroom for the smooth factor.
fn gl_order(min: usize, p: usize) -> usize {
    min.max(p / 2 + 8)
}

#[derive(Debug, Clone)]
pub struct OpenArcDiscretization {
    curve: ParametricCurve,
    curve_id: usize,
    arc: (f64, f64),
    params: OpenArcParams,
    panels: Vec<Panel>,
    nodes: Vec<ArcNode>,
    bary: Barycentric,
    fejer: Vec<f64>,
}

impl OpenArcDiscretization {
    /// Discretizes the parameter interval `arc` of `curve`. The arc ends and
    /// the `breakpoints` (interior parameters, typically neighbouring patch
    /// ends) are treated as singular points of the density.
    pub fn new(
        curve: ParametricCurve,
        curve_id: usize,
        arc: (f64, f64),
        breakpoints: &[f64],
        params: OpenArcParams,
    ) -> Result<Self> {
        let (a, b) = arc;
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDecomposition(format!("empty arc [{a}, {b}]")));
        }
        if curve.is_closed() {
            if b - a >= 2.0 * PI {
                return Err(Error::InvalidDecomposition("open arc covers the whole closed curve".into()));
            }
        } else {
            let (ca, cb) = curve.interval();
            let slack = 1e-12 * (cb - ca);
            if a < ca - slack || b > cb + slack {
                return Err(Error::ParameterDomain {
                    param: "arc",
                    value: if a < ca { a } else { b },
                    lo: ca,
                    hi: cb,
                });
            }
        }
        if params.nodes_per_panel < 4 {
            return Err(Error::config("nodes_per_panel", "at least 4 nodes per panel are required"));
        }
        if !(params.max_panel_length > 0.0) || !(params.far_ratio > 0.0) {
            return Err(Error::config("max_panel_length", "panel length and far ratio must be positive"));
        }
        let mut cuts = vec![a];
        let mut bp: Vec<f64> = breakpoints.to_vec();
        bp.sort_by(|x, y| x.total_cmp(y));
        for &t in &bp {
            if t <= a || t >= b {
                return Err(Error::InvalidDecomposition(format!("breakpoint {t} not inside ({a}, {b})")));
            }
            cuts.push(t);
        }
        cuts.push(b);
        let mut panels = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let len = curve.arc_length(lo, hi);
            let m = ((len / params.max_panel_length).ceil() as usize).max(1);
            for k in 0..m {
                let plo = lo + (hi - lo) * k as f64 / m as f64;
                let phi = if k + 1 == m { hi } else { lo + (hi - lo) * (k + 1) as f64 / m as f64 };
                panels.push(Panel {
                    lo: plo,
                    hi: phi,
                    selector: CovSelector::from_flags(k == 0, k + 1 == m),
                    length: curve.arc_length(plo, phi),
                });
            }
        }
        let p = params.nodes_per_panel;
        let bary = Barycentric::cheb1(p);
        let fejer = fejer1_weights(p);
        let mut nodes = Vec::with_capacity(panels.len() * p);
        for (k, pn) in panels.iter().enumerate() {
            for &s in &bary.nodes {
                let (theta, dtheta) = cov_theta(s, pn.selector);
                let tau = pn.mid() + pn.half() * theta;
                let cp = curve.at(tau);
                nodes.push(ArcNode {
                    panel: k,
                    s,
                    theta,
                    dtheta,
                    tau,
                    pos: cp.pos,
                    sp: pn.half() * cp.speed(),
                });
            }
        }
        Ok(OpenArcDiscretization {
            curve,
            curve_id,
            arc,
            params,
            panels,
            nodes,
            bary,
            fejer,
        })
    }

    pub fn curve(&self) -> &ParametricCurve {
        &self.curve
    }

    pub fn curve_id(&self) -> usize {
        self.curve_id
    }

    pub fn arc(&self) -> (f64, f64) {
        self.arc
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn nodes(&self) -> &[ArcNode] {
        &self.nodes
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.params.nodes_per_panel
    }

    /// V matrix at collocation points (the system of the open-arc equation).
    pub fn assemble_open_arc_v(&self, omega: f64, c: f64) -> Result<CMatrix> {
        self.system(omega, c)
    }

    /// Ψ at the nodes (density per unit arc length) from ψ̃.
    pub fn physical_density(&self, psi: &[C64]) -> Vec<C64> {
        psi.iter().zip(&self.nodes).map(|(v, n)| v / n.dtheta).collect()
    }

    /// Largest relative l2 mass of the last quartile of Chebyshev coefficients
    /// of ψ̃ over the panels with a flagged end, where the CoV acts.
    pub fn tail_mass(&self, psi: &[C64]) -> f64 {
        let p = self.params.nodes_per_panel;
        psi.chunks(p)
            .zip(&self.panels)
            .filter(|(_, pn)| pn.selector != CovSelector::None)
            .map(|(v, _)| quartile_tail(&cheb1_coefficients(v)))
            .fold(0.0, f64::max)
    }

    /// Same measure for Ψ(θ) sampled at Chebyshev points in θ, for panels
    /// with at least one flagged end (where Ψ is singular).
    pub fn tail_mass_in_theta(&self, psi: &[C64]) -> f64 {
        let p = self.params.nodes_per_panel;
        let mut worst: f64 = 0.0;
        let mut b = vec![0.0; p];
        for (k, pn) in self.panels.iter().enumerate() {
            if pn.selector == CovSelector::None {
                continue;
            }
            let v = &psi[k * p..(k + 1) * p];
            let samples: Vec<C64> = self
                .bary
                .nodes
                .iter()
                .map(|&theta| {
                    let s = cov_inverse(theta, pn.selector);
                    self.bary.basis(s, &mut b);
                    let val: C64 = v.iter().zip(&b).map(|(x, w)| x * w).sum();
                    val / cov_theta(s, pn.selector).1
                })
                .collect();
            worst = worst.max(quartile_tail(&cheb1_coefficients(&samples)));
        }
        worst
    }

    /// Single-layer potential S[Ψ] at arbitrary points.
    pub fn eval_single_layer(&self, psi: &[C64], omega: f64, c: f64, targets: &[Target]) -> Result<Vec<C64>> {
        let m = self.plan(targets)?.matrix(omega, c)?;
        let mut out = vec![C64::new(0.0, 0.0); targets.len()];
        m.matvec(psi, &mut out);
        Ok(out)
    }

    /// Parameter of `tau` relative to panel `k` (θ = ±1 at the panel ends),
    /// using the periodic lift on closed parents.
    fn relative_theta(&self, k: usize, tau: f64) -> f64 {
        let pn = &self.panels[k];
        let mid = pn.mid();
        let t = if self.curve.is_closed() {
            mid + (tau - mid + PI).rem_euclid(2.0 * PI) - PI
        } else {
            tau
        };
        (t - mid) / pn.half()
    }

    /// W_l(θ_x) = ∫ ln|θ(s) − θ_x| L_l(s) ds.
    fn log_weights(&self, selector: CovSelector, theta_x: f64) -> Vec<f64> {
        let p = self.params.nodes_per_panel;
        let (gx, gw) = gauss_legendre(gl_order(GL_ORDER, p));
        let mut out = vec![0.0; p];
        let mut basis = vec![0.0; p];
        let mut add_graded = |lo: f64, hi: f64, toward_hi: bool, out: &mut Vec<f64>| {
            let len = hi - lo;
            if len <= 0.0 {
                return;
            }
            let mut d = 1.0;
            let mut pieces = Vec::new();
            while d * len > 1e-15 {
                pieces.push((GRADING * d, d));
                d *= GRADING;
            }
            // the innermost piece [0, d·len] contributes O(d·len·|ln(d·len)|) and is dropped
            for (u0, u1) in pieces {
                let (a, b) = if toward_hi { (hi - u1 * len, hi - u0 * len) } else { (lo + u0 * len, lo + u1 * len) };
                let (c0, h) = (0.5 * (a + b), 0.5 * (b - a));
                for (x, w) in gx.iter().zip(&gw) {
                    let s = c0 + h * x;
                    let gap = (cov_theta(s, selector).0 - theta_x).abs();
                    if gap == 0.0 {
                        continue;
                    }
                    let lg = gap.ln();
                    self.bary.basis(s, &mut basis);
                    for l in 0..p {
                        out[l] += h * w * lg * basis[l];
                    }
                }
            }
        };
        if theta_x.abs() < 1.0 {
            let s_star = cov_inverse(theta_x, selector);
            add_graded(-1.0, s_star, true, &mut out);
            add_graded(s_star, 1.0, false, &mut out);
        } else {
            add_graded(-1.0, 1.0, theta_x > 0.0, &mut out);
        }
        out
    }

    fn log_block(&self, target: usize, x: Point, k: usize, theta_x: f64, w: &[f64]) -> Block {
        let p = self.params.nodes_per_panel;
        let col0 = k * p;
        let mut r = vec![0.0; p];
        let mut alpha = vec![0.0; p];
        let mut bb = vec![0.0; p];
        for l in 0..p {
            let nd = &self.nodes[col0 + l];
            let b = self.fejer[l] * nd.sp;
            let dth = (nd.theta - theta_x).abs();
            bb[l] = b;
            if dth < 1e-12 {
                r[l] = 0.0;
                alpha[l] = w[l] * nd.sp + b * nd.sp.ln();
            } else {
                r[l] = dist(x, nd.pos);
                alpha[l] = w[l] * nd.sp + b * (r[l].ln() - dth.ln());
            }
        }
        Block::Split { target, col0, r, alpha, b: bb }
    }

    fn far_block(&self, target: usize, x: Point, k: usize) -> Block {
        let p = self.params.nodes_per_panel;
        let col0 = k * p;
        let mut r = vec![0.0; p];
        let mut alpha = vec![0.0; p];
        let mut bb = vec![0.0; p];
        for l in 0..p {
            let nd = &self.nodes[col0 + l];
            r[l] = dist(x, nd.pos);
            bb[l] = self.fejer[l] * nd.sp;
            alpha[l] = bb[l] * r[l].ln();
        }
        Block::Split { target, col0, r, alpha, b: bb }
    }

    fn fine_block(&self, target: usize, x: Point, k: usize) -> Result<Block> {
        let p = self.params.nodes_per_panel;
        let pn = self.panels[k];
        let point = |s: f64| self.curve.at(pn.mid() + pn.half() * cov_theta(s, pn.selector).0).pos;
        let mut leaves = Vec::new();
        let mut stack = vec![(-1.0f64, 1.0f64, 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let mut dmin = f64::INFINITY;
            let mut len = 0.0;
            let mut prev = point(a);
            for i in 0..=8 {
                let q = point(a + (b - a) * i as f64 / 8.0);
                dmin = dmin.min(dist(q, x));
                len += dist(prev, q);
                prev = q;
            }
            if len > dmin && depth < 30 {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            } else {
                leaves.push((a, b));
            }
            if leaves.len() + stack.len() > p {
                return Err(Error::Domain(format!(
                    "target ({}, {}) is too close to the arc for oversampling by 16",
                    x[0], x[1]
                )));
            }
        }
        let (gx, gw) = gauss_legendre(gl_order(FINE_GL, p));
        let mut r = Vec::new();
        let mut interp = Vec::new();
        let mut basis = vec![0.0; p];
        for (a, b) in leaves {
            let (c0, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (xg, wg) in gx.iter().zip(&gw) {
                let s = c0 + h * xg;
                let tau = pn.mid() + pn.half() * cov_theta(s, pn.selector).0;
                let cp = self.curve.at(tau);
                r.push(dist(x, cp.pos));
                let wt = h * wg * pn.half() * cp.speed();
                self.bary.basis(s, &mut basis);
                interp.extend(basis.iter().map(|v| v * wt));
            }
        }
        Ok(Block::Fine { target, col0: k * p, ncols: p, r, interp })
    }

    fn panel_distance(&self, k: usize, x: Point) -> f64 {
        let p = self.params.nodes_per_panel;
        let pn = &self.panels[k];
        let ends = [self.curve.at(pn.lo).pos, self.curve.at(pn.hi).pos];
        self.nodes[k * p..(k + 1) * p]
            .iter()
            .map(|n| dist(n.pos, x))
            .chain(ends.iter().map(|&e| dist(e, x)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn quartile_tail(c: &[C64]) -> f64 {
    let n = c.len();
    let total: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = c[n - n / 4..].iter().map(|v| v.norm_sqr()).sum();
    (tail / total).sqrt()
}

impl Discretization for OpenArcDiscretization {
    fn unknowns(&self) -> usize {
        self.nodes.len()
    }

    fn collocation(&self) -> Vec<Target> {
        self.nodes.iter().map(|n| Target::on_curve(n.pos, self.curve_id, n.tau)).collect()
    }

    fn system(&self, omega: f64, c: f64) -> Result<CMatrix> {
        self.plan(&self.collocation())?.matrix(omega, c)
    }

    fn plan(&self, targets: &[Target]) -> Result<EvalPlan> {
        let mut cache: HashMap<(u8, u64), Arc<Vec<f64>>> = HashMap::new();
        let mut blocks = Vec::new();
        for (i, t) in targets.iter().enumerate() {
            for k in 0..self.panels.len() {
                let pn = &self.panels[k];
                if let Some((id, tau)) = t.on {
                    if id == self.curve_id {
                        let th = self.relative_theta(k, tau);
                        if th.abs() <= NEAR_THETA {
                            let key = (pn.selector.code(), th.to_bits());
                            let w = cache
                                .entry(key)
                                .or_insert_with(|| Arc::new(self.log_weights(pn.selector, th)))
                                .clone();
                            blocks.push(self.log_block(i, t.pos, k, th, &w));
                            continue;
                        }
                    }
                }
                let d = self.panel_distance(k, t.pos);
                if d >= self.params.far_ratio * pn.length {
                    blocks.push(self.far_block(i, t.pos, k));
                } else {
                    blocks.push(self.fine_block(i, t.pos, k)?);
                }
            }
        }
        Ok(EvalPlan {
            n_targets: targets.len(),
            n_unknowns: self.nodes.len(),
            blocks,
        })
    }

    fn representation(&self) -> Representation {
        Representation::CovWeighted
    }
}
