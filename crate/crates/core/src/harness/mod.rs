//! Validation and measurement: the max-norm error metric, Huygens silence
//! checks, reference traces, GMRES iteration studies and the acceptance
//! suite.

pub mod acceptance;
pub mod benchmarks;
pub mod reference;

use crate::bie::{LinearMethod, OpenArcDiscretization, OpenArcParams};
use crate::error::{Error, Result};
use crate::geometry::{DiameterMetric, ParametricCurve, PatchDecomposition, Point};
use crate::incident::direction;
use crate::linalg::{gmres, CMatrix, GmresConfig, Lu};
use crate::multiscatter::{
    build_vtilde, init_first_generation, next_generation_data, Component, Layout, PatchSolver, Resolution, RunReport,
    TraceBlock,
};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

/// Where a reference trace came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Closed-form solution, named.
    Exact { formula: String },
    /// A refined run stored under the given content hash.
    Refined { run_id: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub observation: Vec<Point>,
    pub range: (f64, f64),
    /// ε after each generation m = 1..=M, max over observation points.
    pub per_m: Vec<f64>,
    pub provenance: Provenance,
}

impl ErrorReport {
    /// ε of the final partial sum.
    pub fn epsilon(&self) -> f64 {
        self.per_m.last().copied().unwrap_or(0.0)
    }
}

/// ε = max |num − ref| over samples with t in `range` (inclusive).
pub fn error_metric(num: &[C64], reference: &[C64], times: &[f64], range: (f64, f64)) -> Result<f64> {
    if num.len() != times.len() || reference.len() != times.len() {
        return Err(Error::Shape(format!(
            "traces of length {} and {} on {} times",
            num.len(),
            reference.len(),
            times.len()
        )));
    }
    let mut any = false;
    let mut eps: f64 = 0.0;
    for ((a, b), &t) in num.iter().zip(reference).zip(times) {
        if t >= range.0 && t <= range.1 {
            any = true;
            eps = eps.max((a - b).norm());
        }
    }
    if !any {
        return Err(Error::Domain(format!("no samples in time range [{}, {}]", range.0, range.1)));
    }
    Ok(eps)
}

/// Silence of every subproblem's field before its arrival bound, relative
/// to the subproblem's data maximum.
#[derive(Debug, Clone, Serialize)]
pub struct HuygensSummary {
    pub tolerance: f64,
    /// (generation, worst ratio).
    pub per_generation: Vec<(usize, f64)>,
    pub worst: f64,
    pub passed: bool,
}

/// Default relative silence tolerance.
pub const HUYGENS_TOL: f64 = 1e-6;

pub fn huygens_summary(report: &RunReport, tolerance: f64) -> HuygensSummary {
    let per_generation: Vec<(usize, f64)> = report.generations.iter().map(|g| (g.m, g.huygens_ratio)).collect();
    let worst = report.worst_huygens_ratio();
    HuygensSummary {
        tolerance,
        per_generation,
        worst,
        passed: worst < tolerance,
    }
}

/// Largest |trace| at samples earlier than `arrival`; a field radiated by
/// data switched on at t₀ must stay silent at distance d until t₀ + d/c.
pub fn max_before(trace: &[C64], times: &[f64], arrival: f64) -> f64 {
    trace
        .iter()
        .zip(times)
        .filter(|(_, &t)| t < arrival)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationCount {
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRow {
    pub kappa: f64,
    pub unknowns_full: usize,
    pub full: IterationCount,
    pub patches: Vec<IterationCount>,
}

impl IterationRow {
    pub fn max_patch(&self) -> usize {
        self.patches.iter().map(|c| c.iterations).max().unwrap_or(0)
    }
}

/// Open arc and its patch splitting for an iteration study.
#[derive(Debug, Clone)]
pub struct CavityStudy {
    pub curve: ParametricCurve,
    pub patches: usize,
    pub overlap_fraction: f64,
    pub params: OpenArcParams,
    /// Plane-wave incidence angle of the right-hand sides.
    pub theta: f64,
}

fn count(a: &CMatrix, rhs: &[C64], cfg: GmresConfig) -> Result<IterationCount> {
    match gmres(|v, w| a.matvec(v, w), rhs, cfg) {
        Ok(r) => Ok(IterationCount {
            iterations: r.iterations,
            converged: r.converged,
        }),
        Err(Error::NotConverged { iterations, .. }) => Ok(IterationCount {
            iterations,
            converged: false,
        }),
        Err(e) => Err(e),
    }
}

/// GMRES iterations for the single-layer equation on the whole arc and on
/// each patch (data −χ_j e^{iκ d·x}) at every κ. Non-convergence is
/// recorded, not raised.
pub fn iteration_study(study: &CavityStudy, kappas: &[f64], method: LinearMethod) -> Result<Vec<IterationRow>> {
    let LinearMethod::Iterative(cfg) = method else {
        return Err(Error::config("solver", "iteration studies need the iterative solver"));
    };
    if study.curve.is_closed() {
        return Err(Error::config("geometry", "iteration studies run on an open arc"));
    }
    let full = OpenArcDiscretization::new(study.curve.clone(), 0, study.curve.interval(), &[], study.params)?;
    let d = PatchDecomposition::equal(
        study.curve.clone(),
        study.patches,
        study.overlap_fraction,
        1.0 / 3.0,
        2.0 / 3.0,
        0.0,
        DiameterMetric::Chordal,
    )?;
    let res = Resolution {
        open: study.params,
        closed_nodes: 64,
    };
    let layout = Layout::new(vec![Component::decomposed(d)], res, &[])?;
    let dir = direction(study.theta);
    let wave = |kappa: f64, x: Point| -C64::from_polar(1.0, kappa * (dir[0] * x[0] + dir[1] * x[1]));
    kappas
        .par_iter()
        .map(|&kappa| {
            let a = crate::bie::Discretization::system(&full, kappa, 1.0)?;
            let rhs: Vec<C64> = full.nodes().iter().map(|n| wave(kappa, n.pos)).collect();
            let full_count = count(&a, &rhs, cfg)?;
            let patches = layout
                .patches
                .iter()
                .map(|p| {
                    let a = p.solver.disc().system(kappa, 1.0)?;
                    let rhs: Vec<C64> = p.nodes.iter().zip(&p.chi).map(|(t, &w)| wave(kappa, t.pos) * w).collect();
                    count(&a, &rhs, cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IterationRow {
                kappa,
                unknowns_full: rhs.len(),
                full: full_count,
                patches,
            })
        })
        .collect()
}

/// Chebyshev tail masses of one patch density.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailMass {
    pub patch: usize,
    /// Tail of the CoV unknown ψ̃.
    pub transformed: f64,
    /// Tail of Ψ sampled in the panel parameter without the CoV.
    pub untransformed: f64,
}

/// Densities of generation `generations` of the single-frequency
/// recursion (ω = κ, c = 1) started from the plane wave e^{iκ d·x}: the
/// frequency-domain image of the time-domain recursion, with the same
/// masking and partition of unity.
pub fn frequency_recursion(layout: &Layout, kappa: f64, theta: f64, generations: usize) -> Result<Vec<Vec<C64>>> {
    if generations == 0 {
        return Err(Error::config("M", "at least one generation is required"));
    }
    let dir = direction(theta);
    let incident: Vec<TraceBlock> = layout
        .patches
        .iter()
        .map(|p| TraceBlock {
            times: 1,
            points: p.nodes.len(),
            data: p.nodes.iter().map(|t| C64::from_polar(1.0, kappa * (dir[0] * t.pos[0] + dir[1] * t.pos[1]))).collect(),
        })
        .collect();
    let systems = (0..layout.len())
        .into_par_iter()
        .map(|k| {
            let (a, p) = layout.matrices(k, kappa, 1.0)?;
            Ok((Lu::factor(a)?, p))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut g = init_first_generation(layout, &incident)?;
    for m in 1..=generations {
        let psi: Vec<Vec<C64>> = g
            .iter()
            .zip(&systems)
            .map(|(d, (lu, _))| {
                let mut x = d.data.clone();
                lu.solve_in_place(&mut x);
                x
            })
            .collect();
        if m == generations {
            return Ok(psi);
        }
        let fields: Vec<Option<TraceBlock>> = psi
            .iter()
            .zip(&systems)
            .map(|(x, (_, p))| {
                let mut v = vec![C64::new(0.0, 0.0); p.rows];
                p.matvec(x, &mut v);
                Some(TraceBlock {
                    times: 1,
                    points: p.rows,
                    data: v,
                })
            })
            .collect();
        g = next_generation_data(layout, build_vtilde(layout, &fields, 1));
    }
    unreachable!("loop returns at the last generation")
}

/// Chebyshev tail masses of the generation-`generations` densities of
/// [`frequency_recursion`] on every open-arc patch.
pub fn cov_tail_study(layout: &Layout, kappa: f64, theta: f64, generations: usize) -> Result<Vec<TailMass>> {
    let psi = frequency_recursion(layout, kappa, theta, generations)?;
    Ok(layout
        .patches
        .iter()
        .zip(&psi)
        .enumerate()
        .filter_map(|(k, (p, x))| match &p.solver {
            PatchSolver::Arc(d) => Some(TailMass {
                patch: k,
                transformed: d.tail_mass(x),
                untransformed: d.tail_mass_in_theta(x),
            }),
            PatchSolver::Closed(_) => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::Circle;
    use std::sync::Arc;

    #[test]
    fn metric_basics() {
        let t: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let a: Vec<C64> = t.iter().map(|&x| C64::new(x.sin(), x)).collect();
        assert_eq!(error_metric(&a, &a, &t, (0.0, 9.0)).unwrap(), 0.0);
        let b: Vec<C64> = a.iter().map(|v| v + 1e-3).collect();
        assert!((error_metric(&a, &b, &t, (2.0, 5.0)).unwrap() - 1e-3).abs() < 1e-15);
        assert!(matches!(error_metric(&a, &b, &t, (20.0, 30.0)), Err(Error::Domain(_))));
        assert!(error_metric(&a, &b[..3], &t, (0.0, 1.0)).is_err());
    }

    #[test]
    fn silence_of_zero_trace() {
        let t: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let z = vec![C64::new(0.0, 0.0); t.len()];
        assert_eq!(max_before(&z, &t, f64::INFINITY), 0.0);
        let mut v = z.clone();
        v[30] = C64::new(1.0, 0.0);
        assert_eq!(max_before(&v, &t, 2.95), 0.0);
        assert_eq!(max_before(&v, &t, 3.05), 1.0);
    }

    fn cavity() -> CavityStudy {
        let pi = std::f64::consts::PI;
        let curve = ParametricCurve::open(Arc::new(Circle::new([0.0, 0.0], 1.0)), 0.02 * pi, 1.98 * pi).unwrap();
        let mut params = OpenArcParams::for_wavenumber(8.0, 1.0);
        params.nodes_per_panel = 16;
        CavityStudy {
            curve,
            patches: 6,
            overlap_fraction: 0.1,
            params,
            theta: -pi,
        }
    }

    #[test]
    fn direct_mode_is_refused() {
        assert!(matches!(
            iteration_study(&cavity(), &[2.0], LinearMethod::Direct),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn low_frequency_counts_are_small() {
        let cfg = GmresConfig {
            tol: 1e-6,
            ..Default::default()
        };
        let rows = iteration_study(&cavity(), &[0.5], LinearMethod::Iterative(cfg)).unwrap();
        assert!(rows[0].full.converged);
        assert!(rows[0].full.iterations < 60, "{:?}", rows[0]);
        assert_eq!(rows[0].patches.len(), 6);
        assert!(rows[0].max_patch() < 60);
    }

    #[test]
    fn first_generation_cov_tails() {
        let layout = benchmarks::cov_layout().unwrap();
        let tails = cov_tail_study(&layout, 2.0, 0.0, 1).unwrap();
        assert_eq!(tails.len(), 3);
        for t in &tails {
            assert!(t.transformed < 1e-6, "{t:?}");
            assert!(t.untransformed > 1e-2, "{t:?}");
        }
    }
}
