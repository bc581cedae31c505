//! Time-domain multiple-scattering recursion over overlapping patches.
//!
//! Generation m solves, on every patch Γ_j, the wave equation with data
//! g_{j,m} through windowed Fourier transforms and frequency-domain integral
//! equations. The fields v_{k,m} radiated by the other patches, with
//! neighbours masked out on shared overlaps, give the next data
//! g_{j,m+1} = −χ_j Σ_{k≠j} ṽ_{k,j,m}, and u_M = Σ_{m≤M} Σ_j v_{j,m}.

mod layout;
mod transfer;

pub use layout::{Component, Feed, Layout, PatchEntry, PatchSolver, Resolution, Treatment};
pub use transfer::TransferSet;

use crate::bie::LinearMethod;
use crate::error::{Error, Result};
use crate::ftransform::{FrequencyGrid, InverseFt, SignalClass, SlowForward, TimeGrid, TimeWindowPartition};
use crate::incident::IncidentFieldSpec;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Relative level below which data counts as not yet switched on when
/// locating arrival times.
pub const ONSET_LEVEL: f64 = 1e-8;

/// Parameters of one run.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub generations: usize,
    /// Generation terms whose maximum falls below this are dropped.
    pub eps_tol: f64,
    pub c: f64,
    pub frequency: FrequencyGrid,
    pub partition: TimeWindowPartition,
    /// First time sample; the grid runs to the end of the last window.
    pub t0: f64,
    pub dt: f64,
    pub method: LinearMethod,
    /// Memory allowed for cached transfer matrices.
    pub cache_bytes: usize,
}

impl RunPlan {
    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(Error::config("M", "at least one generation is required"));
        }
        if !(self.eps_tol >= 0.0) {
            return Err(Error::config("eps_tol", format!("must be non-negative, got {}", self.eps_tol)));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::config("c", format!("wave speed must be positive, got {}", self.c)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::config("time.dt", format!("time step must be positive, got {}", self.dt)));
        }
        if self.t0 < -0.5 * self.partition.half_width {
            return Err(Error::config(
                "time.t0",
                format!("first sample {} precedes the flat part of the first window", self.t0),
            ));
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::covering(self.t0, self.partition.end_time(), self.dt)
    }

    /// Last time at which the windows still sum to one.
    pub fn valid_until(&self) -> f64 {
        self.partition.unity_end()
    }
}

/// T(M) = M δ_min / c.
pub fn guarantee_time(generations: usize, delta_min: f64, c: f64) -> f64 {
    generations as f64 * delta_min / c
}

/// Time traces of a set of points, row-major times × points.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBlock {
    pub times: usize,
    pub points: usize,
    pub data: Vec<C64>,
}

impl TraceBlock {
    pub fn zeros(times: usize, points: usize) -> Self {
        TraceBlock {
            times,
            points,
            data: vec![C64::new(0.0, 0.0); times * points],
        }
    }

    pub fn at(&self, t: usize, p: usize) -> C64 {
        self.data[t * self.points + p]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Max over points and the first `rows` times.
    pub fn max_abs_until(&self, rows: usize) -> f64 {
        self.data[..rows.min(self.times) * self.points].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self, p: usize) -> Vec<C64> {
        (0..self.times).map(|t| self.at(t, p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// First time row whose max over points reaches `level`.
    fn onset(&self, level: f64) -> Option<usize> {
        (0..self.times).find(|&t| self.data[t * self.points..(t + 1) * self.points].iter().any(|v| v.norm() >= level))
    }
}

/// g_{j,1} = −χ_j u^i at the nodes of every patch.
pub fn init_first_generation(layout: &Layout, incident: &[TraceBlock]) -> Result<Vec<TraceBlock>> {
    if incident.len() != layout.len() {
        return Err(Error::Shape(format!("{} incident traces for {} patches", incident.len(), layout.len())));
    }
    incident
        .iter()
        .zip(&layout.patches)
        .map(|(u, p)| {
            if u.points != p.nodes.len() {
                return Err(Error::Shape("incident trace does not match the patch nodes".into()));
            }
            let mut g = u.clone();
            for row in g.data.chunks_mut(u.points.max(1)) {
                for (v, &chi) in row.iter_mut().zip(&p.chi) {
                    *v *= -chi;
                }
            }
            Ok(g)
        })
        .collect()
}

/// Masked sums Σ_{k≠j} ṽ_{k,j,m} at the nodes of every patch j: field values
/// of neighbours on shared overlaps are never routed (see [`Layout`]), so
/// only the feeds need adding.
pub fn build_vtilde(layout: &Layout, fields: &[Option<TraceBlock>], times: usize) -> Vec<TraceBlock> {
    let mut sums: Vec<TraceBlock> = layout.patches.iter().map(|p| TraceBlock::zeros(times, p.nodes.len())).collect();
    for (k, field) in fields.iter().enumerate() {
        let Some(v) = field else { continue };
        for feed in &layout.feeds[k] {
            let s = &mut sums[feed.receiver];
            for t in 0..times {
                let src = &v.data[t * v.points..(t + 1) * v.points];
                let dst = &mut s.data[t * s.points..(t + 1) * s.points];
                for &(i, row) in &feed.links {
                    dst[i] += src[row];
                }
            }
        }
    }
    sums
}

/// g_{j,m+1} = −χ_j · (masked sum).
pub fn next_generation_data(layout: &Layout, masked: Vec<TraceBlock>) -> Vec<TraceBlock> {
    masked
        .into_iter()
        .zip(&layout.patches)
        .map(|(mut s, p)| {
            for row in s.data.chunks_mut(s.points.max(1)) {
                for (v, &chi) in row.iter_mut().zip(&p.chi) {
                    *v *= -chi;
                }
            }
            s
        })
        .collect()
}

/// Per-generation diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationReport {
    pub m: usize,
    /// T(m).
    pub guarantee_time: f64,
    /// max |g_{j,m}| per patch.
    pub data_max: Vec<f64>,
    /// max |g_{j,m}| over t ≤ T(m−1) per patch.
    pub early_data_max: Vec<f64>,
    /// Patches whose solve was skipped (zero or pruned data).
    pub skipped: Vec<bool>,
    /// max |v_{j,m}| over all targets per patch.
    pub field_max: Vec<f64>,
    /// Worst ratio max|v_{j,m}| / max|g_{j,m}| over target samples before
    /// the arrival bound.
    pub huygens_ratio: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PruneEntry {
    pub patch: usize,
    pub m: usize,
    /// Dropped data magnitude.
    pub magnitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub delta_min: f64,
    pub patches: usize,
    pub unknowns: Vec<usize>,
    pub targets: Vec<usize>,
    pub incident_max: f64,
    pub generations: Vec<GenerationReport>,
    /// max |g_{j,M+1}| over t ≤ T(M) per patch: the boundary residual.
    pub residual_early_max: Vec<f64>,
    pub residual_max: Vec<f64>,
    pub pruned: Vec<PruneEntry>,
    pub cached_transfers: usize,
    pub gmres_iterations: (usize, usize),
    pub setup_seconds: f64,
    pub total_seconds: f64,
}

impl RunReport {
    pub fn guarantee_time(&self, m: usize, c: f64) -> f64 {
        guarantee_time(m, self.delta_min, c)
    }

    pub fn worst_huygens_ratio(&self) -> f64 {
        self.generations.iter().map(|g| g.huygens_ratio).fold(0.0, f64::max)
    }
}

pub struct RunOutput {
    pub times: Vec<f64>,
    /// u_m at the observation points after each generation m = 1..=M.
    pub partial_sums: Vec<TraceBlock>,
    /// Boundary data of every generation, including M + 1.
    pub data: Option<Vec<Vec<TraceBlock>>>,
    pub report: RunReport,
}

impl RunOutput {
    pub fn final_sum(&self) -> &TraceBlock {
        self.partial_sums.last().expect("at least one generation")
    }
}

/// Options that do not change the numerical result.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Keep every generation's boundary data in the output.
    pub keep_data: bool,
}

/// Incident traces at the nodes of every patch on the run's time grid.
pub fn incident_traces(layout: &Layout, incident: &IncidentFieldSpec, plan: &RunPlan) -> Result<Vec<TraceBlock>> {
    let grid = plan.time_grid()?;
    let times = grid.times();
    layout
        .patches
        .par_iter()
        .map(|p| {
            let pts = p.positions();
            let data = incident.traces(&pts, &times, Some(&plan.frequency))?;
            Ok(TraceBlock {
                times: times.len(),
                points: pts.len(),
                data,
            })
        })
        .collect()
}

/// Runs the recursion for the incident field given on the run's frequency band.
pub fn run(plan: &RunPlan, layout: &Layout, incident: &IncidentFieldSpec, opts: RunOptions) -> Result<RunOutput> {
    incident.validate()?;
    if incident.signal_class() != plan.frequency.class && plan.frequency.class != SignalClass::General {
        return Err(Error::config(
            "frequency.class",
            format!("incident field needs the {:?} class", incident.signal_class()),
        ));
    }
    let u = incident_traces(layout, incident, plan)?;
    run_with_data(plan, layout, &u, opts)
}

/// Runs the recursion from sampled incident traces at the patch nodes.
pub fn run_with_data(plan: &RunPlan, layout: &Layout, incident: &[TraceBlock], opts: RunOptions) -> Result<RunOutput> {
    let start = Instant::now();
    plan.validate()?;
    let grid = plan.time_grid()?;
    let nt = grid.n;
    if incident.iter().any(|u| u.times != nt) {
        return Err(Error::Shape("incident traces do not match the time grid".into()));
    }
    let freqs = plan.frequency.nodes();
    let forward = SlowForward::new(plan.partition, grid, &freqs)?;
    // window q contributes at grid rows with t ≥ s_q − H, evaluated at t − s_q
    let inverses: Vec<(usize, InverseFt)> = (0..plan.partition.count)
        .map(|q| {
            let (lo, _) = plan.partition.support(q);
            let first = (0..nt).find(|&k| grid.time(k) >= lo - 1e-9 * grid.dt).unwrap_or(nt);
            let times: Vec<f64> = (first..nt).map(|k| grid.time(k) - plan.partition.center(q)).collect();
            Ok((first, InverseFt::new(&plan.frequency, &times)?))
        })
        .collect::<Result<_>>()?;
    let transfer = TransferSet::new(layout, &freqs, plan.c, plan.method, plan.cache_bytes);
    let setup_seconds = start.elapsed().as_secs_f64();

    let n = layout.len();
    let dmin = layout.delta_min;
    let incident_max = incident.iter().map(|u| u.max_abs()).fold(0.0, f64::max);
    let rows_until = |t: f64| (0..nt).take_while(|&k| grid.time(k) <= t + 1e-9 * grid.dt).count();
    let n_obs = layout.observation.len();
    let mut total = TraceBlock::zeros(nt, n_obs);
    let mut partial_sums = vec![];
    let mut reports = vec![];
    let mut pruned = vec![];
    let mut kept = vec![];
    let mut data = init_first_generation(layout, incident)?;

    for m in 1..=plan.generations {
        let t_gen = Instant::now();
        let early_rows = rows_until(guarantee_time(m - 1, dmin, plan.c));
        let data_max: Vec<f64> = data.iter().map(|g| g.max_abs()).collect();
        let early_data_max: Vec<f64> = data.iter().map(|g| g.max_abs_until(early_rows)).collect();
        let mut skipped = vec![false; n];
        for j in 0..n {
            if data[j].is_zero() {
                skipped[j] = true;
            } else if data_max[j] < plan.eps_tol {
                skipped[j] = true;
                pruned.push(PruneEntry {
                    patch: j,
                    m,
                    magnitude: data_max[j],
                });
            }
        }
        // forward transforms, per patch and window
        let spectra: Vec<Option<Vec<Vec<C64>>>> = (0..n)
            .into_par_iter()
            .map(|j| {
                if skipped[j] {
                    return Ok(None);
                }
                let g = &data[j];
                (0..plan.partition.count)
                    .map(|q| forward.apply_block(q, &g.data, g.points))
                    .collect::<Result<Vec<_>>>()
                    .map(Some)
            })
            .collect::<Result<_>>()?;
        // frequency solves: for every (j, ω) the Q windows form the columns
        let qn = plan.partition.count;
        let jobs: Vec<(usize, usize)> = (0..n).filter(|&j| !skipped[j]).flat_map(|j| (0..freqs.len()).map(move |f| (j, f))).collect();
        let solved: Vec<Vec<C64>> = jobs
            .par_iter()
            .map(|&(j, f)| {
                let np = layout.patches[j].nodes.len();
                let sp = spectra[j].as_ref().expect("not skipped");
                let mut cols = vec![C64::new(0.0, 0.0); np * qn];
                for (q, s) in sp.iter().enumerate() {
                    for i in 0..np {
                        cols[i * qn + q] = s[f * np + i];
                    }
                }
                transfer.apply(j, f, &cols, qn).map_err(|e| e.in_stage(format!("generation {m}")))
            })
            .collect::<Result<_>>()?;
        // inverse transforms back to the time grid
        let mut by_patch: Vec<Vec<&Vec<C64>>> = vec![vec![]; n];
        for (&(j, _), s) in jobs.iter().zip(&solved) {
            by_patch[j].push(s);
        }
        let fields: Vec<Option<TraceBlock>> = (0..n)
            .into_par_iter()
            .map(|j| {
                if skipped[j] {
                    return Ok(None);
                }
                let rows = layout.targets[j].len();
                let mut v = TraceBlock::zeros(nt, rows);
                for (q, (first, inv)) in inverses.iter().enumerate() {
                    let mut spec = vec![C64::new(0.0, 0.0); freqs.len() * rows];
                    for (f, s) in by_patch[j].iter().enumerate() {
                        for r in 0..rows {
                            spec[f * rows + r] = s[r * qn + q];
                        }
                    }
                    let out = inv.apply_block(&spec, rows)?;
                    for (a, b) in v.data[first * rows..].iter_mut().zip(&out) {
                        *a += b;
                    }
                }
                Ok(Some(v))
            })
            .collect::<Result<_>>()?;
        drop(solved);
        // Huygens silence before the arrival bound
        let mut huygens: f64 = 0.0;
        for j in 0..n {
            let Some(v) = &fields[j] else { continue };
            let g = &data[j];
            let Some(on) = g.onset(ONSET_LEVEL * data_max[j]) else { continue };
            let t_on = grid.time(on);
            for (r, t) in layout.targets[j].iter().enumerate() {
                let arrive = t_on + layout.patches[j].support_distance(t.pos) / plan.c;
                let rows = (0..nt).take_while(|&k| grid.time(k) < arrive).count();
                let early = (0..rows).map(|k| v.at(k, r).norm()).fold(0.0, f64::max);
                huygens = huygens.max(early / data_max[j]);
            }
        }
        let field_max: Vec<f64> = fields.iter().map(|v| v.as_ref().map_or(0.0, |v| v.max_abs())).collect();
        for (j, v) in fields.iter().enumerate() {
            let Some(v) = v else { continue };
            let o = layout.observation_row(j);
            for t in 0..nt {
                for p in 0..n_obs {
                    total.data[t * n_obs + p] += v.data[t * v.points + o + p];
                }
            }
        }
        partial_sums.push(total.clone());
        let next = next_generation_data(layout, build_vtilde(layout, &fields, nt));
        if opts.keep_data {
            kept.push(std::mem::replace(&mut data, next));
        } else {
            data = next;
        }
        reports.push(GenerationReport {
            m,
            guarantee_time: guarantee_time(m, dmin, plan.c),
            data_max,
            early_data_max,
            skipped,
            field_max,
            huygens_ratio: huygens,
            seconds: t_gen.elapsed().as_secs_f64(),
        });
    }
    let early_rows = rows_until(guarantee_time(plan.generations, dmin, plan.c));
    let residual_early_max = data.iter().map(|g| g.max_abs_until(early_rows)).collect();
    let residual_max = data.iter().map(|g| g.max_abs()).collect();
    if opts.keep_data {
        kept.push(data);
    }
    let report = RunReport {
        delta_min: dmin,
        patches: n,
        unknowns: layout.patches.iter().map(|p| p.nodes.len()).collect(),
        targets: layout.targets.iter().map(|t| t.len()).collect(),
        incident_max,
        generations: reports,
        residual_early_max,
        residual_max,
        pruned,
        cached_transfers: transfer.cached_entries(),
        gmres_iterations: transfer.iteration_counts(),
        setup_seconds,
        total_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput {
        times: grid.times(),
        partial_sums,
        data: opts.keep_data.then_some(kept),
        report,
    })
}
