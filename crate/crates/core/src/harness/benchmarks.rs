//! Named desk-scale benchmark setups and the machinery to run them and
//! measure their errors.

use super::reference::ReferenceStore;
use super::{error_metric, ErrorReport, Provenance};
use crate::bie::{LinearMethod, OpenArcParams};
use crate::error::{Error, Result};
use crate::ftransform::{FrequencyGrid, LowBand, SignalClass, TimeWindowPartition};
use crate::geometry::catalog::{Circle, Ellipse, Kite};
use crate::geometry::{DiameterMetric, ParametricCurve, PatchDecomposition, Point};
use crate::incident::IncidentFieldSpec;
use crate::multiscatter::{run, Component, Layout, Resolution, RunOptions, RunOutput, RunPlan, TraceBlock};
use std::sync::Arc;

/// What the scattered field is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// u = −u^i at the observation points: interior problems, and exterior
    /// problems whose incident field is radiated from inside an obstacle.
    NegatedIncident,
    None,
}

/// A complete run description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub components: Vec<Component>,
    pub resolution: Resolution,
    pub observation: Vec<Point>,
    pub plan: RunPlan,
    pub incident: IncidentFieldSpec,
    pub reference: ReferenceKind,
}

/// Transfer-matrix cache used by the benchmarks.
pub const CACHE_BYTES: usize = 1_500_000_000;

impl Scenario {
    pub fn layout(&self) -> Result<Layout> {
        Layout::new(self.components.clone(), self.resolution, &self.observation)
    }

    pub fn run(&self, layout: &Layout, opts: RunOptions) -> Result<RunOutput> {
        run(&self.plan, layout, &self.incident, opts)
    }

    /// −u^i at the observation points on `times`; closed forms where known.
    pub fn reference_traces(&self, times: &[f64]) -> Result<TraceBlock> {
        if self.reference == ReferenceKind::None {
            return Err(Error::config("reference", format!("scenario `{}` has no exact solution", self.name)));
        }
        let data = if self.incident.needs_band() {
            self.incident.traces(&self.observation, times, Some(&self.plan.frequency))?
        } else {
            let mut d = Vec::with_capacity(times.len() * self.observation.len());
            for &t in times {
                for &x in &self.observation {
                    d.push(self.incident.eval_time_exact(x, t)?);
                }
            }
            d
        };
        Ok(TraceBlock {
            times: times.len(),
            points: self.observation.len(),
            data: data.into_iter().map(|v| -v).collect(),
        })
    }

    /// ε per generation over `range` against the exact solution.
    pub fn error_report(&self, out: &RunOutput, range: (f64, f64)) -> Result<ErrorReport> {
        let reference = self.reference_traces(&out.times)?;
        let provenance = Provenance::Exact {
            formula: format!("-u^i ({})", self.incident.kind.label()),
        };
        compare(out, &reference, &self.observation, range, provenance)
    }

    /// The same scenario with `nodes`× discretization nodes, `freq`× band
    /// intervals and the time step divided by `time`.
    pub fn refined(&self, nodes: usize, freq: usize, time: usize) -> Result<Scenario> {
        if nodes < 2 || freq < 2 || time < 2 {
            return Err(Error::config("refinement", "every refinement factor must be at least 2"));
        }
        let mut s = self.clone();
        s.resolution.open.nodes_per_panel *= nodes;
        s.resolution.closed_nodes *= nodes;
        let f = &self.plan.frequency;
        s.plan.frequency = FrequencyGrid::new(
            f.lo,
            f.hi,
            (f.count - 1) * freq + 1,
            f.low_band().map(|l| l.params),
            f.class,
        )?;
        s.plan.dt /= time as f64;
        Ok(s)
    }
}

/// ε per generation of `out` against `reference` (same time grid).
pub fn compare(
    out: &RunOutput,
    reference: &TraceBlock,
    observation: &[Point],
    range: (f64, f64),
    provenance: Provenance,
) -> Result<ErrorReport> {
    let per_m = out
        .partial_sums
        .iter()
        .map(|s| {
            (0..s.points)
                .map(|p| error_metric(&s.trace(p), &reference.trace(p), &out.times, range))
                .try_fold(0.0f64, |a, e| e.map(|e| a.max(e)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport {
        observation: observation.to_vec(),
        range,
        per_m,
        provenance,
    })
}

/// Runs the refined scenario and stores its final sum at the coarse time
/// samples under `key`. Returns the stored block and the run id (hash).
pub fn make_reference(
    store: &ReferenceStore,
    key: &str,
    coarse: &Scenario,
    factors: (usize, usize, usize),
) -> Result<(TraceBlock, String)> {
    let fine = coarse.refined(factors.0, factors.1, factors.2)?;
    let out = fine.run(&fine.layout()?, RunOptions::default())?;
    let sum = out.final_sum();
    let step = factors.2;
    let rows: Vec<usize> = (0..sum.times).step_by(step).collect();
    let mut data = Vec::with_capacity(rows.len() * sum.points);
    for &r in &rows {
        data.extend_from_slice(&sum.data[r * sum.points..(r + 1) * sum.points]);
    }
    let block = TraceBlock {
        times: rows.len(),
        points: sum.points,
        data,
    };
    store.put(key, coarse.plan.t0, coarse.plan.dt, &block)?;
    Ok((block, super::reference::config_hash(key)))
}

fn unit_disc() -> ParametricCurve {
    ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).expect("circle")
}

fn disc_components(overlap_fraction: f64) -> Result<Vec<Component>> {
    let d = PatchDecomposition::equal(unit_disc(), 3, overlap_fraction, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)?;
    Ok(vec![Component::decomposed(d)])
}

fn arc_resolution(kappa_max: f64) -> Resolution {
    let mut open = OpenArcParams::for_wavenumber(kappa_max, 1.0);
    open.nodes_per_panel = 16;
    Resolution { open, closed_nodes: 64 }
}

/// Unit disc in three patches, plane-wave pulse u₂ from the left, interior
/// field at (0.5, 0) against the exact −u₂.
pub fn disc_interior(generations: usize) -> Result<Scenario> {
    Ok(Scenario {
        name: "disc-interior-exact".into(),
        components: disc_components(0.35)?,
        resolution: arc_resolution(25.0),
        observation: vec![[0.5, 0.0]],
        plan: RunPlan {
            generations,
            eps_tol: 0.0,
            c: 1.0,
            frequency: FrequencyGrid::new(5.0, 25.0, 501, None, SignalClass::Analytic)?,
            partition: TimeWindowPartition::new(20.0, 1)?,
            t0: -2.0,
            dt: 0.01,
            method: LinearMethod::Direct,
            cache_bytes: CACHE_BYTES,
        },
        incident: IncidentFieldSpec::gaussian_plane(0.0),
        reference: ReferenceKind::NegatedIncident,
    })
}

/// The disc under two broadband pulses over two time windows.
pub fn disc_long_time(generations: usize) -> Result<Scenario> {
    Ok(Scenario {
        name: "disc-long-time".into(),
        components: disc_components(0.35)?,
        resolution: arc_resolution(20.0),
        observation: vec![[0.5, 0.0]],
        plan: RunPlan {
            generations,
            eps_tol: 0.0,
            c: 1.0,
            frequency: FrequencyGrid::new(1.0, 20.0, 372, Some(LowBand::default()), SignalClass::Real)?,
            partition: TimeWindowPartition::new(10.0, 2)?,
            t0: 0.0,
            dt: 0.05,
            method: LinearMethod::Direct,
            cache_bytes: CACHE_BYTES,
        },
        incident: IncidentFieldSpec::multi_pulse(0.0, 2),
        reference: ReferenceKind::NegatedIncident,
    })
}

/// Circle, kite and ellipse, each one whole patch, with a point source just
/// inside the circle; exterior field against the exact −u₁.
pub fn exterior_point_source(generations: usize) -> Result<Scenario> {
    let closed = |s: Arc<dyn crate::geometry::Shape>| ParametricCurve::closed(s).and_then(Component::whole);
    Ok(Scenario {
        name: "exterior-point-source".into(),
        components: vec![
            closed(Arc::new(Circle::new([0.0, 2.0], 0.6)))?,
            closed(Arc::new(Kite {
                center: [1.8, 0.0],
                scale: 0.5,
                rotation: 0.3,
            }))?,
            closed(Arc::new(Ellipse {
                center: [-1.6, -0.4],
                a: 0.7,
                b: 0.4,
                rotation: 0.5,
            }))?,
        ],
        resolution: Resolution {
            closed_nodes: 96,
            ..arc_resolution(25.0)
        },
        observation: vec![[-1.0, 1.0]],
        plan: RunPlan {
            generations,
            eps_tol: 0.0,
            c: 1.0,
            frequency: FrequencyGrid::new(5.0, 25.0, 500, None, SignalClass::Analytic)?,
            partition: TimeWindowPartition::new(20.0, 1)?,
            t0: -1.0,
            dt: 0.01,
            method: LinearMethod::Direct,
            cache_bytes: CACHE_BYTES,
        },
        incident: IncidentFieldSpec::point_source([0.0, 2.1]),
        reference: ReferenceKind::NegatedIncident,
    })
}

/// Unit disc in three patches Γ_1 = {θ ∈ (−π/6, 5π/6)}, ... with high-order
/// panels of a tenth of a wavelength at κ = 2, for density smoothness studies.
pub fn cov_layout() -> Result<Layout> {
    let d = PatchDecomposition::equal(unit_disc(), 3, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)?;
    let mut open = OpenArcParams::for_wavenumber(2.0, 0.1);
    open.nodes_per_panel = 48;
    Layout::new(vec![Component::decomposed(d)], Resolution { open, closed_nodes: 64 }, &[])
}

/// Circular cavity {θ ∈ (0.02π, 1.98π)} in six patches.
pub fn cavity_study(kappa_max: f64) -> Result<super::CavityStudy> {
    let pi = std::f64::consts::PI;
    let curve = ParametricCurve::open(Arc::new(Circle::new([0.0, 0.0], 1.0)), 0.02 * pi, 1.98 * pi)?;
    let mut params = OpenArcParams::for_wavenumber(kappa_max, 1.0);
    params.nodes_per_panel = 16;
    Ok(super::CavityStudy {
        curve,
        patches: 6,
        overlap_fraction: 0.3,
        params,
        theta: -pi,
    })
}

/// Benchmark names accepted by [`by_name`].
pub const NAMES: [&str; 4] = ["disc-interior-exact", "disc-long-time", "exterior-point-source", "cavity-iterations"];

/// Run scenarios by name with their acceptance generation counts. The
/// cavity study is not a time-domain run and is handled separately.
pub fn by_name(name: &str) -> Result<Scenario> {
    match name {
        "disc-interior-exact" => disc_interior(8),
        "disc-long-time" => disc_long_time(12),
        "exterior-point-source" => exterior_point_source(6),
        _ => Err(Error::config("bench", format!("unknown benchmark `{name}`; known: {}", NAMES.join(", ")))),
    }
}
