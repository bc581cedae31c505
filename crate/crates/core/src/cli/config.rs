//! Run configuration documents (JSON). Every struct rejects unknown keys;
//! defaults are filled in by serde and echoed back in resolved form.

use crate::bie::{LinearMethod, OpenArcParams};
use crate::error::{Error, Result};
use crate::ftransform::{FrequencyGrid, LowBand, TimeWindowPartition};
use crate::geometry::catalog::{rounded_polygon, Circle, Ellipse, Kite};
use crate::geometry::{dist, DiameterMetric, ParametricCurve, PatchDecomposition, Point, Shape};
use crate::harness::benchmarks::{ReferenceKind, Scenario};
use crate::incident::IncidentFieldSpec;
use crate::linalg::GmresConfig;
use crate::multiscatter::{Component, Resolution, RunPlan};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShapeConfig {
    Circle {
        center: Point,
        radius: f64,
    },
    Ellipse {
        center: Point,
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    Kite {
        center: Point,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        rotation: f64,
    },
    RoundedPolygon {
        vertices: Vec<Point>,
        rounding: f64,
    },
    /// Open circular arc over the angle interval [from, to].
    Arc {
        center: Point,
        radius: f64,
        from: f64,
        to: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TreatmentConfig {
    Decomposed {
        patches: usize,
        overlap_fraction: f64,
        #[serde(default = "third")]
        c0: f64,
        #[serde(default = "two_thirds")]
        c1: f64,
        #[serde(default)]
        theta0: f64,
    },
    Whole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub shape: ShapeConfig,
    pub treatment: TreatmentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    #[serde(default = "d_npp")]
    pub nodes_per_panel: usize,
    /// Panel length bound in wavelengths at the top of the band.
    #[serde(default = "one")]
    pub wavelengths_per_panel: f64,
    #[serde(default = "d_closed")]
    pub closed_nodes: usize,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig {
            nodes_per_panel: d_npp(),
            wavelengths_per_panel: 1.0,
            closed_nodes: d_closed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyConfig {
    /// Lower band edge; ignored (replaced by w_c) when the low band is on.
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(default = "one")]
    pub w_c: f64,
    #[serde(default)]
    pub low_band: bool,
    #[serde(rename = "P", default = "d_p_count")]
    pub p_count: usize,
    #[serde(rename = "p", default = "d_p_exp")]
    pub p_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "Q", default = "d_one_usize")]
    pub q: usize,
    #[serde(default)]
    pub dt: Option<f64>,
    /// Number of steps over [t0, end of the last window]; alternative to dt.
    #[serde(rename = "N_T", default)]
    pub n_t: Option<usize>,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SolverConfig {
    Direct,
    Iterative {
        #[serde(default = "d_tol")]
        tol: f64,
        #[serde(default = "d_restart")]
        restart: usize,
        #[serde(default = "d_cap")]
        max_iter: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnapshotFormat {
    Csv,
    Pgm,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotConfig {
    /// [lo, hi, count].
    pub x: (f64, f64, usize),
    pub y: (f64, f64, usize),
    pub times: Vec<f64>,
    #[serde(default = "d_format")]
    pub format: SnapshotFormat,
}

impl SnapshotConfig {
    /// Grid points, x fastest, y ascending.
    pub fn points(&self) -> Vec<Point> {
        let axis = |(lo, hi, n): (f64, f64, usize)| -> Vec<f64> {
            (0..n).map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
        };
        let (xs, ys) = (axis(self.x), axis(self.y));
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceConfig {
    /// u = −u^i (interior problems; sources inside an obstacle).
    Exact,
    None,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectConfig {
    /// Fail the run if ε over [0, T] exceeds this.
    #[serde(default)]
    pub max_error: Option<f64>,
    /// Fail the run if any relative Huygens ratio exceeds this.
    #[serde(default)]
    pub huygens_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "d_name")]
    pub name: String,
    pub geometry: Vec<ComponentConfig>,
    #[serde(default)]
    pub resolution: ResolutionConfig,
    pub incident: IncidentFieldSpec,
    pub frequency: FrequencyConfig,
    pub time: TimeConfig,
    #[serde(rename = "M")]
    pub generations: usize,
    #[serde(default)]
    pub eps_tol: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "d_solver")]
    pub solver: SolverConfig,
    #[serde(default = "d_cache")]
    pub cache_mb: usize,
    pub observation: Vec<Point>,
    #[serde(default)]
    pub snapshot: Option<SnapshotConfig>,
    #[serde(default = "d_reference")]
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub expect: ExpectConfig,
    /// Evaluation points closer than this to the boundary are rejected.
    #[serde(default = "d_near")]
    pub near_field: f64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub workers: Option<usize>,
}

fn one() -> f64 {
    1.0
}
fn third() -> f64 {
    1.0 / 3.0
}
fn two_thirds() -> f64 {
    2.0 / 3.0
}
fn d_npp() -> usize {
    16
}
fn d_closed() -> usize {
    64
}
fn d_p_count() -> usize {
    LowBand::default().count
}
fn d_p_exp() -> f64 {
    LowBand::default().exponent
}
fn d_one_usize() -> usize {
    1
}
fn d_tol() -> f64 {
    1e-10
}
fn d_restart() -> usize {
    200
}
fn d_cap() -> usize {
    2000
}
fn d_format() -> SnapshotFormat {
    SnapshotFormat::Csv
}
fn d_name() -> String {
    "run".into()
}
fn d_solver() -> SolverConfig {
    SolverConfig::Direct
}
fn d_cache() -> usize {
    1500
}
fn d_reference() -> ReferenceConfig {
    ReferenceConfig::None
}
fn d_near() -> f64 {
    1e-3
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be positive, got {v}")))
    }
}

impl ShapeConfig {
    fn curve(&self) -> Result<ParametricCurve> {
        let closed = |s: Arc<dyn Shape>| ParametricCurve::closed(s);
        match self {
            ShapeConfig::Circle { center, radius } => closed(Arc::new(Circle::new(*center, *radius))),
            ShapeConfig::Ellipse { center, a, b, rotation } => closed(Arc::new(Ellipse {
                center: *center,
                a: *a,
                b: *b,
                rotation: *rotation,
            })),
            ShapeConfig::Kite { center, scale, rotation } => closed(Arc::new(Kite {
                center: *center,
                scale: *scale,
                rotation: *rotation,
            })),
            ShapeConfig::RoundedPolygon { vertices, rounding } => closed(Arc::new(rounded_polygon(vertices, *rounding)?)),
            ShapeConfig::Arc { center, radius, from, to } => {
                ParametricCurve::open(Arc::new(Circle::new(*center, *radius)), *from, *to)
            }
        }
    }

    fn validate(&self, key: &str) -> Result<()> {
        match self {
            ShapeConfig::Circle { radius, .. } | ShapeConfig::Arc { radius, .. } => positive(&format!("{key}.radius"), *radius),
            ShapeConfig::Ellipse { a, b, .. } => {
                positive(&format!("{key}.a"), *a)?;
                positive(&format!("{key}.b"), *b)
            }
            ShapeConfig::Kite { scale, .. } => positive(&format!("{key}.scale"), *scale),
            ShapeConfig::RoundedPolygon { rounding, .. } => positive(&format!("{key}.rounding"), *rounding),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parameter checks that serde cannot express; errors name the key.
    pub fn validate(&self) -> Result<()> {
        if self.geometry.is_empty() {
            return Err(Error::config("geometry", "at least one component is required"));
        }
        for (i, c) in self.geometry.iter().enumerate() {
            c.shape.validate(&format!("geometry[{i}].shape"))?;
            if let TreatmentConfig::Decomposed {
                patches,
                overlap_fraction,
                c0,
                c1,
                ..
            } = &c.treatment
            {
                let key = format!("geometry[{i}].treatment");
                if *patches == 0 {
                    return Err(Error::config(format!("{key}.patches"), "must be at least 1"));
                }
                if !(*overlap_fraction > 0.0 && *overlap_fraction < 0.5) {
                    return Err(Error::config(format!("{key}.overlap_fraction"), "must lie in (0, 1/2)"));
                }
                if !(0.0 < *c0 && *c0 < 0.5 && 0.5 < *c1 && *c1 < 1.0) {
                    return Err(Error::config(format!("{key}.c0"), "need 0 < c0 < 1/2 < c1 < 1"));
                }
            }
        }
        if self.resolution.nodes_per_panel < 4 {
            return Err(Error::config("resolution.nodes_per_panel", "must be at least 4"));
        }
        positive("resolution.wavelengths_per_panel", self.resolution.wavelengths_per_panel)?;
        if self.resolution.closed_nodes < 8 || self.resolution.closed_nodes % 2 == 1 {
            return Err(Error::config("resolution.closed_nodes", "must be even and at least 8"));
        }
        self.incident.validate()?;
        positive("frequency.W", self.frequency.w)?;
        positive("frequency.w_c", self.frequency.w_c)?;
        if !self.frequency.low_band && self.frequency.lo.is_none() {
            return Err(Error::config("frequency.lo", "required unless the low band is enabled"));
        }
        if let Some(lo) = self.frequency.lo {
            positive("frequency.lo", lo)?;
        }
        positive("frequency.p", self.frequency.p_exponent)?;
        positive("time.H", self.time.h)?;
        if self.time.q == 0 {
            return Err(Error::config("time.Q", "at least one window is required"));
        }
        match (self.time.dt, self.time.n_t) {
            (Some(dt), None) => positive("time.dt", dt)?,
            (None, Some(n)) if n > 0 => {}
            (None, Some(_)) => return Err(Error::config("time.N_T", "must be positive")),
            _ => return Err(Error::config("time.dt", "give exactly one of dt and N_T")),
        }
        if self.generations == 0 {
            return Err(Error::config("M", "at least one generation is required"));
        }
        if !(self.eps_tol >= 0.0) {
            return Err(Error::config("eps_tol", "must be non-negative"));
        }
        positive("c", self.c)?;
        if let SolverConfig::Iterative { tol, restart, max_iter } = self.solver {
            positive("solver.tol", tol)?;
            if restart == 0 || max_iter == 0 {
                return Err(Error::config("solver.restart", "restart and max_iter must be positive"));
            }
        }
        if self.observation.is_empty() && self.snapshot.is_none() {
            return Err(Error::config("observation", "no observation points or snapshot grid"));
        }
        if let Some(s) = &self.snapshot {
            if s.x.2 == 0 || s.y.2 == 0 {
                return Err(Error::config("snapshot.x", "grid counts must be positive"));
            }
            if s.times.is_empty() {
                return Err(Error::config("snapshot.times", "at least one time is required"));
            }
        }
        if !(self.near_field >= 0.0) {
            return Err(Error::config("near_field", "must be non-negative"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be positive"));
        }
        Ok(())
    }

    fn components(&self) -> Result<Vec<Component>> {
        self.geometry
            .iter()
            .map(|c| {
                let curve = c.shape.curve()?;
                match &c.treatment {
                    TreatmentConfig::Whole => Component::whole(curve),
                    TreatmentConfig::Decomposed {
                        patches,
                        overlap_fraction,
                        c0,
                        c1,
                        theta0,
                    } => Ok(Component::decomposed(PatchDecomposition::equal(
                        curve,
                        *patches,
                        *overlap_fraction,
                        *c0,
                        *c1,
                        *theta0,
                        DiameterMetric::Chordal,
                    )?)),
                }
            })
            .collect()
    }

    pub fn frequency_grid(&self) -> Result<FrequencyGrid> {
        let f = &self.frequency;
        let class = self.incident.signal_class();
        if f.low_band {
            let low = LowBand {
                count: f.p_count,
                exponent: f.p_exponent,
                ..LowBand::default()
            };
            FrequencyGrid::new(f.w_c, f.w, f.j, Some(low), class)
        } else {
            FrequencyGrid::new(f.lo.unwrap_or(f.w_c), f.w, f.j, None, class)
        }
    }

    pub fn plan(&self) -> Result<RunPlan> {
        let partition = TimeWindowPartition::new(self.time.h, self.time.q)?;
        let dt = match (self.time.dt, self.time.n_t) {
            (Some(dt), _) => dt,
            (None, Some(n)) => (partition.end_time() - self.time.t0) / n as f64,
            _ => return Err(Error::config("time.dt", "give exactly one of dt and N_T")),
        };
        let method = match self.solver {
            SolverConfig::Direct => LinearMethod::Direct,
            SolverConfig::Iterative { tol, restart, max_iter } => LinearMethod::Iterative(GmresConfig {
                tol,
                restart,
                max_iter,
            }),
        };
        let plan = RunPlan {
            generations: self.generations,
            eps_tol: self.eps_tol,
            c: self.c,
            frequency: self.frequency_grid()?,
            partition,
            t0: self.time.t0,
            dt,
            method,
            cache_bytes: self.cache_mb.saturating_mul(1 << 20),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Observation points followed by the snapshot grid.
    pub fn evaluation_points(&self) -> Vec<Point> {
        let mut pts = self.observation.clone();
        if let Some(s) = &self.snapshot {
            pts.extend(s.points());
        }
        pts
    }

    /// The scenario with every evaluation point attached. Points within
    /// `near_field` of the boundary are rejected.
    pub fn scenario(&self) -> Result<Scenario> {
        self.validate()?;
        let components = self.components()?;
        let points = self.evaluation_points();
        for (i, &x) in points.iter().enumerate() {
            for c in &components {
                let (a, b) = c.curve.interval();
                let samples = c.curve.sample(a, b, 4096);
                let gap = samples.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max);
                let d = samples.iter().map(|&p| dist(p, x)).fold(f64::INFINITY, f64::min) - 0.5 * gap;
                if d < self.near_field {
                    let key = if i < self.observation.len() {
                        format!("observation[{i}]")
                    } else {
                        "snapshot".to_string()
                    };
                    return Err(Error::config(
                        key,
                        format!(
                            "point ({}, {}) lies within {} of the boundary; move it away or lower near_field",
                            x[0], x[1], self.near_field
                        ),
                    ));
                }
            }
        }
        let kappa_max = self.frequency.w / self.c;
        let mut open = OpenArcParams::for_wavenumber(kappa_max, self.resolution.wavelengths_per_panel);
        open.nodes_per_panel = self.resolution.nodes_per_panel;
        Ok(Scenario {
            name: self.name.clone(),
            components,
            resolution: Resolution {
                open,
                closed_nodes: self.resolution.closed_nodes,
            },
            observation: points,
            plan: self.plan()?,
            incident: self.incident,
            reference: match self.reference {
                ReferenceConfig::Exact => ReferenceKind::NegatedIncident,
                ReferenceConfig::None => ReferenceKind::None,
            },
        })
    }
}

/// Benchmark documents; these mirror [`crate::harness::benchmarks`].
pub fn bench_config(name: &str) -> Result<RunConfig> {
    let disc = |of: f64| ComponentConfig {
        shape: ShapeConfig::Circle {
            center: [0.0, 0.0],
            radius: 1.0,
        },
        treatment: TreatmentConfig::Decomposed {
            patches: 3,
            overlap_fraction: of,
            c0: third(),
            c1: two_thirds(),
            theta0: 0.0,
        },
    };
    let base = |geometry, incident, frequency, time, m, observation, max_error| RunConfig {
        name: name.to_string(),
        geometry,
        resolution: ResolutionConfig::default(),
        incident,
        frequency,
        time,
        generations: m,
        eps_tol: 0.0,
        c: 1.0,
        solver: SolverConfig::Direct,
        cache_mb: d_cache(),
        observation,
        snapshot: None,
        reference: ReferenceConfig::Exact,
        expect: ExpectConfig {
            max_error: Some(max_error),
            huygens_tol: Some(crate::harness::HUYGENS_TOL),
        },
        near_field: d_near(),
        output: None,
        workers: None,
    };
    let band = |lo: Option<f64>, w: f64, j: usize, low_band: bool| FrequencyConfig {
        lo,
        w,
        j,
        w_c: 1.0,
        low_band,
        p_count: d_p_count(),
        p_exponent: d_p_exp(),
    };
    let time = |h: f64, q: usize, dt: f64, t0: f64| TimeConfig {
        h,
        q,
        dt: Some(dt),
        n_t: None,
        t0,
    };
    match name {
        "disc-interior-exact" => Ok(base(
            vec![disc(0.35)],
            IncidentFieldSpec::gaussian_plane(0.0),
            band(Some(5.0), 25.0, 501, false),
            time(20.0, 1, 0.01, -2.0),
            8,
            vec![[0.5, 0.0]],
            1e-5,
        )),
        "disc-long-time" => Ok(base(
            vec![disc(0.35)],
            IncidentFieldSpec::multi_pulse(0.0, 2),
            band(None, 20.0, 372, true),
            time(10.0, 2, 0.05, 0.0),
            12,
            vec![[0.5, 0.0]],
            1e-5,
        )),
        "exterior-point-source" => {
            let whole = |shape| ComponentConfig {
                shape,
                treatment: TreatmentConfig::Whole,
            };
            let mut cfg = base(
                vec![
                    whole(ShapeConfig::Circle {
                        center: [0.0, 2.0],
                        radius: 0.6,
                    }),
                    whole(ShapeConfig::Kite {
                        center: [1.8, 0.0],
                        scale: 0.5,
                        rotation: 0.3,
                    }),
                    whole(ShapeConfig::Ellipse {
                        center: [-1.6, -0.4],
                        a: 0.7,
                        b: 0.4,
                        rotation: 0.5,
                    }),
                ],
                IncidentFieldSpec::point_source([0.0, 2.1]),
                band(Some(5.0), 25.0, 500, false),
                time(20.0, 1, 0.01, -1.0),
                6,
                vec![[-1.0, 1.0]],
                1e-5,
            );
            cfg.resolution.closed_nodes = 96;
            Ok(cfg)
        }
        _ => Err(Error::config(
            "bench",
            format!("`{name}` is not a time-domain benchmark; known: {}", crate::harness::benchmarks::NAMES.join(", ")),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::benchmarks;

    const MINIMAL: &str = r#"{
        "geometry": [{"shape": {"kind": "circle", "center": [0, 0], "radius": 1},
                      "treatment": {"kind": "decomposed", "patches": 3, "overlap_fraction": 0.35}}],
        "incident": {"field": {"variant": "gaussian-plane"}},
        "frequency": {"lo": 5, "W": 25, "J": 501},
        "time": {"H": 10, "dt": 0.01},
        "M": 4,
        "observation": [[0.5, 0]]
    }"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = RunConfig::from_json(MINIMAL).unwrap();
        match &cfg.geometry[0].treatment {
            TreatmentConfig::Decomposed { c0, c1, theta0, .. } => {
                assert_eq!((*c0, *c1, *theta0), (1.0 / 3.0, 2.0 / 3.0, 0.0));
            }
            _ => panic!(),
        }
        assert_eq!(cfg.frequency.w_c, 1.0);
        assert_eq!(cfg.time.q, 1);
        assert_eq!(cfg.solver, SolverConfig::Direct);
        // resolved echo parses back to the same config
        let again = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn geometry_one_parameters_round_trip() {
        let cfg = RunConfig::from_json(MINIMAL).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(v["time"]["H"], 10.0);
        assert_eq!(v["time"]["dt"], 0.01);
        assert_eq!(v["frequency"]["J"], 501);
        assert_eq!((v["frequency"]["lo"].as_f64(), v["frequency"]["W"].as_f64()), (Some(5.0), Some(25.0)));
        let plan = cfg.plan().unwrap();
        assert_eq!((plan.partition.half_width, plan.dt, plan.frequency.count), (10.0, 0.01, 501));
    }

    fn error_key(doc: &str) -> String {
        match RunConfig::from_json(doc) {
            Err(Error::Config { key, .. }) => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn rejections_name_the_key() {
        assert_eq!(error_key(&MINIMAL.replace("\"dt\": 0.01", "\"dt\": -0.01")), "time.dt");
        assert_eq!(error_key(&MINIMAL.replace("\"M\": 4", "\"M\": 0")), "M");
        assert_eq!(error_key(&MINIMAL.replace("\"radius\": 1", "\"radius\": -1")), "geometry[0].shape.radius");
        let unknown = error_key(&MINIMAL.replace("\"M\": 4", "\"M\": 4, \"colour\": 1"));
        assert_eq!(unknown, "config");
        assert!(RunConfig::from_json(&MINIMAL.replace("\"H\": 10", "\"H\": 10, \"bogus\": 2")).is_err());
    }

    #[test]
    fn near_boundary_points_are_rejected() {
        let cfg = RunConfig::from_json(&MINIMAL.replace("[[0.5, 0]]", "[[0.9995, 0]]")).unwrap();
        match cfg.scenario() {
            Err(Error::Config { key, .. }) => assert_eq!(key, "observation[0]"),
            Err(e) => panic!("{e}"),
            Ok(_) => panic!("accepted a point on the boundary"),
        }
    }

    #[test]
    fn snapshot_grid_order() {
        let s = SnapshotConfig {
            x: (0.0, 1.0, 3),
            y: (-1.0, 1.0, 2),
            times: vec![1.0],
            format: SnapshotFormat::Csv,
        };
        let p = s.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], [0.0, -1.0]);
        assert_eq!(p[2], [1.0, -1.0]);
        assert_eq!(p[3], [0.0, 1.0]);
    }

    #[test]
    fn bench_documents_match_harness_scenarios() {
        for name in ["disc-interior-exact", "disc-long-time", "exterior-point-source"] {
            let a = bench_config(name).unwrap().scenario().unwrap();
            let b = benchmarks::by_name(name).unwrap();
            assert_eq!(a.resolution, b.resolution, "{name}");
            assert_eq!(a.observation, b.observation, "{name}");
            assert_eq!(a.incident, b.incident, "{name}");
            assert_eq!(a.reference, b.reference, "{name}");
            let (p, q) = (&a.plan, &b.plan);
            assert_eq!(
                (p.generations, p.eps_tol, p.c, p.partition, p.t0, p.dt, p.method),
                (q.generations, q.eps_tol, q.c, q.partition, q.t0, q.dt, q.method),
                "{name}"
            );
            assert_eq!(p.frequency.nodes(), q.frequency.nodes(), "{name}");
            assert_eq!(p.frequency.class, q.frequency.class, "{name}");
            assert_eq!(a.components.len(), b.components.len());
        }
        assert!(bench_config("cavity-iterations").is_err());
    }
}
