//! Command-line driver: run a config, run a named benchmark, list
//! benchmarks, or evaluate the acceptance suite.

pub mod config;
pub mod output;

pub use config::{bench_config, RunConfig};

use crate::error::{Error, Result};
use crate::harness::acceptance::{cavity_passes, cavity_rows, Suite, CAVITY_KAPPAS};
use crate::harness::{error_metric, huygens_summary};
use crate::multiscatter::{RunOptions, RunOutput};
use clap::{Parser, Subcommand};
use output::{write_csv, write_manifest, write_pgm, FieldRow};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "fthms", version, about = "Frequency-time hybrid multiple-scattering wave solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (overrides the config's `output`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Accepted only to be refused: runs are deterministic and take no seed.
    #[arg(long, global = true, hide = true)]
    pub seed_free: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a JSON config.
    Run { config: PathBuf },
    /// Run a named benchmark and check its assertions.
    Bench { name: String },
    /// List the benchmark names.
    ListBenches,
    /// Evaluate acceptance criteria (all when no ids are given).
    Check { ids: Vec<usize> },
}

/// One named pass/fail check on a run's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// What a run wrote and whether its assertions held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

fn nearest_index(times: &[f64], t: f64) -> Option<usize> {
    let dt = times.get(1).map(|b| b - times[0]).unwrap_or(1.0);
    let k = ((t - times[0]) / dt).round();
    (k >= 0.0 && (k as usize) < times.len()).then_some(k as usize)
}

/// Runs `cfg` and writes every output into `dir`.
pub fn execute_run(cfg: &RunConfig, dir: &Path) -> Result<Outcome> {
    let scenario = cfg.scenario()?;
    let layout = scenario.layout()?;
    let out = scenario.run(&layout, RunOptions::default())?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    let echo = dir.join("config.json");
    fs::write(&echo, cfg.to_json()?)?;
    files.push(echo);

    let n_obs = cfg.observation.len();
    let sum = out.final_sum();
    if n_obs > 0 {
        let rows: Vec<FieldRow> = out
            .times
            .iter()
            .enumerate()
            .flat_map(|(k, &t)| {
                cfg.observation.iter().enumerate().map(move |(p, &x)| FieldRow {
                    x,
                    t,
                    value: sum.data[k * sum.points + p],
                })
            })
            .collect();
        let path = dir.join("traces.csv");
        write_csv(&path, &rows)?;
        files.push(path);
    }

    if let Some(snap) = &cfg.snapshot {
        let pts = snap.points();
        let (w, h) = (snap.x.2, snap.y.2);
        for (s, &t) in snap.times.iter().enumerate() {
            let k = nearest_index(&out.times, t)
                .ok_or_else(|| Error::config(format!("snapshot.times[{s}]"), format!("{t} lies outside the run's time grid")))?;
            let tk = out.times[k];
            let vals: Vec<_> = (0..pts.len()).map(|i| sum.data[k * sum.points + n_obs + i]).collect();
            let stem = format!("snapshot_{s:03}");
            if snap.format != config::SnapshotFormat::Pgm {
                let rows: Vec<FieldRow> = pts.iter().zip(&vals).map(|(&x, &value)| FieldRow { x, t: tk, value }).collect();
                let path = dir.join(format!("{stem}.csv"));
                write_csv(&path, &rows)?;
                files.push(path);
            }
            if snap.format != config::SnapshotFormat::Csv {
                // image rows run top (largest y) to bottom
                let re: Vec<f64> = (0..h).rev().flat_map(|r| vals[r * w..(r + 1) * w].iter().map(|v| v.re)).collect();
                let (img, side) = write_pgm(&dir.join(format!("{stem}.pgm")), &re, w, h, tk)?;
                files.push(img);
                files.push(side);
            }
        }
    }

    let assertions = assess(cfg, &scenario, &out, dir, &mut files)?;

    let json = dir.join("report.json");
    fs::write(&json, serde_json::to_string_pretty(&out.report)?)?;
    files.push(json);
    let text = dir.join("report.txt");
    fs::write(&text, report_text(cfg, &out, &assertions))?;
    files.push(text);
    files.push(write_manifest(dir, &files)?);
    Ok(Outcome {
        dir: dir.to_path_buf(),
        files,
        assertions,
    })
}

fn assess(
    cfg: &RunConfig,
    scenario: &crate::harness::benchmarks::Scenario,
    out: &RunOutput,
    dir: &Path,
    files: &mut Vec<PathBuf>,
) -> Result<Vec<Assertion>> {
    let mut assertions = Vec::new();
    let n_obs = cfg.observation.len();
    if cfg.reference == config::ReferenceConfig::Exact && n_obs > 0 {
        let mut obs_only = scenario.clone();
        obs_only.observation.truncate(n_obs);
        let reference = obs_only.reference_traces(&out.times)?;
        let range = (0.0, scenario.plan.valid_until());
        let mut table = String::from("m,epsilon,guarantee_time\n");
        let mut last = 0.0;
        for (m, s) in out.partial_sums.iter().enumerate() {
            let mut eps = 0.0f64;
            for p in 0..n_obs {
                eps = eps.max(error_metric(&s.trace(p), &reference.trace(p), &out.times, range)?);
            }
            writeln!(table, "{},{:.16e},{:.16e}", m + 1, eps, out.report.guarantee_time(m + 1, cfg.c)).ok();
            last = eps;
        }
        let path = dir.join("errors.csv");
        fs::write(&path, table)?;
        files.push(path);
        if let Some(max) = cfg.expect.max_error {
            assertions.push(Assertion {
                name: "max_error".into(),
                passed: last <= max,
                detail: format!("epsilon({}) = {last:.3e} over [0, {}], bound {max:.1e}", cfg.generations, range.1),
            });
        }
    } else if cfg.expect.max_error.is_some() {
        return Err(Error::config("expect.max_error", "needs an exact reference and observation points"));
    }
    if let Some(tol) = cfg.expect.huygens_tol {
        let h = huygens_summary(&out.report, tol);
        assertions.push(Assertion {
            name: "huygens".into(),
            passed: h.passed,
            detail: format!("worst ratio {:.3e}, tolerance {tol:.1e}", h.worst),
        });
    }
    Ok(assertions)
}

fn report_text(cfg: &RunConfig, out: &RunOutput, assertions: &[Assertion]) -> String {
    let r = &out.report;
    let mut s = String::new();
    writeln!(s, "run: {}", cfg.name).ok();
    writeln!(s, "patches: {}", r.patches).ok();
    writeln!(s, "unknowns: {:?}", r.unknowns).ok();
    writeln!(s, "delta_min: {:.6}", r.delta_min).ok();
    writeln!(s, "time samples: {}", out.times.len()).ok();
    writeln!(s, "frequencies: {}", cfg.frequency.j).ok();
    writeln!(s, "cached transfers: {}", r.cached_transfers).ok();
    writeln!(s, "pruned solves: {}", r.pruned.len()).ok();
    writeln!(s, "setup seconds: {:.2}", r.setup_seconds).ok();
    writeln!(s, "total seconds: {:.2}", r.total_seconds).ok();
    writeln!(s, "m, T(m), huygens ratio, max data").ok();
    for g in &r.generations {
        let dmax = g.data_max.iter().copied().fold(0.0, f64::max);
        writeln!(s, "{}, {:.4}, {:.3e}, {:.3e}", g.m, g.guarantee_time, g.huygens_ratio, dmax).ok();
    }
    for a in assertions {
        writeln!(s, "assert {} [{}]: {}", a.name, if a.passed { "PASS" } else { "FAIL" }, a.detail).ok();
    }
    s
}

/// The cavity iteration study: iteration CSV plus its pass/fail check.
pub fn execute_cavity(dir: &Path) -> Result<Outcome> {
    let rows = cavity_rows()?;
    fs::create_dir_all(dir)?;
    let patches = rows.first().map(|r| r.patches.len()).unwrap_or(0);
    let mut csv = String::from("kappa,unknowns_full,full_iterations,full_converged,max_patch_iterations");
    for j in 1..=patches {
        write!(csv, ",patch_{j}").ok();
    }
    csv.push('\n');
    for r in &rows {
        write!(csv, "{},{},{},{},{}", r.kappa, r.unknowns_full, r.full.iterations, r.full.converged, r.max_patch()).ok();
        for p in &r.patches {
            write!(csv, ",{}", p.iterations).ok();
        }
        csv.push('\n');
    }
    let path = dir.join("iterations.csv");
    fs::write(&path, csv)?;
    let mut files = vec![path];
    files.push(write_manifest(dir, &files)?);
    Ok(Outcome {
        dir: dir.to_path_buf(),
        files,
        assertions: vec![Assertion {
            name: "patch_iterations".into(),
            passed: cavity_passes(&rows),
            detail: format!("kappa {CAVITY_KAPPAS:?}: every patch below the whole arc"),
        }],
    })
}

fn print_outcome(o: &Outcome) -> i32 {
    println!("wrote {} files to {}", o.files.len(), o.dir.display());
    for a in &o.assertions {
        println!("{} [{}] {}", a.name, if a.passed { "PASS" } else { "FAIL" }, a.detail);
    }
    if o.passed() {
        0
    } else {
        1
    }
}

/// Parses arguments and runs; the return value is the exit status.
pub fn main_with(cli: Cli) -> Result<i32> {
    if cli.seed_free {
        return Err(Error::config(
            "--seed-free",
            "runs are deterministic and take no seed; drop the flag",
        ));
    }
    match cli.command {
        Command::ListBenches => {
            for n in crate::harness::benchmarks::NAMES {
                println!("{n}");
            }
            Ok(0)
        }
        Command::Run { config } => {
            let cfg = RunConfig::from_json(&fs::read_to_string(&config)?)?;
            if let (None, Some(n)) = (cli.workers, cfg.workers) {
                // a pool set up earlier in the process keeps its size
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
            }
            let dir = cli.out.or_else(|| cfg.output.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(format!("out/{}", cfg.name)));
            Ok(print_outcome(&execute_run(&cfg, &dir)?))
        }
        Command::Bench { name } => {
            let dir = cli.out.unwrap_or_else(|| PathBuf::from(format!("out/{name}")));
            let o = if name == "cavity-iterations" {
                execute_cavity(&dir)?
            } else {
                execute_run(&bench_config(&name)?, &dir)?
            };
            Ok(print_outcome(&o))
        }
        Command::Check { ids } => {
            let suite = Suite::new();
            let ids: Vec<usize> = if ids.is_empty() { (1..=crate::harness::acceptance::NAMES.len()).collect() } else { ids };
            let mut ok = true;
            for id in ids {
                let r = suite.criterion(id);
                println!("{}", r.line());
                ok &= r.passed;
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}
