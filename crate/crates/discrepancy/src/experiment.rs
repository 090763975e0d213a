//! Seeded experiment sweeps with CSV output.
//!
//! A config is flat key-value text with repeated `sweep` blocks. Trials fan
//! out across a rayon pool (size from the `DISC_WORKERS` env var, or the
//! `workers` key); each trial owns its derived generator stream, and rows
//! are merged in trial order, so the CSV is independent of scheduling.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{self, MultiplicityProfile};
use crate::lll::{self, PipelineConfig, PipelinePath};
use crate::oracle;
use crate::rounding::beck_fiala_color;
use crate::sampler::{sample_subset, sample_t_sparse, SampleConfig};
use crate::set_system::{Coloring, SetSystem};

pub const CSV_HEADER: &str =
    "seed,n,m,t,algorithm,path,disc,threshold,fallback,resamples,girth,wall_ms";

/// Coloring route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Lattice when the multiplicity gate passes, else the LLL pipeline.
    Auto,
    BeckFiala,
    Lll,
    Lattice,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "bf" => Ok(Algorithm::BeckFiala),
            "lll" => Ok(Algorithm::Lll),
            "lattice" => Ok(Algorithm::Lattice),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::BeckFiala => "bf",
            Algorithm::Lll => "lll",
            Algorithm::Lattice => "lattice",
        }
    }
}

/// One sweep block: a grid of `t` values, each run for `trials` seeds per
/// algorithm.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n: usize,
    pub m: usize,
    pub t_values: Vec<usize>,
    pub trials: u64,
    pub algorithms: Vec<Algorithm>,
    /// Element inclusion probability for hereditary runs; 1.0 colors the
    /// full ground set.
    pub y_prob: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub workers: Option<usize>,
    pub sweeps: Vec<SweepSpec>,
}

impl ExperimentConfig {
    /// Parses the flat key-value format. `#` starts a comment; a bare
    /// `sweep` line opens a new block; `key = value` lines fill the current
    /// block (or the globals before the first block).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            master_seed: 0,
            workers: None,
            sweeps: Vec::new(),
        };
        let mut current: Option<SweepSpec> = None;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "sweep" {
                if let Some(s) = current.take() {
                    cfg.sweeps.push(validate_sweep(s)?);
                }
                current = Some(SweepSpec {
                    n: 0,
                    m: 0,
                    t_values: Vec::new(),
                    trials: 0,
                    algorithms: Vec::new(),
                    y_prob: 1.0,
                });
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected 'key = value', got {line:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Parse { line: line_no, msg };
            match (&mut current, key) {
                (None, "master_seed") => {
                    cfg.master_seed = value.parse().map_err(|_| bad("bad master_seed".into()))?;
                }
                (None, "workers") => {
                    cfg.workers = Some(value.parse().map_err(|_| bad("bad workers".into()))?);
                }
                (Some(s), "n") => s.n = value.parse().map_err(|_| bad("bad n".into()))?,
                (Some(s), "m") => s.m = value.parse().map_err(|_| bad("bad m".into()))?,
                (Some(s), "t") => {
                    s.t_values = parse_t_values(value).map_err(&bad)?;
                }
                (Some(s), "trials") => {
                    s.trials = value.parse().map_err(|_| bad("bad trials".into()))?;
                }
                (Some(s), "algorithms") => {
                    s.algorithms = value
                        .split(',')
                        .map(|a| Algorithm::parse(a.trim()))
                        .collect::<Result<_>>()?;
                }
                (Some(s), "y_prob") => {
                    s.y_prob = value.parse().map_err(|_| bad("bad y_prob".into()))?;
                    if !(0.0..=1.0).contains(&s.y_prob) {
                        return Err(bad("y_prob outside [0, 1]".into()));
                    }
                }
                (_, other) => {
                    return Err(bad(format!("unknown key {other:?}")));
                }
            }
        }
        if let Some(s) = current.take() {
            cfg.sweeps.push(validate_sweep(s)?);
        }
        Ok(cfg)
    }
}

fn validate_sweep(s: SweepSpec) -> Result<SweepSpec> {
    if s.t_values.is_empty() {
        return Err(Error::Config("sweep has no t values".into()));
    }
    if s.algorithms.is_empty() {
        return Err(Error::Config("sweep has no algorithms".into()));
    }
    for &t in &s.t_values {
        if t > s.m || t == 0 {
            return Err(Error::Config(format!("t = {t} invalid for m = {}", s.m)));
        }
    }
    Ok(s)
}

/// `t` syntax: `6`, `4..10` (inclusive), or `2,3,5`.
fn parse_t_values(value: &str) -> std::result::Result<Vec<usize>, String> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range {value:?}"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range {value:?}"))?;
        if lo > hi {
            return Err(format!("empty range {value:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    value
        .split(',')
        .map(|v| v.trim().parse().map_err(|_| format!("bad t value {v:?}")))
        .collect()
}

/// splitmix64-style mixing of a master seed with trial coordinates, so every
/// (sweep, t, trial) gets an independent reproducible stream.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        state = state.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}

/// One CSV row.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub algorithm: Algorithm,
    pub path: String,
    pub disc: i64,
    pub threshold: Option<u64>,
    pub fallback: bool,
    pub resamples: u64,
    pub girth: Option<usize>,
    pub wall_ms: u128,
}

impl TrialRecord {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.m,
            self.t,
            self.algorithm.name(),
            self.path,
            self.disc,
            self.threshold.map_or(String::new(), |v| v.to_string()),
            self.fallback,
            self.resamples,
            self.girth.map_or("inf".to_string(), |g| g.to_string()),
            self.wall_ms,
        )
    }
}

/// Runs one algorithm on one sampled instance and restriction.
pub fn run_trial(
    sys: &SetSystem,
    subset: &[usize],
    algorithm: Algorithm,
    seed: u64,
) -> Result<(Coloring, TrialRecord)> {
    let start = Instant::now();
    let t = sys.sparsity();
    let classification = lll::classify(sys, subset);
    let graph = lll::large_set_graph(sys, subset, &classification);
    let girth = lll::girth_of_large_graph(&graph);

    let effective = match algorithm {
        Algorithm::Auto => {
            if lattice_gate(sys).is_some() {
                Algorithm::Lattice
            } else {
                Algorithm::Lll
            }
        }
        other => other,
    };

    let (chi, path, threshold, fallback, resamples) = match effective {
        Algorithm::BeckFiala => {
            let chi = beck_fiala_color(sys, subset)?;
            (chi, "bf".to_string(), None, false, 0)
        }
        Algorithm::Lll => {
            let (chi, report) = lll::color_pipeline(sys, subset, seed, &PipelineConfig::default())?;
            let path = match report.path {
                PipelinePath::Matching => "matching".to_string(),
                PipelinePath::Fallback(_) => "fallback".to_string(),
            };
            let fb = report.took_fallback();
            (chi, path, Some(report.threshold), fb, report.resamples)
        }
        Algorithm::Lattice => match lattice_gate(sys) {
            Some(profile) if subset.len() == sys.n() => {
                match lattice_color_on_system(sys, &profile, seed) {
                    Ok(chi) => (chi, "lattice".to_string(), None, false, 0),
                    Err(_) => {
                        let chi = beck_fiala_color(sys, subset)?;
                        (chi, "fallback".to_string(), None, true, 0)
                    }
                }
            }
            _ => {
                // gate failed (or a proper restriction was requested, which
                // breaks full coverage): sound fallback
                let chi = beck_fiala_color(sys, subset)?;
                (chi, "fallback".to_string(), None, true, 0)
            }
        },
        Algorithm::Auto => unreachable!(),
    };

    let disc = sys.coloring_discrepancy(&chi);
    let record = TrialRecord {
        seed,
        n: sys.n(),
        m: sys.m(),
        t,
        algorithm,
        path,
        disc,
        threshold,
        fallback,
        resamples,
        girth,
        wall_ms: start.elapsed().as_millis(),
    };
    Ok((chi, record))
}

/// The lattice-route gate: all columns exactly size `t`, `4 <= t <= m - 4`, and
/// every possible column present with multiplicity at least 7. Returns the
/// profile when it passes.
pub fn lattice_gate(sys: &SetSystem) -> Option<MultiplicityProfile> {
    let t = sys.sparsity();
    let m = sys.m();
    if t < 4 || t + 4 > m {
        return None;
    }
    let profile = MultiplicityProfile::from_system(sys).ok()?;
    let (min, _missing) = lattice::coverage_check(&profile);
    (min >= 7).then_some(profile)
}

fn lattice_color_on_system(
    sys: &SetSystem,
    profile: &MultiplicityProfile,
    seed: u64,
) -> Result<Coloring> {
    let schedule = lattice::lattice_color(profile, seed)?;
    schedule.apply_to_system(sys)
}

/// Runs every sweep and returns the CSV (header + one row per trial and
/// algorithm, ordered by sweep, t, trial, algorithm).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<String> {
    let workers = std::env::var("DISC_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(cfg.workers);
    let pool = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    // enumerate jobs at instance granularity: one job samples a system once
    // and runs every algorithm on it
    struct Job {
        order: (usize, usize, u64),
        sweep: usize,
        t: usize,
        trial: u64,
    }
    let mut jobs = Vec::new();
    for (si, sweep) in cfg.sweeps.iter().enumerate() {
        for (ti, &t) in sweep.t_values.iter().enumerate() {
            for trial in 0..sweep.trials {
                jobs.push(Job {
                    order: (si, ti, trial),
                    sweep: si,
                    t,
                    trial,
                });
            }
        }
    }

    let mut results: Vec<((usize, usize, u64), Vec<TrialRecord>)> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let sweep = &cfg.sweeps[job.sweep];
                let seed = derive_seed(
                    cfg.master_seed,
                    &[job.sweep as u64, job.t as u64, job.trial],
                );
                let sys = sample_t_sparse(&SampleConfig {
                    n: sweep.n,
                    m: sweep.m,
                    t: job.t,
                    seed,
                })?;
                let subset = if sweep.y_prob >= 1.0 {
                    (0..sys.n()).collect()
                } else {
                    sample_subset(sys.n(), sweep.y_prob, derive_seed(seed, &[1]))
                };
                let mut rows = Vec::new();
                for &algorithm in &sweep.algorithms {
                    let (_, record) = run_trial(&sys, &subset, algorithm, seed)?;
                    rows.push(record);
                }
                Ok(((job.order), rows))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by_key(|(order, _)| *order);

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (_, rows) in results {
        for row in rows {
            csv.push_str(&row.to_csv());
            csv.push('\n');
        }
    }
    Ok(csv)
}

/// Girth of G' over `trials` sampled instances; `None` entries mean acyclic.
pub fn girth_stats(
    n: usize,
    m: usize,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<Option<usize>>> {
    (0..trials)
        .map(|trial| {
            let sys = sample_t_sparse(&SampleConfig {
                n,
                m,
                t,
                seed: derive_seed(seed, &[trial]),
            })?;
            let subset: Vec<usize> = (0..sys.n()).collect();
            let classification = lll::classify(&sys, &subset);
            let graph = lll::large_set_graph(&sys, &subset, &classification);
            Ok(lll::girth_of_large_graph(&graph))
        })
        .collect()
}

/// Checks a coloring against a bound and surfaces the verdict the way the
/// CLI reports it.
pub fn verify(sys: &SetSystem, chi: &Coloring, bound: i64) -> (bool, Option<usize>, i64) {
    let (ok, witness) = oracle::verify_coloring(sys, chi, bound);
    (ok, witness, sys.coloring_discrepancy(chi))
}
