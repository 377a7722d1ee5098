//! Experiment campaigns: local treewidth sampling, percolation spread, and
//! edge span of connected subgraphs in noisy trees.
//!
//! Every trial derives its own seed from (root seed, experiment id, cell,
//! trial index), so rows are independent of thread count and reproducible in
//! isolation. Rows are sorted by cell and trial before writing; fitted
//! constants and other non-reproducible summary lines go to stderr, never
//! into the output file.

use std::io::Write;
use std::path::Path;

use contagion_core::decomposition::{connected_sample_pool, grow_connected, local_treewidth_sample};
use contagion_core::models::grid_perimeter;
use contagion_core::percolation::{percolate, ThresholdMap};
use contagion_core::seeds;
use rayon::prelude::*;
use serde::Serialize;

use crate::gen::{random_seed_set, ModelSpec, SpecError};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("bad experiment config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Decomposition(#[from] contagion_core::decomposition::DecompositionError),
    #[error(transparent)]
    Percolation(#[from] contagion_core::percolation::PercolationError),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

fn require(ok: bool, message: &str) -> Result<(), ExperimentError> {
    if ok {
        Ok(())
    } else {
        Err(ExperimentError::BadConfig(message.to_string()))
    }
}

// One derived u64 per (purpose, cell, trial); logged in the row so any row
// can be regenerated without replaying the sweep.
fn derived_seed(root: u64, purpose: &str, indices: &[u64]) -> u64 {
    use rand::Rng;
    seeds::substream(root, purpose, indices).gen()
}

/// Output of one experiment command: serializable rows plus human-oriented
/// summary lines destined for stderr.
pub struct ExperimentOutput<T> {
    pub rows: Vec<T>,
    pub summary: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Writes rows as CSV (header from field names) or a pretty JSON array to
/// `out`, or stdout when `out` is None. Bytes depend only on the rows.
pub fn write_rows<T: Serialize>(
    rows: &[T],
    format: OutputFormat,
    out: Option<&Path>,
) -> std::io::Result<()> {
    let bytes = match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            s.into_bytes()
        }
    };
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(&bytes),
    }
}

// Least-squares slope through the origin; 0 when the predictor is all zero.
fn fit_through_origin(points: &[(f64, f64)]) -> f64 {
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Local treewidth sweep over G(n, d/n) cells, or over one explicit model
/// (then `ns`/`ds` are unused and rows carry the graph's n with d = 0).
pub struct LocalTwConfig {
    pub model: Option<ModelSpec>,
    pub ns: Vec<usize>,
    pub ds: Vec<u32>,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct LocalTwRow {
    pub experiment: &'static str,
    pub n: usize,
    pub d: u32,
    pub k: usize,
    pub trials: usize,
    /// Max sampled treewidth; a lower bound on t_k (certified when exact).
    pub width_estimate: usize,
    /// Max edge-excess upper bound over the sampled subgraphs.
    pub excess_bound: usize,
    pub exact: bool,
    pub cell_seed: u64,
}

pub fn run_local_tw(config: &LocalTwConfig) -> Result<ExperimentOutput<LocalTwRow>, ExperimentError> {
    if config.model.is_none() {
        require(!config.ns.is_empty() && !config.ds.is_empty(), "empty sweep")?;
        require(config.ns.iter().all(|&n| n > 0), "n values must be positive")?;
    }
    require(!config.ks.is_empty(), "empty sweep")?;
    require(config.ks.iter().all(|&k| k > 0), "k values must be positive")?;
    require(config.trials >= 1, "trials must be >= 1")?;

    // Cells are (n, d, k); an explicit model collapses the (n, d) sweep to
    // one graph tagged d = 0.
    let mut cells = Vec::new();
    let fixed = match &config.model {
        Some(spec) => {
            let g = spec.build(derived_seed(config.seed, "localtw-gen", &[0, 0]))?;
            for &k in &config.ks {
                cells.push((g.n(), 0u32, k));
            }
            Some(g)
        }
        None => {
            for &n in &config.ns {
                for &d in &config.ds {
                    for &k in &config.ks {
                        cells.push((n, d, k));
                    }
                }
            }
            None
        }
    };
    cells.sort_unstable();
    cells.dedup();

    let rows: Result<Vec<LocalTwRow>, ExperimentError> = cells
        .par_iter()
        .map(|&(n, d, k)| {
            let g = match &fixed {
                Some(g) => g.clone(),
                None => {
                    let spec = ModelSpec::Gnp { n, p: d as f64 / n as f64 };
                    spec.build(derived_seed(config.seed, "localtw-gen", &[n as u64, d as u64]))?
                }
            };
            let cell_seed = derived_seed(config.seed, "localtw-cell", &[n as u64, d as u64, k as u64]);
            let est = local_treewidth_sample(&g, k, config.trials, cell_seed)?;
            Ok(LocalTwRow {
                experiment: "localtw",
                n,
                d,
                k,
                trials: config.trials,
                width_estimate: est.lower,
                excess_bound: est.upper_excess,
                exact: est.exact,
                cell_seed,
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by_key(|r| (r.n, r.d, r.k));

    // Trend fit: width estimate against k * ln d / ln n (d >= 2, n >= 3).
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.d >= 2 && r.n >= 3)
        .map(|r| {
            let x = r.k as f64 * (r.d as f64).ln() / (r.n as f64).ln();
            (x, r.width_estimate as f64)
        })
        .collect();
    let summary = vec![format!(
        "localtw fit: width ~ C * k * ln(d)/ln(n), C = {:.4} over {} cells",
        fit_through_origin(&points),
        points.len()
    )];
    Ok(ExperimentOutput { rows, summary })
}

/// Percolation spread sweep on one model over seed-set sizes.
pub struct SpreadConfig {
    pub model: ModelSpec,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub r: u32,
    /// Trials with spread > ceiling * k are flagged in their row.
    pub ceiling: f64,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct SpreadRow {
    pub experiment: &'static str,
    pub n: usize,
    pub k: usize,
    pub trial: usize,
    /// Non-seed vertices infected.
    pub spread: usize,
    pub rounds: usize,
    pub flagged: bool,
    pub trial_seed: u64,
}

pub fn run_spread(config: &SpreadConfig) -> Result<ExperimentOutput<SpreadRow>, ExperimentError> {
    require(!config.ks.is_empty(), "empty sweep")?;
    require(config.trials >= 1, "trials must be >= 1")?;
    require(config.ceiling > 0.0, "ceiling must be positive")?;
    require(config.r >= 1, "threshold r must be >= 1")?;

    let g = config.model.build(config.seed)?;
    let n = g.n();
    let mut ks = config.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    require(ks.iter().all(|&k| k <= n), "k exceeds n")?;

    let mut cells = Vec::new();
    for &k in &ks {
        for trial in 0..config.trials {
            cells.push((k, trial));
        }
    }
    let rows: Result<Vec<SpreadRow>, ExperimentError> = cells
        .par_iter()
        .map(|&(k, trial)| {
            let trial_seed = derived_seed(config.seed, "spread", &[k as u64, trial as u64]);
            let mut rng = seeds::rng_from_seed(trial_seed);
            let seeds = random_seed_set(n, k, &mut rng);
            let t = ThresholdMap::uniform_with_seeds(n, config.r, &seeds);
            let trace = percolate(&g, &t, &seeds)?;
            let spread = trace.spread();
            let flagged = spread as f64 > config.ceiling * k as f64;
            Ok(SpreadRow {
                experiment: "spread",
                n,
                k,
                trial,
                spread,
                rounds: trace.rounds.len() - 1,
                flagged,
                trial_seed,
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by_key(|r| (r.k, r.trial));

    let mut summary = Vec::new();
    for &k in &ks {
        let max_spread = rows.iter().filter(|r| r.k == k).map(|r| r.spread).max().unwrap_or(0);
        let flagged = rows.iter().filter(|r| r.k == k && r.flagged).count();
        summary.push(format!(
            "spread k={k}: max spread {max_spread} over {} trials, {} flagged (ceiling {}k)",
            config.trials, flagged, config.ceiling
        ));
    }
    if let ModelSpec::Grid { .. } = config.model {
        // Grids obey spread <= c * k^2; report the fitted constant.
        let c = rows
            .iter()
            .filter(|r| r.k > 0)
            .map(|r| r.spread as f64 / (r.k * r.k) as f64)
            .fold(0.0f64, f64::max);
        summary.push(format!("spread grid fit: spread <= c * k^2 with c = {c:.4}"));
    }
    Ok(ExperimentOutput { rows, summary })
}

/// Checks perimeter monotonicity along one percolation on a grid; returns the
/// perimeter after each round. Used by the spread harness on grid models and
/// by the acceptance suite.
pub fn grid_perimeter_profile(
    side: usize,
    seeds: &contagion_core::VertexSet,
    r: u32,
) -> Result<Vec<usize>, ExperimentError> {
    let g = contagion_core::models::grid(side);
    let t = ThresholdMap::uniform_with_seeds(g.n(), r, seeds);
    let trace = percolate(&g, &t, seeds)?;
    let mut active = contagion_core::VertexSet::new();
    let mut profile = Vec::with_capacity(trace.rounds.len());
    for round in &trace.rounds {
        active = active.union(round);
        profile.push(grid_perimeter(side, &active));
    }
    Ok(profile)
}

/// Edge-span sweep: connected k-subgraphs of one noisy tree.
pub struct EdgespanConfig {
    pub n: usize,
    pub delta: u32,
    pub eps: f64,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct EdgespanRow {
    pub experiment: &'static str,
    pub n: usize,
    pub delta: u32,
    pub eps: f64,
    pub k: usize,
    pub trial: usize,
    /// Edges induced by the sampled connected k-set.
    pub edges: usize,
    /// Edges beyond a spanning tree: edges - (k - 1).
    pub excess: usize,
    pub trial_seed: u64,
}

pub fn run_edgespan(config: &EdgespanConfig) -> Result<ExperimentOutput<EdgespanRow>, ExperimentError> {
    require(!config.ks.is_empty(), "empty sweep")?;
    require(config.trials >= 1, "trials must be >= 1")?;
    require(config.n > 0, "n must be positive")?;

    let spec = ModelSpec::NoisyTree { n: config.n, delta: config.delta, eps: config.eps };
    let g = spec.build(config.seed)?;
    let mut ks = config.ks.clone();
    ks.sort_unstable();
    ks.dedup();

    let mut rows = Vec::new();
    for &k in &ks {
        // The noisy tree is connected (it contains the base tree), so the
        // pool is all of V; computed once per k, not per trial.
        let pool = connected_sample_pool(&g, k)?;
        let trial_rows: Vec<EdgespanRow> = (0..config.trials)
            .into_par_iter()
            .map(|trial| {
                let trial_seed = derived_seed(config.seed, "edgespan", &[k as u64, trial as u64]);
                let mut rng = seeds::rng_from_seed(trial_seed);
                let sample = grow_connected(&g, k, &pool, &mut rng);
                // Induced edge count without materializing the subgraph; the
                // host graph is large and samples are tiny.
                let edges = sample
                    .iter()
                    .map(|u| g.neighbors(u).iter().filter(|&&v| v > u && sample.contains(v)).count())
                    .sum::<usize>();
                EdgespanRow {
                    experiment: "edgespan",
                    n: config.n,
                    delta: config.delta,
                    eps: config.eps,
                    k,
                    trial,
                    edges,
                    excess: edges - (k - 1),
                    trial_seed,
                }
            })
            .collect();
        rows.extend(trial_rows);
    }
    rows.sort_by_key(|r| (r.k, r.trial));

    let mut summary = Vec::new();
    let mut worst_c = 0.0f64;
    for &k in &ks {
        let max_excess = rows.iter().filter(|r| r.k == k).map(|r| r.excess).max().unwrap_or(0);
        let c = excess_fit_constant(max_excess, k, config.delta, config.n);
        worst_c = worst_c.max(c);
        summary.push(format!(
            "edgespan k={k}: max excess {max_excess} over {} trials, fitted C = {c:.4}",
            config.trials
        ));
    }
    summary.push(format!(
        "edgespan fit: excess <= 1 + C * k(ln k + ln delta)/ln n with C = {worst_c:.4}"
    ));
    Ok(ExperimentOutput { rows, summary })
}

/// Smallest C with max_excess <= 1 + C * k(ln k + ln delta)/ln n; 0 when the
/// excess is within the additive term alone.
pub fn excess_fit_constant(max_excess: usize, k: usize, delta: u32, n: usize) -> f64 {
    let over = max_excess as f64 - 1.0;
    if over <= 0.0 {
        return 0.0;
    }
    let denom = k as f64 * ((k as f64).ln() + (delta as f64).ln()) / (n as f64).ln();
    over / denom
}
