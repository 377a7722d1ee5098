//! Command-line front end for the contagion solvers: instance generation,
//! solving, treewidth inspection, experiment sweeps, and oracle comparison.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 size/trial guard, and 3
//! verification failure (including NoSolutionFound and oracle mismatches).

pub mod experiments;
pub mod formats;
pub mod gen;
pub mod oracle;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use contagion_core::contagion::{
    bruteforce_edge_deletion_min, bruteforce_edge_deletion_stop, solve_min_contagion_tw,
    solve_randomized_fpt, solve_stop_contagion_tw, ContagionError, DeletionSolution,
    MinContagionInstance, StopContagionInstance,
};
use contagion_core::decomposition::{
    self, exact_treewidth_small, heuristic_decomposition, validate, DecompositionError, Strategy,
    EXACT_TW_LIMIT,
};
use contagion_core::gidm::GidmError;
use contagion_core::models::ModelError;
use contagion_core::percolation::{PercolationError, ThresholdMap};
use contagion_core::Graph;
use thiserror::Error;

use experiments::{
    run_edgespan, run_local_tw, run_spread, write_rows, EdgespanConfig, ExperimentError,
    LocalTwConfig, OutputFormat, SpreadConfig,
};
use formats::{FormatError, SolutionReport};
use gen::{ModelSpec, SpecError};
use oracle::{OracleError, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Contagion(#[from] ContagionError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle comparison failed on {failures} of {total} instances")]
    OracleMismatch { failures: usize, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn percolation_code(e: &PercolationError) -> i32 {
    match e {
        PercolationError::SeedImmunized(_) => 1,
        PercolationError::TooLarge(_) => 2,
    }
}

fn gidm_code(e: &GidmError) -> i32 {
    match e {
        GidmError::InvalidInstance(_) => 1,
        GidmError::TooLarge { .. } => 2,
        GidmError::InvalidDecomposition(_) | GidmError::IllegalState(_) => 3,
    }
}

fn contagion_code(e: &ContagionError) -> i32 {
    match e {
        ContagionError::InvalidInstance(_) => 1,
        ContagionError::TooLarge { .. } | ContagionError::TrialBudget { .. } => 2,
        ContagionError::NoSolutionFound | ContagionError::IllegalState(_) => 3,
        ContagionError::Gidm(inner) => gidm_code(inner),
        ContagionError::Percolation(inner) => percolation_code(inner),
    }
}

fn decomposition_code(e: &DecompositionError) -> i32 {
    match e {
        DecompositionError::TooLarge { .. } | DecompositionError::NoConnectedSubgraph { .. } => 2,
        DecompositionError::InvalidInput(_) => 3,
        DecompositionError::KOutOfRange { .. } | DecompositionError::Parse(_) => 1,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Format(_)
            | CliError::Spec(_)
            | CliError::Model(_)
            | CliError::Io(_) => 1,
            CliError::Decomposition(e) => decomposition_code(e),
            CliError::Contagion(e) => contagion_code(e),
            CliError::Experiment(e) => match e {
                ExperimentError::BadConfig(_) | ExperimentError::Spec(_) => 1,
                ExperimentError::Decomposition(inner) => decomposition_code(inner),
                ExperimentError::Percolation(inner) => percolation_code(inner),
                ExperimentError::Io(_) => 1,
            },
            CliError::Oracle(e) => match e {
                OracleError::Gidm(inner) => gidm_code(inner),
                OracleError::Contagion(inner) => contagion_code(inner),
                OracleError::Io(_) => 1,
            },
            CliError::OracleMismatch { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Min,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Tw,
    Random,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TwStrategy {
    MinDegree,
    MinFill,
    Exact,
    Best,
}

#[derive(Debug, Parser)]
#[command(
    name = "contagion",
    version,
    about = "Edge-deletion solvers and experiments for bootstrap percolation"
)]
pub struct Cli {
    /// Root seed; every derived stream hashes it with a purpose and indices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format for experiment sweeps.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file (stdout when omitted). oracle-compare treats this as the
    /// dump directory for failing instances.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for experiment sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph from a model spec as an edge-list file.
    Generate {
        /// Model spec, e.g. gnp:n=100,d=3 | regular:n=50,d=3 | tree:n=100,delta=3
        /// | noisytree:n=1000,delta=3,eps=1.0 | grid:side=20 | path:n=5 | star:n=9
        #[arg(long)]
        model: String,
    },
    /// Solve a Minimizing or Stopping Contagion instance from files.
    Solve {
        #[arg(long, value_enum)]
        problem: Problem,
        /// Edge-list graph file ("n m" header, one "u v" per line).
        #[arg(long)]
        graph: PathBuf,
        /// Seed vertices, one id per line.
        #[arg(long)]
        seeds: PathBuf,
        /// Uniform threshold for non-seed vertices.
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Allowed non-seed infections (min problem only).
        #[arg(long, default_value_t = 0)]
        slack: usize,
        /// Protected vertices, one id per line (stop problem only).
        #[arg(long)]
        protected: Option<PathBuf>,
        /// Threshold overrides, one "v t" per line (t integer or inf).
        #[arg(long)]
        thresholds: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Tw)]
        method: Method,
        /// Randomized method: bound on extra infections explored (defaults to slack).
        #[arg(long)]
        r_max: Option<usize>,
        /// Randomized method: anticipated solution size.
        #[arg(long, default_value_t = 2)]
        budget_hint: usize,
        /// Randomized method: independent batches (the success guarantee is per batch).
        #[arg(long, default_value_t = 1)]
        batches: usize,
    },
    /// Decompose a graph file, validate the decomposition, and print it.
    Treewidth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = TwStrategy::Best)]
        strategy: TwStrategy,
    },
    /// Sample local treewidth of connected k-subgraphs over G(n, d/n) cells.
    ExperimentLocaltw {
        #[arg(long, value_delimiter = ',', default_value = "16384")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Sample one explicit model instead of the (n, d) sweep.
        #[arg(long)]
        model: Option<String>,
    },
    /// Measure percolation spread of random seed sets on one model.
    ExperimentSpread {
        #[arg(long, default_value = "noisytree:n=10000,delta=3,eps=1.0")]
        model: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,6")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Flag trials with spread > ceiling * k.
        #[arg(long, default_value_t = 10.0)]
        ceiling: f64,
    },
    /// Sample edge counts of connected k-subgraphs of a noisy tree.
    ExperimentEdgespan {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        delta: u32,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Compare a solver against its exhaustive oracle on random instances.
    OracleCompare {
        /// gidm, min, or stop.
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Negative control: perturb the solver answer so every instance fails.
        #[arg(long, hide = true)]
        inject_mutant: bool,
    },
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_summary(lines: &[String]) {
    for line in lines {
        eprintln!("{line}");
    }
}

fn to_output_format(format: Format) -> OutputFormat {
    match format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    }
}

fn solve_command(
    problem: Problem,
    graph: &Path,
    seeds_path: &Path,
    r: u32,
    slack: usize,
    protected: Option<&Path>,
    thresholds: Option<&Path>,
    method: Method,
    r_max: Option<usize>,
    budget_hint: usize,
    batches: usize,
    seed: u64,
) -> Result<SolutionReport, CliError> {
    let g = formats::read_graph(graph)?;
    let seed_set = formats::read_vertex_list(seeds_path)?;
    let mut t = ThresholdMap::uniform_with_seeds(g.n(), r, &seed_set);
    if let Some(path) = thresholds {
        t = formats::apply_threshold_overrides(path, t)?;
    }
    let n = g.n();
    let m = g.m();
    let solution: DeletionSolution = match problem {
        Problem::Min => {
            let inst = MinContagionInstance::new(g, seed_set, t, slack)?;
            match method {
                Method::Tw => solve_min_contagion_tw(&inst)?,
                Method::Brute => bruteforce_edge_deletion_min(&inst)?,
                Method::Random => {
                    let r_max = r_max.unwrap_or(inst.slack);
                    solve_randomized_fpt(&inst, r_max, budget_hint, batches, seed)?
                }
            }
        }
        Problem::Stop => {
            let protected_path = protected
                .ok_or_else(|| CliError::Usage("--problem stop requires --protected".into()))?;
            let protected_set = formats::read_vertex_list(protected_path)?;
            let inst = StopContagionInstance::new(g, seed_set, protected_set, t)?;
            match method {
                Method::Tw => solve_stop_contagion_tw(&inst)?,
                Method::Brute => bruteforce_edge_deletion_stop(&inst)?,
                Method::Random => {
                    return Err(CliError::Usage(
                        "--method random solves the min problem only".into(),
                    ))
                }
            }
        }
    };
    Ok(SolutionReport {
        problem: match problem {
            Problem::Min => "min".into(),
            Problem::Stop => "stop".into(),
        },
        n,
        m,
        deleted_edges: solution.deleted.clone(),
        additional_infected: solution.additional_infected,
        budget: solution.deleted.len(),
        verified: true,
    })
}

fn treewidth_command(g: &Graph, strategy: TwStrategy) -> Result<(String, usize), CliError> {
    let td = match strategy {
        TwStrategy::MinDegree => heuristic_decomposition(g, Strategy::MinDegree),
        TwStrategy::MinFill => heuristic_decomposition(g, Strategy::MinFill),
        TwStrategy::Exact => exact_treewidth_small(g, EXACT_TW_LIMIT)?.1,
        TwStrategy::Best => {
            if g.n() <= EXACT_TW_LIMIT {
                exact_treewidth_small(g, EXACT_TW_LIMIT)?.1
            } else {
                let a = heuristic_decomposition(g, Strategy::MinDegree);
                let b = heuristic_decomposition(g, Strategy::MinFill);
                if a.width() <= b.width() {
                    a
                } else {
                    b
                }
            }
        }
    };
    validate(g, &td).map_err(DecompositionError::InvalidInput)?;
    Ok((decomposition::to_text(&td), td.width()))
}

/// Runs one parsed command line; the caller maps errors to exit codes.
pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        // Ignore the error when a pool already exists (repeat run() calls in
        // one process, as in tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Generate { model } => {
            let spec: ModelSpec = model.parse()?;
            let g = spec.build(cli.seed)?;
            write_output(&formats::graph_to_string(&g), out)
        }
        Command::Solve {
            problem,
            graph,
            seeds,
            r,
            slack,
            protected,
            thresholds,
            method,
            r_max,
            budget_hint,
            batches,
        } => {
            let report = solve_command(
                problem,
                &graph,
                &seeds,
                r,
                slack,
                protected.as_deref(),
                thresholds.as_deref(),
                method,
                r_max,
                budget_hint,
                batches,
                cli.seed,
            )?;
            write_output(&report.to_json(), out)
        }
        Command::Treewidth { graph, strategy } => {
            let g = formats::read_graph(&graph)?;
            let (text, width) = treewidth_command(&g, strategy)?;
            eprintln!("width {width} (validated)");
            write_output(&text, out)
        }
        Command::ExperimentLocaltw { n, d, k, trials, model } => {
            let model = model.map(|m| m.parse::<ModelSpec>()).transpose()?;
            let config = LocalTwConfig { model, ns: n, ds: d, ks: k, trials, seed: cli.seed };
            let result = run_local_tw(&config)?;
            print_summary(&result.summary);
            write_rows(&result.rows, to_output_format(cli.format), out).map_err(CliError::Io)
        }
        Command::ExperimentSpread { model, k, trials, r, ceiling } => {
            let config = SpreadConfig {
                model: model.parse()?,
                ks: k,
                trials,
                r,
                ceiling,
                seed: cli.seed,
            };
            let result = run_spread(&config)?;
            print_summary(&result.summary);
            write_rows(&result.rows, to_output_format(cli.format), out).map_err(CliError::Io)
        }
        Command::ExperimentEdgespan { n, delta, eps, k, trials } => {
            let config = EdgespanConfig { n, delta, eps, ks: k, trials, seed: cli.seed };
            let result = run_edgespan(&config)?;
            print_summary(&result.summary);
            write_rows(&result.rows, to_output_format(cli.format), out).map_err(CliError::Io)
        }
        Command::OracleCompare { suite, count, inject_mutant } => {
            let dump_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("oracle-failures"));
            let report = oracle::run_oracle(suite, count, cli.seed, inject_mutant, &dump_dir)?;
            print!("{}", report.render());
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::OracleMismatch { failures: report.failures.len(), total: count })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(
            CliError::Contagion(ContagionError::TooLarge { edges: 30, limit: 22 }).exit_code(),
            2
        );
        assert_eq!(CliError::Contagion(ContagionError::NoSolutionFound).exit_code(), 3);
        assert_eq!(CliError::OracleMismatch { failures: 1, total: 2 }.exit_code(), 3);
        assert_eq!(
            CliError::Decomposition(DecompositionError::TooLarge { n: 99, limit: 12 }).exit_code(),
            2
        );
    }

    #[test]
    fn cli_parses_every_subcommand() {
        Cli::try_parse_from(["contagion", "generate", "--model", "path:n=5"]).unwrap();
        Cli::try_parse_from([
            "contagion", "solve", "--problem", "min", "--graph", "g", "--seeds", "s",
        ])
        .unwrap();
        Cli::try_parse_from(["contagion", "treewidth", "--graph", "g"]).unwrap();
        Cli::try_parse_from(["contagion", "experiment-localtw", "--n", "64", "--k", "4,8"])
            .unwrap();
        Cli::try_parse_from(["contagion", "experiment-spread", "--model", "grid:side=5"]).unwrap();
        Cli::try_parse_from(["contagion", "experiment-edgespan", "--n", "500"]).unwrap();
        Cli::try_parse_from(["contagion", "oracle-compare", "--suite", "min", "--seed", "4"])
            .unwrap();
        assert!(Cli::try_parse_from(["contagion", "bogus"]).is_err());
    }
}
