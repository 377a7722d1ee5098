//! Solver-versus-oracle comparison suites. Each suite samples random
//! instances small enough for an exhaustive oracle, runs the production
//! solver, and dumps any disagreeing instance as a regression file.

use std::fmt;
use std::path::{Path, PathBuf};

use contagion_core::contagion::{
    bruteforce_edge_deletion_min, bruteforce_edge_deletion_stop, solve_min_contagion_tw,
    solve_stop_contagion_tw, ContagionError, MinContagionInstance, StopContagionInstance,
};
use contagion_core::decomposition::{heuristic_decomposition, make_nice, Strategy};
use contagion_core::gidm::{gidm_bruteforce, solve_gidm, GidmError, GidmInstance};
use contagion_core::models;
use contagion_core::percolation::{Threshold, ThresholdMap};
use contagion_core::{seeds, VertexSet};
use rand::Rng;

use crate::formats::graph_to_string;
use crate::gen::small_instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gidm,
    Min,
    Stop,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Gidm => "gidm",
            Suite::Min => "min",
            Suite::Stop => "stop",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gidm" => Ok(Suite::Gidm),
            "min" => Ok(Suite::Min),
            "stop" => Ok(Suite::Stop),
            other => Err(format!("unknown suite {other:?} (expected gidm, min, or stop)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Gidm(#[from] GidmError),
    #[error(transparent)]
    Contagion(#[from] ContagionError),
    #[error("writing dump file: {0}")]
    Io(#[from] std::io::Error),
}

pub struct OracleReport {
    pub suite: Suite,
    pub total: usize,
    /// One line per mismatching instance.
    pub failures: Vec<String>,
    pub dumped: Vec<PathBuf>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.failures {
            out.push_str(line);
            out.push('\n');
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "oracle-compare suite={} count={} failures={} -> {verdict}\n",
            self.suite,
            self.total,
            self.failures.len()
        ));
        out
    }
}

// Mirrors the randomized instance family the solver equivalence tests use:
// n in 3..=8, thresholds 0..=3 with at least one seed, random A/B, budget <= 3.
fn gidm_instance(root: u64, index: u64) -> GidmInstance {
    let mut rng = seeds::substream(root, "oracle-gidm", &[index]);
    let n = rng.gen_range(3..=8);
    let g = loop {
        let p = rng.gen_range(0.2..0.6);
        let candidate = models::gnp(n, p, rng.gen()).expect("p in range");
        if candidate.m() > 0 {
            break candidate;
        }
    };
    let mut values = Vec::new();
    for _ in 0..n {
        values.push(Threshold::Finite(rng.gen_range(0..=3)));
    }
    if !values.iter().any(|t| *t == Threshold::Finite(0)) {
        values[rng.gen_range(0..n)] = Threshold::Finite(0);
    }
    let t = ThresholdMap::from_values(values);
    let a = VertexSet::from_iter((0..n as u32).filter(|_| rng.gen_bool(0.5)));
    let b = VertexSet::from_iter((0..n as u32).filter(|_| rng.gen_bool(0.5)));
    let budget = rng.gen_range(0..=3);
    GidmInstance::new(g, t, a, b, budget).expect("generator respects instance invariants")
}

fn dump(
    dir: &Path,
    name: &str,
    graph_text: &str,
    notes: &[(&str, String)],
) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut contents = String::from(graph_text);
    for (key, value) in notes {
        contents.push_str(&format!("# {key}: {value}\n"));
    }
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn set_text(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs `count` instances of one suite against its exhaustive oracle.
/// `mutate` perturbs the solver's answer by one, a negative control that must
/// make every instance fail. Disagreements are dumped under `dump_dir`.
pub fn run_oracle(
    suite: Suite,
    count: usize,
    root: u64,
    mutate: bool,
    dump_dir: &Path,
) -> Result<OracleReport, OracleError> {
    let mut report = OracleReport { suite, total: count, failures: Vec::new(), dumped: Vec::new() };
    for index in 0..count as u64 {
        let (expected, got, graph_text, notes) = match suite {
            Suite::Gidm => {
                let inst = gidm_instance(root, index);
                let (expected, _) = gidm_bruteforce(&inst)?;
                let td = heuristic_decomposition(&inst.g, Strategy::MinDegree);
                let nd = make_nice(&td).expect("heuristic decomposition is valid");
                let (value, witness) = solve_gidm(&inst, &nd)?;
                let got = value + mutate as usize;
                let thresholds: Vec<String> = inst
                    .g
                    .vertices()
                    .map(|v| match inst.t.get(v) {
                        Threshold::Finite(t) => t.to_string(),
                        Threshold::Immunized => "inf".into(),
                    })
                    .collect();
                let notes = vec![
                    ("suite", "gidm".to_string()),
                    ("thresholds", thresholds.join(" ")),
                    ("a", set_text(&inst.a)),
                    ("b", set_text(&inst.b)),
                    ("budget", inst.budget.to_string()),
                    ("expected", expected.to_string()),
                    ("got", got.to_string()),
                    ("witness", set_text(&witness)),
                ];
                (expected, got, graph_to_string(&inst.g), notes)
            }
            Suite::Min => {
                let w = small_instance(root, index);
                let inst =
                    MinContagionInstance::uniform(w.g.clone(), w.seeds.clone(), w.r, w.slack)?;
                let expected = bruteforce_edge_deletion_min(&inst)?.deleted.len();
                let got = solve_min_contagion_tw(&inst)?.deleted.len() + mutate as usize;
                let notes = vec![
                    ("suite", "min".to_string()),
                    ("seeds", set_text(&w.seeds)),
                    ("r", w.r.to_string()),
                    ("slack", w.slack.to_string()),
                    ("expected", expected.to_string()),
                    ("got", got.to_string()),
                ];
                (expected, got, graph_to_string(&w.g), notes)
            }
            Suite::Stop => {
                let w = small_instance(root, index);
                let inst = StopContagionInstance::uniform(
                    w.g.clone(),
                    w.seeds.clone(),
                    w.protected.clone(),
                    w.r,
                )?;
                let expected = bruteforce_edge_deletion_stop(&inst)?.deleted.len();
                let got = solve_stop_contagion_tw(&inst)?.deleted.len() + mutate as usize;
                let notes = vec![
                    ("suite", "stop".to_string()),
                    ("seeds", set_text(&w.seeds)),
                    ("protected", set_text(&w.protected)),
                    ("r", w.r.to_string()),
                    ("expected", expected.to_string()),
                    ("got", got.to_string()),
                ];
                (expected, got, graph_to_string(&w.g), notes)
            }
        };
        if expected != got {
            let name = format!("{suite}-{index:04}.txt");
            let path = dump(dump_dir, &name, &graph_text, &notes)?;
            report.failures.push(format!(
                "instance {index}: expected {expected}, got {got}, dumped {}",
                path.display()
            ));
            report.dumped.push(path);
        }
    }
    Ok(report)
}
