//! Model-spec parsing ("gnp:n=100,d=3") and graph construction.

use contagion_core::models::{self, ModelError, NoisyTreeParams};
use contagion_core::seeds;
use contagion_core::Graph;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("bad model spec {spec:?}: {message}")]
    BadSpec { spec: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed model spec: a family name plus its parameters.
///
/// Accepted forms:
///   gnp:n=<usize>,d=<f64>        G(n, d/n); p=<f64> accepted instead of d
///   regular:n=<usize>,d=<u32>    random d-regular graph
///   tree:n=<usize>,delta=<u32>   random tree with maximum degree delta
///   noisytree:n=<usize>,delta=<u32>,eps=<f64>
///   grid:side=<usize>            side x side grid
///   path:n=<usize>
///   star:n=<usize>
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Gnp { n: usize, p: f64 },
    Regular { n: usize, d: u32 },
    Tree { n: usize, delta: u32 },
    NoisyTree { n: usize, delta: u32, eps: f64 },
    Grid { side: usize },
    Path { n: usize },
    Star { n: usize },
}

struct Params<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn bad(&self, message: impl Into<String>) -> SpecError {
        SpecError::BadSpec { spec: self.spec.to_string(), message: message.into() }
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        let idx = self.pairs.iter().position(|(k, _)| *k == key)?;
        Some(self.pairs.remove(idx).1)
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, SpecError> {
        let raw = self.take(key).ok_or_else(|| self.bad(format!("missing parameter {key}")))?;
        raw.parse().map_err(|_| self.bad(format!("cannot parse {key}={raw}")))
    }

    fn finish(self) -> Result<(), SpecError> {
        if let Some((k, _)) = self.pairs.first() {
            return Err(self.bad(format!("unknown parameter {k}")));
        }
        Ok(())
    }
}

impl std::str::FromStr for ModelSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let bad = |message: &str| SpecError::BadSpec { spec: s.to_string(), message: message.into() };
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut pairs = Vec::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(&format!("expected key=value, got {part:?}")))?;
            pairs.push((k, v));
        }
        let mut params = Params { spec: s, pairs };
        let spec = match name {
            "gnp" => {
                let n: usize = params.require("n")?;
                let d = params.take("d").map(str::to_owned);
                let p = params.take("p").map(str::to_owned);
                let p = match (d, p) {
                    (Some(d), None) => {
                        let d: f64 =
                            d.parse().map_err(|_| params.bad(format!("cannot parse d={d}")))?;
                        if n == 0 { 0.0 } else { d / n as f64 }
                    }
                    (None, Some(p)) => {
                        p.parse().map_err(|_| params.bad(format!("cannot parse p={p}")))?
                    }
                    (Some(_), Some(_)) => return Err(params.bad("give either d or p, not both")),
                    (None, None) => return Err(params.bad("missing parameter d (or p)")),
                };
                ModelSpec::Gnp { n, p }
            }
            "regular" => {
                ModelSpec::Regular { n: params.require("n")?, d: params.require("d")? }
            }
            "tree" => ModelSpec::Tree { n: params.require("n")?, delta: params.require("delta")? },
            "noisytree" => ModelSpec::NoisyTree {
                n: params.require("n")?,
                delta: params.require("delta")?,
                eps: params.require("eps")?,
            },
            "grid" => ModelSpec::Grid { side: params.require("side")? },
            "path" => ModelSpec::Path { n: params.require("n")? },
            "star" => ModelSpec::Star { n: params.require("n")? },
            other => return Err(bad(&format!("unknown model {other:?}"))),
        };
        params.finish()?;
        Ok(spec)
    }
}

impl ModelSpec {
    /// Builds the graph; deterministic in (spec, seed).
    pub fn build(&self, seed: u64) -> Result<Graph, SpecError> {
        let g = match *self {
            ModelSpec::Gnp { n, p } => models::gnp(n, p, seed)?,
            ModelSpec::Regular { n, d } => models::random_regular(n, d, seed)?,
            ModelSpec::Tree { n, delta } => models::random_tree(n, delta, seed)?,
            ModelSpec::NoisyTree { n, delta, eps } => {
                let base = models::random_tree(n, delta, seed)?;
                let params = NoisyTreeParams::new(base, eps)?;
                models::noisy_tree(&params, seed)
            }
            ModelSpec::Grid { side } => models::grid(side),
            ModelSpec::Path { n } => models::path(n),
            ModelSpec::Star { n } => models::star(n),
        };
        Ok(g)
    }
}

/// Draws `k` distinct seed vertices uniformly from `0..n`.
pub fn random_seed_set<R: Rng>(n: usize, k: usize, rng: &mut R) -> contagion_core::VertexSet {
    // Floyd's algorithm: k iterations regardless of n.
    let mut set = contagion_core::VertexSet::new();
    for j in (n - k)..n {
        let t = rng.gen_range(0..=j as u32);
        if set.contains(t) {
            set.insert(j as u32);
        } else {
            set.insert(t);
        }
    }
    set
}

/// A random small contagion workload for the oracle suites: a graph on
/// 3..=7 vertices (at most 21 edges, under the brute-force guard), uniform
/// threshold r in {2, 3}, and 1..=3 seeds.
pub struct SmallInstance {
    pub g: Graph,
    pub seeds: contagion_core::VertexSet,
    pub r: u32,
    pub slack: usize,
    pub protected: contagion_core::VertexSet,
}

pub fn small_instance(root: u64, index: u64) -> SmallInstance {
    let mut rng = seeds::substream(root, "oracle", &[index]);
    loop {
        let n = rng.gen_range(3..=7usize);
        let p = rng.gen_range(0.25..0.7);
        let g = models::gnp(n, p, rng.gen()).expect("p in range");
        let r = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=3usize.min(n - 1));
        let seeds = random_seed_set(n, k, &mut rng);
        let slack = rng.gen_range(0..=2);
        let outside: Vec<u32> = g.vertices().filter(|v| !seeds.contains(*v)).collect();
        let mut protected = contagion_core::VertexSet::new();
        for &v in &outside {
            if rng.gen_bool(0.4) {
                protected.insert(v);
            }
        }
        if protected.is_empty() {
            protected.insert(outside[rng.gen_range(0..outside.len())]);
        }
        if g.m() == 0 {
            continue;
        }
        return SmallInstance { g, seeds, r, slack, protected };
    }
}
