//! Deterministic bootstrap percolation with heterogeneous thresholds.
//!
//! A vertex with finite threshold t(v) activates once at least t(v) of its
//! neighbors are active; immunized vertices never activate. Rounds are
//! synchronous, so traces are reproducible; the closure itself is
//! order-independent.

use crate::graph::{Graph, VertexSet};
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PercolationError {
    #[error("seed {0} is immunized")]
    SeedImmunized(u32),
    #[error("instance too large: {0} vertices")]
    TooLarge(usize),
}

/// Activation threshold of a single vertex.
///
/// Immunized is a distinct marker rather than a large finite number so that
/// invariants can distinguish "high threshold" from "never activates".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Finite(u32),
    Immunized,
}

impl Threshold {
    pub fn is_immunized(self) -> bool {
        matches!(self, Threshold::Immunized)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Threshold::Finite(t) => Some(t),
            Threshold::Immunized => None,
        }
    }
}

/// Per-vertex thresholds for one graph; defined for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdMap {
    values: Vec<Threshold>,
}

impl ThresholdMap {
    pub fn uniform(n: usize, r: u32) -> Self {
        ThresholdMap { values: vec![Threshold::Finite(r); n] }
    }

    pub fn from_values(values: Vec<Threshold>) -> Self {
        ThresholdMap { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: u32) -> Threshold {
        self.values[v as usize]
    }

    pub fn set(&mut self, v: u32, t: Threshold) {
        self.values[v as usize] = t;
    }

    /// Uniform threshold r, with the given vertices as seeds (threshold 0).
    pub fn uniform_with_seeds(n: usize, r: u32, seeds: &VertexSet) -> Self {
        let mut map = Self::uniform(n, r);
        for v in seeds.iter() {
            map.set(v, Threshold::Finite(0));
        }
        map
    }

    /// A copy with the given vertices immunized.
    pub fn with_immunized(&self, immune: &VertexSet) -> Self {
        let mut map = self.clone();
        for v in immune.iter() {
            map.set(v, Threshold::Immunized);
        }
        map
    }

    /// Vertices with threshold 0.
    pub fn seeds(&self) -> VertexSet {
        VertexSet::from_iter(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, t)| **t == Threshold::Finite(0))
                .map(|(v, _)| v as u32),
        )
    }
}

/// Newly infected vertices per synchronous round plus the final closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PercolationTrace {
    /// Round 0 holds the seeds; later rounds are nonempty.
    pub rounds: Vec<VertexSet>,
    pub closure: VertexSet,
}

impl PercolationTrace {
    pub fn spread(&self) -> usize {
        self.closure.len() - self.rounds[0].len()
    }
}

/// Runs synchronous bootstrap percolation from `seeds` under thresholds `t`.
pub fn percolate(
    g: &Graph,
    t: &ThresholdMap,
    seeds: &VertexSet,
) -> Result<PercolationTrace, PercolationError> {
    if let Some(v) = seeds.iter().find(|&v| t.get(v).is_immunized()) {
        return Err(PercolationError::SeedImmunized(v));
    }
    let n = g.n();
    let mut active = vec![false; n];
    let mut active_neighbors = vec![0u32; n];
    let mut rounds = Vec::new();
    let mut closure: Vec<u32> = Vec::new();

    let mut frontier: Vec<u32> = seeds.iter().collect();
    for &v in &frontier {
        active[v as usize] = true;
    }
    rounds.push(seeds.clone());
    closure.extend(&frontier);

    loop {
        // Count contributions of this round's newly active vertices, then
        // collect everything that crosses its threshold.
        let mut candidates: Vec<u32> = Vec::new();
        for &v in &frontier {
            for &w in g.neighbors(v) {
                if !active[w as usize] {
                    active_neighbors[w as usize] += 1;
                    candidates.push(w);
                }
            }
        }
        let mut next: Vec<u32> = Vec::new();
        for w in candidates {
            if active[w as usize] {
                continue;
            }
            if let Threshold::Finite(need) = t.get(w) {
                if active_neighbors[w as usize] >= need {
                    active[w as usize] = true;
                    next.push(w);
                }
            }
        }
        // Vertices with threshold 0 outside the seed set activate in round 1.
        if rounds.len() == 1 {
            for v in 0..n as u32 {
                if !active[v as usize] && t.get(v) == Threshold::Finite(0) {
                    active[v as usize] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        closure.extend(&next);
        rounds.push(VertexSet::from_iter(next.iter().copied()));
        frontier = next;
    }
    Ok(PercolationTrace { rounds, closure: VertexSet::from_iter(closure) })
}

/// |closure(seeds)| - |seeds|.
pub fn spread(g: &Graph, t: &ThresholdMap, seeds: &VertexSet) -> Result<usize, PercolationError> {
    percolate(g, t, seeds).map(|tr| tr.spread())
}

/// True iff no vertex outside `s` with finite threshold has at least its
/// threshold of neighbors inside `s`.
pub fn is_closed(g: &Graph, t: &ThresholdMap, s: &VertexSet) -> bool {
    for v in g.vertices() {
        if s.contains(v) {
            continue;
        }
        if let Threshold::Finite(need) = t.get(v) {
            let have = g.neighbors(v).iter().filter(|&&w| s.contains(w)).count();
            if have >= need as usize {
                return false;
            }
        }
    }
    true
}

/// Smallest seed set size whose closure under uniform threshold r is all of
/// V, by exhaustive enumeration. Vertices of degree below r can never
/// activate and are forced into every candidate set.
pub fn min_contagious_set_bruteforce(
    g: &Graph,
    r: u32,
    size_limit: usize,
) -> Result<usize, PercolationError> {
    let n = g.n();
    if n > size_limit {
        return Err(PercolationError::TooLarge(n));
    }
    let t = ThresholdMap::uniform(n, r);
    let forced: Vec<u32> = g.vertices().filter(|&v| g.degree(v) < r as usize).collect();
    let optional: Vec<u32> = g.vertices().filter(|&v| g.degree(v) >= r as usize).collect();
    let everything = VertexSet::from_iter(g.vertices());
    for extra in 0..=optional.len() {
        for combo in optional.iter().copied().combinations(extra) {
            let seeds = VertexSet::from_iter(forced.iter().copied().chain(combo));
            let trace = percolate(g, &t, &seeds).expect("no immunized thresholds");
            if trace.closure == everything {
                return Ok(seeds.len());
            }
        }
    }
    // Seeding every vertex is always contagious.
    Ok(n)
}
