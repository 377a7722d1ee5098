//! Edge-deletion interdiction of bootstrap percolation: minimize additional
//! infections (Minimizing Contagion) or keep a protected set uninfected
//! (Stopping Contagion).
//!
//! Both problems reduce to immunization in the edge-subdivided graph, where
//! immunizing the degree-2 vertex on an edge models deleting that edge; the
//! treewidth solvers run the GIDM dynamic program there with an ascending
//! deletion budget. A Monte Carlo color-coding solver and exhaustive oracles
//! round out the module, plus a vertex-cover based hard-instance generator.

use crate::gidm::{solve_gidm, GidmError, GidmInstance};
use crate::graph::{Graph, SubgraphMap, VertexSet};
use crate::percolation::{percolate, PercolationError, Threshold, ThresholdMap};
use crate::seeds;
use crate::decomposition::{heuristic_decomposition, make_nice, Strategy};
use itertools::Itertools;
use rand::Rng;
use thiserror::Error;

/// Edge-count guard for the exhaustive deletion oracle.
pub const BRUTEFORCE_EDGE_LIMIT: usize = 22;
/// Guard on r_max + budget_hint: trials per batch are 2^(sum + 10).
pub const FPT_EXPONENT_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContagionError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("induced subgraph on the closure has {edges} edges, above the oracle limit {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("r_max {r_max} + budget hint {budget_hint} exceeds the trial guard {limit}")]
    TrialBudget { r_max: usize, budget_hint: usize, limit: usize },
    #[error("no trial produced a verified solution")]
    NoSolutionFound,
    #[error(transparent)]
    Gidm(#[from] GidmError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error("internal consistency check failed: {0}")]
    IllegalState(String),
}

/// Minimizing Contagion: delete as few edges as possible so that at most
/// `slack` vertices outside the seed set become infected.
#[derive(Debug, Clone)]
pub struct MinContagionInstance {
    pub g: Graph,
    pub seeds: VertexSet,
    pub t: ThresholdMap,
    pub slack: usize,
}

/// Stopping Contagion: delete as few edges as possible so that no vertex of
/// the protected set becomes infected.
#[derive(Debug, Clone)]
pub struct StopContagionInstance {
    pub g: Graph,
    pub seeds: VertexSet,
    pub protected: VertexSet,
    pub t: ThresholdMap,
}

// Thresholds must be 0 exactly on the seeds and finite >= 2 elsewhere.
fn check_thresholds(g: &Graph, seeds: &VertexSet, t: &ThresholdMap) -> Result<(), ContagionError> {
    if seeds.is_empty() {
        return Err(ContagionError::InvalidInstance("seed set is empty".into()));
    }
    if t.len() != g.n() {
        return Err(ContagionError::InvalidInstance(format!(
            "threshold map covers {} vertices, graph has {}",
            t.len(),
            g.n()
        )));
    }
    if let Some(v) = seeds.iter().find(|&v| v as usize >= g.n()) {
        return Err(ContagionError::InvalidInstance(format!("seed {v} out of range")));
    }
    for v in g.vertices() {
        let expected_seed = seeds.contains(v);
        match t.get(v) {
            Threshold::Finite(0) if expected_seed => {}
            Threshold::Finite(x) if !expected_seed && x >= 2 => {}
            other => {
                return Err(ContagionError::InvalidInstance(format!(
                    "vertex {v} has threshold {other:?}; seeds need 0, others at least 2"
                )));
            }
        }
    }
    Ok(())
}

impl MinContagionInstance {
    pub fn new(
        g: Graph,
        seeds: VertexSet,
        t: ThresholdMap,
        slack: usize,
    ) -> Result<Self, ContagionError> {
        check_thresholds(&g, &seeds, &t)?;
        Ok(MinContagionInstance { g, seeds, t, slack })
    }

    /// Uniform threshold r on every non-seed.
    pub fn uniform(g: Graph, seeds: VertexSet, r: u32, slack: usize) -> Result<Self, ContagionError> {
        let t = ThresholdMap::uniform_with_seeds(g.n(), r, &seeds);
        Self::new(g, seeds, t, slack)
    }
}

impl StopContagionInstance {
    pub fn new(
        g: Graph,
        seeds: VertexSet,
        protected: VertexSet,
        t: ThresholdMap,
    ) -> Result<Self, ContagionError> {
        check_thresholds(&g, &seeds, &t)?;
        if let Some(v) = protected.iter().find(|&v| v as usize >= g.n()) {
            return Err(ContagionError::InvalidInstance(format!("protected {v} out of range")));
        }
        if !seeds.intersection(&protected).is_empty() {
            return Err(ContagionError::InvalidInstance(
                "protected set intersects the seed set".into(),
            ));
        }
        Ok(StopContagionInstance { g, seeds, protected, t })
    }

    pub fn uniform(
        g: Graph,
        seeds: VertexSet,
        protected: VertexSet,
        r: u32,
    ) -> Result<Self, ContagionError> {
        let t = ThresholdMap::uniform_with_seeds(g.n(), r, &seeds);
        Self::new(g, seeds, protected, t)
    }
}

/// A solved deletion problem. `additional_infected` is the number of
/// non-seed vertices infected once the deleted edges are removed, as
/// reproduced by a verification percolation on the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionSolution {
    /// Deleted edges in lexicographic order, original vertex ids.
    pub deleted: Vec<(u32, u32)>,
    pub additional_infected: usize,
    /// True for the exact solvers; Monte Carlo results leave it false.
    pub optimal: bool,
}

/// An instance cut down to the subgraph induced on the seed closure.
#[derive(Debug, Clone)]
pub struct RestrictedInstance {
    pub g: Graph,
    pub seeds: VertexSet,
    pub t: ThresholdMap,
    pub map: SubgraphMap,
}

/// Restricts to G[closure(seeds)]. Vertices outside the closure are never
/// infected, with or without deletions, so both problems keep their optima.
pub fn restrict_to_closure(
    g: &Graph,
    seeds: &VertexSet,
    t: &ThresholdMap,
) -> Result<RestrictedInstance, ContagionError> {
    let closure = percolate(g, t, seeds)?.closure;
    let (sub, map) = g
        .induced_subgraph(&closure)
        .map_err(|e| ContagionError::InvalidInstance(e.to_string()))?;
    let mut values = Vec::with_capacity(sub.n());
    for v in 0..sub.n() as u32 {
        values.push(t.get(map.to_original(v)));
    }
    let seeds_sub = VertexSet::from_iter(seeds.iter().filter_map(|v| map.to_sub(v)));
    Ok(RestrictedInstance { g: sub, seeds: seeds_sub, t: ThresholdMap::from_values(values), map })
}

/// A deletion problem recast as immunization in the subdivided graph.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    /// The subdivided graph: original ids unchanged, one new vertex per edge.
    pub g: Graph,
    /// 0 on seeds, the original threshold elsewhere, 1 on subdivision vertices.
    pub t: ThresholdMap,
    /// Immunizable set: exactly the subdivision vertices.
    pub immunizable: VertexSet,
    /// Counted set in the subdivided graph.
    pub counted: VertexSet,
    /// Original edge of each subdivision vertex.
    pub edge_for_vertex: Vec<((u32, u32), u32)>,
}

fn reduce(g: &Graph, t: &ThresholdMap, counted: VertexSet) -> ReductionOutput {
    let (sub, edge_for_vertex) = g.subdivide_all_edges();
    debug_assert_eq!(sub.n(), g.n() + g.m());
    debug_assert_eq!(sub.m(), 2 * g.m());
    let mut values: Vec<Threshold> = (0..g.n() as u32).map(|v| t.get(v)).collect();
    values.extend(std::iter::repeat(Threshold::Finite(1)).take(g.m()));
    let immunizable = VertexSet::from_iter((g.n() as u32)..(g.n() + g.m()) as u32);
    ReductionOutput {
        g: sub,
        t: ThresholdMap::from_values(values),
        immunizable,
        counted,
        edge_for_vertex,
    }
}

/// Subdivision reduction for Minimizing Contagion: count every non-seed.
/// Immunizing the vertex on an edge with budget p corresponds to deleting
/// that edge; the GIDM optimum at budget p equals the least possible number
/// of additionally infected vertices after p deletions.
pub fn reduce_min_contagion(inst: &MinContagionInstance) -> ReductionOutput {
    let counted = VertexSet::from_iter(inst.g.vertices().filter(|&v| !inst.seeds.contains(v)));
    reduce(&inst.g, &inst.t, counted)
}

/// Subdivision reduction for Stopping Contagion: count the protected set.
pub fn reduce_stop_contagion(inst: &StopContagionInstance) -> ReductionOutput {
    reduce(&inst.g, &inst.t, inst.protected.clone())
}

// Which deletion problem a solver run is answering.
enum Mode {
    Min { slack: usize },
    Stop,
}

fn percolation_after(
    g: &Graph,
    t: &ThresholdMap,
    seed_set: &VertexSet,
    deleted: &[(u32, u32)],
) -> Result<VertexSet, ContagionError> {
    let pruned = g.without_edges(deleted);
    Ok(percolate(&pruned, t, seed_set)?.closure)
}

fn solve_tw(
    g: &Graph,
    seed_set: &VertexSet,
    t: &ThresholdMap,
    protected: Option<&VertexSet>,
    mode: Mode,
) -> Result<DeletionSolution, ContagionError> {
    let restricted = restrict_to_closure(g, seed_set, t)?;
    let reduction = match &mode {
        Mode::Min { .. } => {
            let counted = VertexSet::from_iter(
                restricted.g.vertices().filter(|&v| !restricted.seeds.contains(v)),
            );
            reduce(&restricted.g, &restricted.t, counted)
        }
        Mode::Stop => {
            let b = protected.expect("stop mode carries a protected set");
            let counted = VertexSet::from_iter(b.iter().filter_map(|v| restricted.map.to_sub(v)));
            reduce(&restricted.g, &restricted.t, counted)
        }
    };

    // One decomposition serves every budget; keep the narrower heuristic.
    let td = [Strategy::MinDegree, Strategy::MinFill]
        .into_iter()
        .map(|s| heuristic_decomposition(&reduction.g, s))
        .min_by_key(|td| td.width())
        .expect("two candidates");
    let nd = make_nice(&td).map_err(|e| ContagionError::IllegalState(e.to_string()))?;

    let cap = match &mode {
        Mode::Min { .. } => restricted.g.m(),
        Mode::Stop => restricted
            .g
            .m()
            .min(reduction.counted.iter().map(|v| restricted.g.degree(v)).sum()),
    };
    for budget in 0..=cap {
        let gidm = GidmInstance::new(
            reduction.g.clone(),
            reduction.t.clone(),
            reduction.immunizable.clone(),
            reduction.counted.clone(),
            budget,
        )?;
        let (value, witness) = solve_gidm(&gidm, &nd)?;
        let feasible = match &mode {
            Mode::Min { slack } => value <= *slack,
            Mode::Stop => value == 0,
        };
        if !feasible {
            continue;
        }
        // Immunized subdivision vertices name the deleted restricted edges.
        let mut deleted: Vec<(u32, u32)> = Vec::with_capacity(witness.len());
        for w in witness.iter() {
            let idx = w as usize - restricted.g.n();
            let ((u, v), tagged) = reduction.edge_for_vertex[idx];
            debug_assert_eq!(tagged, w);
            let (a, b) = (restricted.map.to_original(u), restricted.map.to_original(v));
            deleted.push((a.min(b), a.max(b)));
        }
        deleted.sort_unstable();
        let closure = percolation_after(g, t, seed_set, &deleted)?;
        let additional = closure.difference(seed_set).len();
        let check = match &mode {
            Mode::Min { slack } => additional == value && additional <= *slack,
            Mode::Stop => {
                closure.intersection(protected.expect("stop mode")).is_empty()
            }
        };
        if !check {
            return Err(ContagionError::IllegalState(format!(
                "certificate at budget {budget} fails verification"
            )));
        }
        return Ok(DeletionSolution { deleted, additional_infected: additional, optimal: true });
    }
    Err(ContagionError::IllegalState(
        "no feasible budget up to the trivial cap".into(),
    ))
}

/// Minimum deletions leaving at most `slack` additional infections, via the
/// subdivision reduction and the GIDM solver with ascending budgets.
pub fn solve_min_contagion_tw(inst: &MinContagionInstance) -> Result<DeletionSolution, ContagionError> {
    solve_tw(&inst.g, &inst.seeds, &inst.t, None, Mode::Min { slack: inst.slack })
}

/// Minimum deletions keeping every protected vertex uninfected.
pub fn solve_stop_contagion_tw(
    inst: &StopContagionInstance,
) -> Result<DeletionSolution, ContagionError> {
    solve_tw(&inst.g, &inst.seeds, &inst.t, Some(&inst.protected), Mode::Stop)
}

// Minimal cut keeping infection exactly inside the target closure: each
// outside vertex with d >= t(v) infected-side neighbors loses d - t(v) + 1
// edges into the closure, lowest neighbor ids first. Deletions touch only
// closure boundary edges, so infection inside the closure is unaffected.
fn deletions_for_target(g: &Graph, t: &ThresholdMap, target: &VertexSet) -> Vec<(u32, u32)> {
    let mut deleted = Vec::new();
    for v in g.vertices() {
        if target.contains(v) {
            continue;
        }
        let Some(need) = t.get(v).finite() else { continue };
        let inside: Vec<u32> =
            g.neighbors(v).iter().copied().filter(|&w| target.contains(w)).collect();
        if inside.len() as u32 >= need {
            let cut = inside.len() - need as usize + 1;
            for &w in inside.iter().take(cut) {
                deleted.push((v.min(w), v.max(w)));
            }
        }
    }
    deleted.sort_unstable();
    deleted
}

/// Monte Carlo solver: color non-seeds red or blue, percolate over red
/// vertices only, and try to cut the resulting candidate closure free. Runs
/// 2^(r_max + budget_hint + 10) trials per batch and returns the best
/// verified solution over all batches.
pub fn solve_randomized_fpt(
    inst: &MinContagionInstance,
    r_max: usize,
    budget_hint: usize,
    batches: usize,
    seed: u64,
) -> Result<DeletionSolution, ContagionError> {
    if r_max + budget_hint > FPT_EXPONENT_LIMIT {
        return Err(ContagionError::TrialBudget {
            r_max,
            budget_hint,
            limit: FPT_EXPONENT_LIMIT,
        });
    }
    let trials = 1usize << (r_max + budget_hint + 10);
    let non_seeds: Vec<u32> =
        inst.g.vertices().filter(|&v| !inst.seeds.contains(v)).collect();
    let mut best: Option<(Vec<(u32, u32)>, usize)> = None;
    for batch in 0..batches {
        for trial in 0..trials {
            let mut rng = seeds::substream(seed, "fpt", &[batch as u64, trial as u64]);
            let blue =
                VertexSet::from_iter(non_seeds.iter().copied().filter(|_| rng.gen_bool(0.5)));
            let masked = inst.t.with_immunized(&blue);
            let candidate = percolate(&inst.g, &masked, &inst.seeds)?.closure;
            let extra = candidate.difference(&inst.seeds);
            if extra.len() > r_max || extra.len() > inst.slack {
                continue;
            }
            let deleted = deletions_for_target(&inst.g, &inst.t, &candidate);
            if let Some((cur, _)) = &best {
                if (deleted.len(), deleted.as_slice()) >= (cur.len(), cur.as_slice()) {
                    continue;
                }
            }
            // The cut must reproduce the candidate closure exactly.
            let closure = percolation_after(&inst.g, &inst.t, &inst.seeds, &deleted)?;
            if closure != candidate {
                continue;
            }
            best = Some((deleted, extra.len()));
        }
    }
    let (deleted, additional) = best.ok_or(ContagionError::NoSolutionFound)?;
    Ok(DeletionSolution { deleted, additional_infected: additional, optimal: false })
}

fn bruteforce(
    g: &Graph,
    seed_set: &VertexSet,
    t: &ThresholdMap,
    protected: Option<&VertexSet>,
    mode: Mode,
) -> Result<DeletionSolution, ContagionError> {
    let restricted = restrict_to_closure(g, seed_set, t)?;
    let pool = restricted.g.edges();
    if pool.len() > BRUTEFORCE_EDGE_LIMIT {
        return Err(ContagionError::TooLarge {
            edges: pool.len(),
            limit: BRUTEFORCE_EDGE_LIMIT,
        });
    }
    let protected_sub = protected.map(|b| {
        VertexSet::from_iter(b.iter().filter_map(|v| restricted.map.to_sub(v)))
    });
    for size in 0..=pool.len() {
        // Lexicographic subset order makes the first hit the canonical one.
        for combo in pool.iter().copied().combinations(size) {
            let closure =
                percolation_after(&restricted.g, &restricted.t, &restricted.seeds, &combo)?;
            let feasible = match &mode {
                Mode::Min { slack } => closure.difference(&restricted.seeds).len() <= *slack,
                Mode::Stop => closure
                    .intersection(protected_sub.as_ref().expect("stop mode"))
                    .is_empty(),
            };
            if !feasible {
                continue;
            }
            let deleted: Vec<(u32, u32)> = combo
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (restricted.map.to_original(u), restricted.map.to_original(v));
                    (a.min(b), a.max(b))
                })
                .sorted_unstable()
                .collect();
            let full = percolation_after(g, t, seed_set, &deleted)?;
            let additional = full.difference(seed_set).len();
            return Ok(DeletionSolution { deleted, additional_infected: additional, optimal: true });
        }
    }
    Err(ContagionError::IllegalState("deleting every edge is always feasible".into()))
}

/// Exhaustive oracle for Minimizing Contagion over edge subsets of the
/// closure-restricted graph, smallest subsets first.
pub fn bruteforce_edge_deletion_min(
    inst: &MinContagionInstance,
) -> Result<DeletionSolution, ContagionError> {
    bruteforce(&inst.g, &inst.seeds, &inst.t, None, Mode::Min { slack: inst.slack })
}

/// Exhaustive oracle for Stopping Contagion.
pub fn bruteforce_edge_deletion_stop(
    inst: &StopContagionInstance,
) -> Result<DeletionSolution, ContagionError> {
    bruteforce(&inst.g, &inst.seeds, &inst.t, Some(&inst.protected), Mode::Stop)
}

/// Smallest vertex cover by exhaustive search; oracle for the hard-instance
/// generator.
pub fn min_vertex_cover_bruteforce(g: &Graph) -> (usize, VertexSet) {
    let edges = g.edges();
    let ids: Vec<u32> = g.vertices().collect();
    for size in 0..=ids.len() {
        for combo in ids.iter().copied().combinations(size) {
            let cover = VertexSet::from_iter(combo);
            if edges.iter().all(|&(u, v)| cover.contains(u) || cover.contains(v)) {
                return (size, cover);
            }
        }
    }
    unreachable!("the full vertex set covers every edge");
}

/// Builds a Stopping Contagion instance whose optimum equals the minimum
/// vertex cover of `g_vc`.
///
/// Layout: vertex i of `g_vc` becomes a_i = i; edge number e becomes the
/// protected vertex w_e = n + e; each a_i gets two private seeds
/// z = n + m + 2i and z + 1. All thresholds are 2, so a_i activates from its
/// seed pair unless one seed edge is cut, and w_e activates only when both
/// endpoints do. Cutting one seed edge per cover vertex is optimal.
pub fn gen_hard_stop_instance(g_vc: &Graph) -> StopContagionInstance {
    let nv = g_vc.n();
    let me = g_vc.m();
    let mut edges = Vec::with_capacity(2 * me + 2 * nv);
    for (e, (u, v)) in g_vc.edges().into_iter().enumerate() {
        let w = (nv + e) as u32;
        edges.push((u, w));
        edges.push((v, w));
    }
    for i in 0..nv as u32 {
        let z = (nv + me) as u32 + 2 * i;
        edges.push((i, z));
        edges.push((i, z + 1));
    }
    let n = nv + me + 2 * nv;
    let g = Graph::from_edge_list(n, &edges).expect("gadget edges are simple");
    let seed_set = VertexSet::from_iter(((nv + me) as u32)..n as u32);
    let protected = VertexSet::from_iter((nv as u32)..(nv + me) as u32);
    StopContagionInstance::uniform(g, seed_set, protected, 2)
        .expect("gadget instance is well formed")
}
