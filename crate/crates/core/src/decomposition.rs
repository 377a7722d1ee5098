//! Tree decompositions: validation, heuristic construction via elimination
//! orderings, exact treewidth for small graphs, conversion to nice form,
//! edge-excess width bounds, and sampled local-treewidth estimates.

use crate::graph::{Graph, VertexSet};
use crate::seeds;
use rand::Rng;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default vertex-count guard for the exact treewidth solver.
pub const EXACT_TW_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("tree edge ({0}, {1}) references a missing bag")]
    BagIndexOutOfRange(usize, usize),
    #[error("bag {bag} contains vertex {vertex} outside the graph")]
    VertexOutOfRange { bag: usize, vertex: u32 },
    #[error("bag edges do not form a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    VertexNotCovered(u32),
    #[error("edge ({0}, {1}) is inside no bag")]
    EdgeNotCovered(u32, u32),
    #[error("bags containing vertex {0} are not connected in the tree")]
    DisconnectedOccurrence(u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph has {n} vertices, above the limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid decomposition: {0}")]
    InvalidInput(Violation),
    #[error("subgraph size {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("no connected subgraph on {k} vertices; largest component has {largest}")]
    NoConnectedSubgraph { k: usize, largest: usize },
    #[error("bad decomposition text: {0}")]
    Parse(String),
}

/// Tree of vertex bags covering all vertices and edges, with every vertex's
/// occurrence set connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    /// Unordered edges over bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; 0 for a decomposition of the empty graph.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Checks the three decomposition properties and reports the first violation.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    validate_structure(td)?;
    for (i, bag) in td.bags.iter().enumerate() {
        for v in bag.iter() {
            if v as usize >= g.n() {
                return Err(Violation::VertexOutOfRange { bag: i, vertex: v });
            }
        }
    }
    let mut covered = vec![false; g.n()];
    for bag in &td.bags {
        for v in bag.iter() {
            covered[v as usize] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Violation::VertexNotCovered(v as u32));
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(Violation::EdgeNotCovered(u, v));
        }
    }
    occurrence_connectivity(td)
}

// Tree-ness of the bag graph: connected with exactly bags - 1 edges.
fn validate_structure(td: &TreeDecomposition) -> Result<(), Violation> {
    let b = td.bags.len();
    for &(i, j) in &td.edges {
        if i >= b || j >= b {
            return Err(Violation::BagIndexOutOfRange(i, j));
        }
    }
    if b == 0 || td.edges.len() != b - 1 {
        return Err(Violation::NotATree);
    }
    let adj = bag_adjacency(td);
    let mut seen = vec![false; b];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    if count != b {
        return Err(Violation::NotATree);
    }
    Ok(())
}

fn occurrence_connectivity(td: &TreeDecomposition) -> Result<(), Violation> {
    let adj = bag_adjacency(td);
    let mut all: BTreeSet<u32> = BTreeSet::new();
    for bag in &td.bags {
        all.extend(bag.iter());
    }
    for v in all {
        let occ: Vec<usize> =
            (0..td.bags.len()).filter(|&i| td.bags[i].contains(v)).collect();
        let mut seen = vec![false; td.bags.len()];
        let mut stack = vec![occ[0]];
        seen[occ[0]] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] && td.bags[j].contains(v) {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        if reached != occ.len() {
            return Err(Violation::DisconnectedOccurrence(v));
        }
    }
    Ok(())
}

fn bag_adjacency(td: &TreeDecomposition) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); td.bags.len()];
    for &(i, j) in &td.edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    adj
}

/// Greedy elimination rule for heuristic decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    MinDegree,
    MinFill,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(Strategy::MinDegree),
            "min-fill" => Ok(Strategy::MinFill),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

/// Builds a valid decomposition from a greedy elimination ordering; width is
/// an upper bound on the true treewidth. Ties break toward lower vertex ids.
pub fn heuristic_decomposition(g: &Graph, strategy: Strategy) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<BTreeSet<u32>> = (0..n)
        .map(|v| g.neighbors(v as u32).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<u32> = (0..n as u32).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let pick = match strategy {
            Strategy::MinDegree => *alive
                .iter()
                .min_by_key(|&&v| (adj[v as usize].len(), v))
                .expect("alive nonempty"),
            Strategy::MinFill => *alive
                .iter()
                .min_by_key(|&&v| (fill_in(&adj, v), v))
                .expect("alive nonempty"),
        };
        eliminate(&mut adj, pick);
        alive.remove(&pick);
        order.push(pick);
    }
    decomposition_from_order(g, &order)
}

// Number of neighbor pairs of v not already adjacent.
fn fill_in(adj: &[BTreeSet<u32>], v: u32) -> usize {
    let nbrs: Vec<u32> = adj[v as usize].iter().copied().collect();
    let mut missing = 0;
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            if !adj[x as usize].contains(&y) {
                missing += 1;
            }
        }
    }
    missing
}

// Removes v and turns its neighborhood into a clique.
fn eliminate(adj: &mut [BTreeSet<u32>], v: u32) {
    let nbrs: Vec<u32> = adj[v as usize].iter().copied().collect();
    for &x in &nbrs {
        adj[x as usize].remove(&v);
    }
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            adj[x as usize].insert(y);
            adj[y as usize].insert(x);
        }
    }
    adj[v as usize].clear();
}

/// Turns an elimination ordering into a decomposition: the bag of v is v plus
/// its neighborhood in the fill graph at elimination time, attached to the
/// bag of its earliest-eliminated later neighbor.
fn decomposition_from_order(g: &Graph, order: &[u32]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition { bags: vec![VertexSet::new()], edges: vec![] };
    }
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut adj: Vec<BTreeSet<u32>> = (0..n)
        .map(|v| g.neighbors(v as u32).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<u32> = adj[v as usize].iter().copied().collect();
        let mut bag = nbrs.clone();
        bag.push(v);
        bags.push(VertexSet::from_iter(bag));
        if let Some(&parent) = nbrs.iter().min_by_key(|&&u| position[u as usize]) {
            edges.push((i, position[parent as usize]));
        } else if i + 1 < n {
            // Isolated at elimination time: chain to keep the tree connected.
            edges.push((i, i + 1));
        }
        eliminate(&mut adj, v);
    }
    TreeDecomposition { bags, edges }
}

/// Exact treewidth by dynamic programming over elimination prefixes.
///
/// For each vertex set X and vertex v outside X, the bag size of v when
/// eliminated after X is one plus the number of vertices outside X reachable
/// from v through X.
pub fn exact_treewidth_small(
    g: &Graph,
    hard_limit: usize,
) -> Result<(usize, TreeDecomposition), DecompositionError> {
    let n = g.n();
    if n > hard_limit || n > EXACT_TW_LIMIT {
        return Err(DecompositionError::TooLarge { n, limit: hard_limit.min(EXACT_TW_LIMIT) });
    }
    if n == 0 {
        return Ok((0, TreeDecomposition { bags: vec![VertexSet::new()], edges: vec![] }));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v as u32).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut best = vec![u8::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    best[0] = 0;
    for mask in 1..=full {
        for v in 0..n as u8 {
            if mask & (1 << v) == 0 {
                continue;
            }
            let prev = mask & !(1 << v);
            let cost = best[prev as usize].max(reach_through(&nbr, prev, v) as u8);
            if cost < best[mask as usize] {
                best[mask as usize] = cost;
                choice[mask as usize] = v;
            }
        }
    }
    let mut order = vec![0u32; n];
    let mut mask = full;
    for slot in (0..n).rev() {
        let v = choice[mask as usize];
        order[slot] = v as u32;
        mask &= !(1 << v);
    }
    let td = decomposition_from_order(g, &order);
    debug_assert_eq!(td.width(), best[full as usize] as usize);
    Ok((best[full as usize] as usize, td))
}

// Vertices outside mask and distinct from v reachable from v through mask.
fn reach_through(nbr: &[u32], mask: u32, v: u8) -> u32 {
    let mut visited: u32 = 1 << v;
    let mut stack: u32 = 1 << v;
    while stack != 0 {
        let u = stack.trailing_zeros();
        stack &= stack - 1;
        let fresh = nbr[u as usize] & !visited;
        visited |= fresh;
        stack |= fresh & mask;
    }
    (visited & !mask & !(1 << v)).count_ones()
}

/// Node tag in a nice decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(u32),
    Forget(u32),
    Join,
}

#[derive(Debug, Clone)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: VertexSet,
    pub children: Vec<usize>,
}

/// Rooted decomposition whose nodes are all Leaf, Introduce, Forget or Join,
/// with empty root and leaf bags.
#[derive(Debug, Clone)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node indices with every child before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                out.push(i);
            } else {
                stack.push((i, true));
                for &c in self.nodes[i].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// The underlying plain decomposition, for validation.
    pub fn to_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((i, c));
            }
        }
        TreeDecomposition { bags, edges }
    }
}

/// Converts a valid decomposition into nice form with the same width and
/// O(width * bags) nodes. The root is an empty bag above bag 0.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition, DecompositionError> {
    validate_structure(td).map_err(DecompositionError::InvalidInput)?;
    occurrence_connectivity(td).map_err(DecompositionError::InvalidInput)?;
    let b = td.bags.len();
    let adj = bag_adjacency(td);
    // Root the bag tree at index 0; BFS order puts parents before children.
    let mut parent = vec![usize::MAX; b];
    let mut bfs = vec![0usize];
    let mut seen = vec![false; b];
    seen[0] = true;
    let mut head = 0;
    while head < bfs.len() {
        let i = bfs[head];
        head += 1;
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                parent[j] = i;
                bfs.push(j);
            }
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); b];
    for &i in bfs.iter().skip(1) {
        children[parent[i]].push(i);
    }
    for list in &mut children {
        list.sort_unstable();
    }

    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut top = vec![usize::MAX; b]; // node index carrying each bag
    for &i in bfs.iter().rev() {
        let target = &td.bags[i];
        let mut merged: Option<usize> = None;
        for &c in &children[i] {
            let lifted = bridge(&mut nodes, top[c], &td.bags[c], target);
            merged = Some(match merged {
                None => lifted,
                Some(acc) => {
                    nodes.push(NiceNode {
                        kind: NodeKind::Join,
                        bag: target.clone(),
                        children: vec![acc, lifted],
                    });
                    nodes.len() - 1
                }
            });
        }
        top[i] = match merged {
            Some(t) => t,
            None => {
                // Childless bag: grow from an empty leaf.
                nodes.push(NiceNode { kind: NodeKind::Leaf, bag: VertexSet::new(), children: vec![] });
                let leaf = nodes.len() - 1;
                bridge(&mut nodes, leaf, &VertexSet::new(), target)
            }
        };
    }
    let root = bridge(&mut nodes, top[0], &td.bags[0], &VertexSet::new());
    Ok(NiceDecomposition { nodes, root })
}

// Chain of Forget then Introduce nodes transforming `from` into `to` above
// node `below`; returns the top node index (or `below` if the bags match).
fn bridge(nodes: &mut Vec<NiceNode>, below: usize, from: &VertexSet, to: &VertexSet) -> usize {
    let mut cur = below;
    let mut bag = from.clone();
    for v in from.difference(to).iter() {
        bag = bag.difference(&VertexSet::from_iter([v]));
        nodes.push(NiceNode { kind: NodeKind::Forget(v), bag: bag.clone(), children: vec![cur] });
        cur = nodes.len() - 1;
    }
    for v in to.difference(from).iter() {
        bag.insert(v);
        nodes.push(NiceNode { kind: NodeKind::Introduce(v), bag: bag.clone(), children: vec![cur] });
        cur = nodes.len() - 1;
    }
    cur
}

/// Checks every nice-decomposition invariant, including validity of the
/// underlying decomposition against the graph.
pub fn validate_nice(g: &Graph, nd: &NiceDecomposition) -> Result<(), String> {
    let node = |i: usize| &nd.nodes[i];
    if !node(nd.root).bag.is_empty() {
        return Err("root bag not empty".into());
    }
    for (i, n) in nd.nodes.iter().enumerate() {
        match n.kind {
            NodeKind::Leaf => {
                if !n.children.is_empty() || !n.bag.is_empty() {
                    return Err(format!("leaf {i} has children or a nonempty bag"));
                }
            }
            NodeKind::Introduce(u) => {
                if n.children.len() != 1 {
                    return Err(format!("introduce {i} child count"));
                }
                let child = &node(n.children[0]).bag;
                if child.contains(u) || n.bag != child.union(&VertexSet::from_iter([u])) {
                    return Err(format!("introduce {i} bag relation"));
                }
            }
            NodeKind::Forget(u) => {
                if n.children.len() != 1 {
                    return Err(format!("forget {i} child count"));
                }
                let child = &node(n.children[0]).bag;
                if !child.contains(u) || n.bag != child.difference(&VertexSet::from_iter([u])) {
                    return Err(format!("forget {i} bag relation"));
                }
            }
            NodeKind::Join => {
                if n.children.len() != 2 {
                    return Err(format!("join {i} child count"));
                }
                if nd.nodes[n.children[0]].bag != n.bag || nd.nodes[n.children[1]].bag != n.bag {
                    return Err(format!("join {i} bag mismatch"));
                }
            }
        }
    }
    validate(g, &nd.to_decomposition()).map_err(|v| v.to_string())
}

/// Per-component treewidth bounds from edge excess: a connected component
/// with m = n - 2 + excess edges has treewidth at most max(1, excess);
/// an isolated vertex gives 0. Returns the list and the overall max.
pub fn excess_bound(g: &Graph) -> (Vec<usize>, usize) {
    let mut per = Vec::new();
    for comp in g.connected_components() {
        let (sub, _) = g.induced_subgraph(&comp).expect("component vertices in range");
        let bound = if sub.n() == 1 { 0 } else { (sub.m() + 2).saturating_sub(sub.n()).max(1) };
        per.push(bound);
    }
    let overall = per.iter().copied().max().unwrap_or(0);
    (per, overall)
}

/// Result of sampling connected k-vertex subgraphs for treewidth.
#[derive(Debug, Clone)]
pub struct LocalTreewidthEstimate {
    pub k: usize,
    /// Max treewidth found over samples; a certified lower bound on t_k only
    /// when `exact` is true.
    pub lower: usize,
    pub trials: usize,
    /// Max edge-excess bound over the sampled subgraphs.
    pub upper_excess: usize,
    /// Sampled vertex set attaining `lower`, in original vertex ids.
    pub witness: VertexSet,
    /// True when every per-sample width came from the exact solver (k <= 12).
    pub exact: bool,
}

/// Estimates local treewidth t_k by random connected growth: a uniform start
/// vertex, then uniformly chosen boundary vertices until the sample has k
/// vertices. Width per sample is exact for k <= 12, heuristic otherwise.
pub fn local_treewidth_sample(
    g: &Graph,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<LocalTreewidthEstimate, DecompositionError> {
    let eligible = connected_sample_pool(g, k)?;
    let exact = k <= EXACT_TW_LIMIT;
    let mut lower = 0usize;
    let mut upper_excess = 0usize;
    let mut witness = VertexSet::new();
    let mut have_witness = false;
    for trial in 0..trials {
        let mut rng = seeds::substream(seed, "localtw", &[k as u64, trial as u64]);
        let sample = grow_connected(g, k, &eligible, &mut rng);
        let (sub, _) = g.induced_subgraph(&sample).expect("sampled vertices in range");
        let width = if exact {
            exact_treewidth_small(&sub, EXACT_TW_LIMIT).expect("k <= limit").0
        } else {
            heuristic_decomposition(&sub, Strategy::MinDegree)
                .width()
                .min(heuristic_decomposition(&sub, Strategy::MinFill).width())
        };
        upper_excess = upper_excess.max(excess_bound(&sub).1);
        if !have_witness || width > lower {
            lower = width;
            witness = sample;
            have_witness = true;
        }
    }
    Ok(LocalTreewidthEstimate { k, lower, trials, upper_excess, witness, exact })
}

/// Vertices lying in components with at least k vertices, sorted ascending.
/// These are exactly the valid starting points for `grow_connected`.
pub fn connected_sample_pool(g: &Graph, k: usize) -> Result<Vec<u32>, DecompositionError> {
    if k < 1 || k > g.n() {
        return Err(DecompositionError::KOutOfRange { k, n: g.n() });
    }
    let comps = g.connected_components();
    let largest = comps.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut eligible: Vec<u32> = Vec::new();
    for c in &comps {
        if c.len() >= k {
            eligible.extend(c.iter());
        }
    }
    if eligible.is_empty() {
        return Err(DecompositionError::NoConnectedSubgraph { k, largest });
    }
    eligible.sort_unstable();
    Ok(eligible)
}

/// Grows a random connected k-vertex sample from a uniform eligible start,
/// absorbing a uniform boundary vertex at each step. Every vertex in
/// `eligible` must lie in a component with at least k vertices.
pub fn grow_connected<R: Rng>(g: &Graph, k: usize, eligible: &[u32], rng: &mut R) -> VertexSet {
    let start = eligible[rng.gen_range(0..eligible.len())];
    let mut sample = VertexSet::from_iter([start]);
    let mut boundary: Vec<u32> = g.neighbors(start).to_vec();
    while sample.len() < k {
        let idx = rng.gen_range(0..boundary.len());
        let v = boundary.swap_remove(idx);
        sample.insert(v);
        for &w in g.neighbors(v) {
            if !sample.contains(w) && !boundary.contains(&w) {
                boundary.push(w);
            }
        }
    }
    sample
}

/// Exact local treewidth t_k by exhausting all k-subsets; only for tiny n.
/// Induced subgraphs suffice: deleting edges never raises treewidth, so the
/// max over induced subgraphs equals the max over all k-vertex subgraphs.
pub fn exact_local_treewidth_tiny(g: &Graph, k: usize) -> Result<usize, DecompositionError> {
    if g.n() > EXACT_TW_LIMIT {
        return Err(DecompositionError::TooLarge { n: g.n(), limit: EXACT_TW_LIMIT });
    }
    if k < 1 || k > g.n() {
        return Err(DecompositionError::KOutOfRange { k, n: g.n() });
    }
    use itertools::Itertools;
    let mut best = 0;
    for subset in (0..g.n() as u32).combinations(k) {
        let (sub, _) = g.induced_subgraph(&VertexSet::from_iter(subset)).expect("subset in range");
        best = best.max(exact_treewidth_small(&sub, EXACT_TW_LIMIT)?.0);
    }
    Ok(best)
}

/// Debug text form: "bags b", one "i: v1 v2 ..." line per bag, then "edges"
/// and one "i j" line per tree edge.
pub fn to_text(td: &TreeDecomposition) -> String {
    let mut out = format!("bags {}\n", td.bags.len());
    for (i, bag) in td.bags.iter().enumerate() {
        let row: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
        if row.is_empty() {
            out.push_str(&format!("{i}:\n"));
        } else {
            out.push_str(&format!("{i}: {}\n", row.join(" ")));
        }
    }
    out.push_str("edges\n");
    for &(i, j) in &td.edges {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

/// Parses the `to_text` format back into a decomposition.
pub fn from_text(s: &str) -> Result<TreeDecomposition, DecompositionError> {
    let bad = |m: &str| DecompositionError::Parse(m.to_string());
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("missing header"))?;
    let count: usize = header
        .strip_prefix("bags ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| bad("header must be 'bags <count>'"))?;
    let mut bags = Vec::with_capacity(count);
    for i in 0..count {
        let line = lines.next().ok_or_else(|| bad("missing bag line"))?;
        let (idx, rest) = line.split_once(':').ok_or_else(|| bad("bag line needs ':'"))?;
        if idx.trim().parse::<usize>() != Ok(i) {
            return Err(bad(&format!("bag line {i} out of order")));
        }
        let mut bag = VertexSet::new();
        for tok in rest.split_whitespace() {
            bag.insert(tok.parse().map_err(|_| bad("bad vertex id"))?);
        }
        bags.push(bag);
    }
    if lines.next() != Some("edges") {
        return Err(bad("missing 'edges' line"));
    }
    let mut edges = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let i = it.next().ok_or_else(|| bad("bad edge line"))?;
        let j = it.next().ok_or_else(|| bad("bad edge line"))?;
        if it.next().is_some() {
            return Err(bad("edge line has extra fields"));
        }
        edges.push((
            i.parse().map_err(|_| bad("bad bag index"))?,
            j.parse().map_err(|_| bad("bad bag index"))?,
        ));
    }
    Ok(TreeDecomposition { bags, edges })
}
