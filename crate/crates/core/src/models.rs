//! Seeded generators for the graph families used by the solvers and
//! experiments: G(n,p), random regular graphs, bounded-degree random trees,
//! noisy trees, grids, paths and stars.
//!
//! Every generator is a pure function of (parameters, seed); identical
//! inputs give bit-identical edge lists on every platform.

use crate::graph::{Graph, VertexSet};
use crate::seeds;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("n * d must be even (n = {0}, d = {1})")]
    ParityViolation(usize, u32),
    #[error("degree {1} too large for {0} vertices")]
    DegreeTooLarge(usize, u32),
    #[error("max_degree {0} cannot accommodate a tree on {1} vertices")]
    InfeasibleDegree(u32, usize),
    #[error("base graph is not a tree")]
    NotATree,
}

/// Decodes a linear index over the C(n,2) pair sequence (lexicographic) into
/// the pair (u, v) with u < v.
fn decode_pair(mut idx: u64, n: u64) -> (u32, u32) {
    let mut u = 0u64;
    loop {
        let block = n - 1 - u;
        if idx < block {
            return (u as u32, (u + 1 + idx) as u32);
        }
        idx -= block;
        u += 1;
    }
}

/// Walks the pair sequence with geometric skips so that each pair is present
/// independently with probability p; subquadratic for small p.
fn sample_pairs<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(u32, u32)> {
    let total = (n as u64) * (n as u64 - 1) / 2;
    let mut out = Vec::new();
    if n < 2 || p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                out.push((u, v));
            }
        }
        return out;
    }
    let log_q = (1.0 - p).ln();
    let mut cursor: u64 = 0; // next index that could be selected
    loop {
        let u: f64 = rng.gen::<f64>();
        // Number of failures before the next success, geometric in (1 - p).
        let skip = ((1.0 - u).ln() / log_q).floor() as u64;
        cursor = match cursor.checked_add(skip) {
            Some(c) => c,
            None => break,
        };
        if cursor >= total {
            break;
        }
        out.push(decode_pair(cursor, n as u64));
        cursor += 1;
    }
    out
}

/// Erdos-Renyi G(n, p) under a seeded stream.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, ModelError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(ModelError::BadProbability(p));
    }
    let mut rng = seeds::substream(seed, "gnp", &[n as u64]);
    let edges = sample_pairs(n, p, &mut rng);
    Ok(Graph::from_edge_list(n, &edges).expect("sampled pairs are simple"))
}

/// Random d-regular simple graph via the configuration model with full
/// restart on loops or parallel edges; expected O(1) restarts for constant d.
pub fn random_regular(n: usize, d: u32, seed: u64) -> Result<Graph, ModelError> {
    if d as usize >= n && !(n == 1 && d == 0) {
        return Err(ModelError::DegreeTooLarge(n, d));
    }
    if (n * d as usize) % 2 != 0 {
        return Err(ModelError::ParityViolation(n, d));
    }
    if d == 0 {
        return Ok(Graph::from_edge_list(n, &[]).expect("empty"));
    }
    let mut rng = seeds::substream(seed, "regular", &[n as u64, d as u64]);
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(d as usize)).collect();
    'restart: loop {
        stubs.shuffle(&mut rng);
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(stubs.len() / 2);
        let mut seen = std::collections::HashSet::new();
        for chunk in stubs.chunks(2) {
            let (a, b) = (chunk[0], chunk[1]);
            if a == b {
                continue 'restart;
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                continue 'restart;
            }
            pairs.push(key);
        }
        return Ok(Graph::from_edge_list(n, &pairs).expect("checked simple"));
    }
}

/// Random tree with a degree cap, by sequential attachment to a uniformly
/// chosen vertex with spare capacity. Valid for the solvers and experiments;
/// uniformity over all bounded-degree trees is not claimed.
pub fn random_tree(n: usize, max_degree: u32, seed: u64) -> Result<Graph, ModelError> {
    if (n > 2 && max_degree < 2) || (n == 2 && max_degree < 1) {
        return Err(ModelError::InfeasibleDegree(max_degree, n));
    }
    let mut rng = seeds::substream(seed, "tree", &[n as u64, max_degree as u64]);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut degree = vec![0u32; n];
    let mut open: Vec<u32> = Vec::new(); // attachment candidates with capacity
    if n > 0 {
        open.push(0);
    }
    for v in 1..n as u32 {
        let slot = rng.gen_range(0..open.len());
        let parent = open[slot];
        edges.push((parent.min(v), parent.max(v)));
        degree[parent as usize] += 1;
        degree[v as usize] += 1;
        if degree[parent as usize] >= max_degree {
            open.swap_remove(slot);
        }
        if degree[v as usize] < max_degree {
            open.push(v);
        }
    }
    Ok(Graph::from_edge_list(n, &edges).expect("attachment forms a tree"))
}

/// Parameters for perturbing a base tree: every non-edge is added
/// independently with probability epsilon / n.
#[derive(Debug, Clone)]
pub struct NoisyTreeParams {
    pub base: Graph,
    pub epsilon: f64,
    pub n: usize,
}

impl NoisyTreeParams {
    pub fn new(base: Graph, epsilon: f64) -> Result<Self, ModelError> {
        let n = base.n();
        let is_tree = n > 0 && base.m() == n - 1 && base.connected_components().len() == 1;
        if !is_tree {
            return Err(ModelError::NotATree);
        }
        if epsilon < 0.0 || epsilon.is_nan() || epsilon / n as f64 > 1.0 {
            return Err(ModelError::BadProbability(epsilon));
        }
        Ok(NoisyTreeParams { base, epsilon, n })
    }
}

/// Base tree plus independent random non-edges with probability epsilon / n.
///
/// The pair walk covers all C(n,2) pairs and simply ignores landings on tree
/// edges, which preserves independence of the non-edges.
pub fn noisy_tree(params: &NoisyTreeParams, seed: u64) -> Graph {
    let n = params.n;
    let p = params.epsilon / n as f64;
    let mut rng = seeds::substream(seed, "noisytree", &[n as u64]);
    let mut edges = params.base.edges();
    for (u, v) in sample_pairs(n, p, &mut rng) {
        if !params.base.has_edge(u, v) {
            edges.push((u, v));
        }
    }
    Graph::from_edge_list(n, &edges).expect("tree edges plus distinct non-edges")
}

/// side x side grid with 4-neighbor adjacency; vertex id = row * side + col.
pub fn grid(side: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let v = (r * side + c) as u32;
            if c + 1 < side {
                edges.push((v, v + 1));
            }
            if r + 1 < side {
                edges.push((v, v + side as u32));
            }
        }
    }
    Graph::from_edge_list(side * side, &edges).expect("grid is simple")
}

/// Path on n vertices, 0 - 1 - ... - (n-1).
pub fn path(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
    Graph::from_edge_list(n, &edges).expect("path is simple")
}

/// Star on n vertices with center 0.
pub fn star(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (0, v)).collect();
    Graph::from_edge_list(n, &edges).expect("star is simple")
}

/// Number of boundary edges between `s` and its complement, evaluated in the
/// padded (side + 2) x (side + 2) embedding of the side x side grid.
///
/// Counting boundary edges rather than boundary cells keeps the perimeter
/// non-increasing under threshold-2 percolation: a newly infected cell
/// consumes at least two boundary edges and exposes at most two new ones.
/// Counting distinct boundary cells lacks this property (a diagonal pair
/// closing into a 2 x 2 block goes from 6 to 8 boundary cells).
pub fn grid_perimeter(side: usize, s: &VertexSet) -> usize {
    let mut in_s = vec![false; side * side];
    for v in s.iter() {
        in_s[v as usize] = true;
    }
    let member = |r: i64, c: i64| -> bool {
        r >= 0 && c >= 0 && (r as usize) < side && (c as usize) < side && in_s[r as usize * side + c as usize]
    };
    let mut boundary = 0;
    for v in s.iter() {
        let r = (v as usize / side) as i64;
        let c = (v as usize % side) as i64;
        for (dr, dc) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            // Padded embedding: every cell has 4 neighbors, so each
            // non-member side contributes one boundary edge.
            if !member(r + dr, c + dc) {
                boundary += 1;
            }
        }
    }
    boundary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        let empty = gnp(10, 0.0, 1).unwrap();
        assert_eq!(empty.m(), 0);
        let complete = gnp(10, 1.0, 1).unwrap();
        assert_eq!(complete.m(), 45);
        assert!(gnp(10, 1.5, 1).is_err());
    }

    #[test]
    fn gnp_mean_edges_within_5_sigma() {
        // Binomial oracle: mean = C(n,2) p, var = C(n,2) p (1 - p).
        let n = 10_000usize;
        let p = 3.0 / n as f64;
        let pairs = (n as f64) * (n as f64 - 1.0) / 2.0;
        let mean_one = pairs * p;
        let runs = 100;
        let total: f64 = (0..runs).map(|s| gnp(n, p, s as u64).unwrap().m() as f64).sum();
        let mean_all = mean_one * runs as f64;
        let sd_all = (pairs * p * (1.0 - p) * runs as f64).sqrt();
        assert!((total - mean_all).abs() < 5.0 * sd_all, "total {total} mean {mean_all}");
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = gnp(500, 0.01, 42).unwrap();
        let b = gnp(500, 0.01, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = gnp(500, 0.01, 43).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn random_regular_forced_k4_and_cycles() {
        let g = random_regular(4, 3, 7).unwrap();
        assert_eq!(g.m(), 6); // only 3-regular simple graph on 4 vertices
        let h = random_regular(6, 2, 3).unwrap();
        for v in h.vertices() {
            assert_eq!(h.degree(v), 2);
        }
        assert_eq!(random_regular(5, 3, 0), Err(ModelError::ParityViolation(5, 3)));
        assert_eq!(random_regular(4, 4, 0), Err(ModelError::DegreeTooLarge(4, 4)));
    }

    #[test]
    fn random_regular_degree_sequence_constant() {
        for seed in 0..20 {
            let g = random_regular(30, 3, seed).unwrap();
            for v in g.vertices() {
                assert_eq!(g.degree(v), 3);
            }
        }
    }

    #[test]
    fn random_tree_shapes() {
        let edge = random_tree(2, 2, 0).unwrap();
        assert_eq!((edge.n(), edge.m()), (2, 1));
        let p = random_tree(8, 2, 5).unwrap();
        assert_eq!(p.max_degree(), 2);
        assert_eq!(p.connected_components().len(), 1);
        let t = random_tree(100, 3, 9).unwrap();
        assert_eq!(t.m(), 99);
        assert!(t.max_degree() <= 3);
        assert_eq!(t.connected_components().len(), 1);
        assert!(random_tree(5, 1, 0).is_err());
    }

    #[test]
    fn noisy_tree_contains_base_and_mean_matches() {
        let base = star(50);
        let params = NoisyTreeParams::new(base.clone(), 1.0).unwrap();
        let g = noisy_tree(&params, 11);
        for (u, v) in base.edges() {
            assert!(g.has_edge(u, v));
        }
        // epsilon = 0 keeps the tree unchanged.
        let silent = NoisyTreeParams::new(base.clone(), 0.0).unwrap();
        assert_eq!(noisy_tree(&silent, 11).edges(), base.edges());

        // Mean added edge count over 100 seeds, against the binomial oracle.
        let n = 10_000usize;
        let tree = path(n);
        let params = NoisyTreeParams::new(tree, 1.0).unwrap();
        let pairs = (n as f64) * (n as f64 - 1.0) / 2.0 - (n as f64 - 1.0);
        let p = 1.0 / n as f64;
        let runs = 100;
        let total: f64 = (0..runs)
            .map(|s| (noisy_tree(&params, s as u64).m() - (n - 1)) as f64)
            .sum();
        let mean_all = pairs * p * runs as f64;
        let sd_all = (pairs * p * (1.0 - p) * runs as f64).sqrt();
        assert!((total - mean_all).abs() < 5.0 * sd_all, "total {total} mean {mean_all}");
    }

    #[test]
    fn noisy_tree_rejects_non_trees() {
        let cycle = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(NoisyTreeParams::new(cycle, 1.0), Err(ModelError::NotATree)));
        let forest = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(NoisyTreeParams::new(forest, 1.0), Err(ModelError::NotATree)));
    }

    #[test]
    fn fixed_topologies() {
        let g = grid(2);
        assert_eq!((g.n(), g.m()), (4, 4)); // C4
        let p = path(3);
        assert_eq!(p.m(), 2);
        assert_eq!(p.degeneracy().0, 1);
        let s = star(5);
        assert_eq!(s.degree(0), 4);
    }

    #[test]
    fn grid_perimeter_examples() {
        assert_eq!(grid_perimeter(5, &VertexSet::new()), 0);
        // Single interior cell has 4 boundary edges.
        assert_eq!(grid_perimeter(5, &VertexSet::from_iter([12])), 4);
        // Full k x k interior block: 4k boundary edges.
        let k = 3;
        let mut block = Vec::new();
        for r in 1..1 + k {
            for c in 1..1 + k {
                block.push((r * 6 + c) as u32);
            }
        }
        assert_eq!(grid_perimeter(6, &VertexSet::from_iter(block)), 4 * k);
        // A corner cell still has 4 neighbors in the padded embedding.
        assert_eq!(grid_perimeter(5, &VertexSet::from_iter([0])), 4);
    }
}
