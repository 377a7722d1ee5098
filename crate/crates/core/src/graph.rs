//! Immutable undirected simple graph with dense 0-based vertex ids.

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
}

/// A set of vertices of some graph, kept as a sorted deduplicated id list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    members: Vec<u32>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet { members: Vec::new() }
    }

    /// Builds a set from arbitrary ids, sorting and deduplicating.
    pub fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut members: Vec<u32> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: u32) {
        if let Err(pos) = self.members.binary_search(&v) {
            self.members.insert(pos, v);
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.members
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.iter().filter(|&v| other.contains(v)))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.iter().filter(|&v| !other.contains(v)))
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        VertexSet::from_iter(iter)
    }
}

/// Dense relabeling between a graph and one of its induced subgraphs.
///
/// `forward` maps old ids to new ids, `inverse` maps new ids back; the two
/// are mutually inverse bijections on the selected vertex set.
#[derive(Debug, Clone)]
pub struct SubgraphMap {
    forward: Vec<Option<u32>>,
    inverse: Vec<u32>,
}

impl SubgraphMap {
    pub fn to_sub(&self, old: u32) -> Option<u32> {
        self.forward.get(old as usize).copied().flatten()
    }

    pub fn to_original(&self, new: u32) -> u32 {
        self.inverse[new as usize]
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }
}

/// Immutable undirected simple graph; adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops and duplicates.
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let a = u.min(w[0] as usize) as u32;
                let b = u.max(w[0] as usize) as u32;
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Graph { n, m: edges.len(), adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.n as u32
    }

    /// All edges as (u, v) pairs with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// A copy of the graph with the given edges removed; unknown pairs are
    /// ignored. Deletion is expressed by rebuilding from a filtered list.
    pub fn without_edges(&self, removed: &[(u32, u32)]) -> Graph {
        let gone: std::collections::HashSet<(u32, u32)> = removed
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let kept: Vec<(u32, u32)> = self
            .edges()
            .into_iter()
            .filter(|e| !gone.contains(e))
            .collect();
        Graph::from_edge_list(self.n, &kept).expect("filtered edge list stays valid")
    }

    /// Induced subgraph on `s` with dense relabeling.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, SubgraphMap), GraphError> {
        if let Some(v) = s.iter().find(|&v| v as usize >= self.n) {
            return Err(GraphError::VertexOutOfRange(v));
        }
        let mut forward = vec![None; self.n];
        let inverse: Vec<u32> = s.iter().collect();
        for (new, &old) in inverse.iter().enumerate() {
            forward[old as usize] = Some(new as u32);
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in inverse.iter().enumerate() {
            for &old_v in self.neighbors(old_u) {
                if old_v > old_u {
                    if let Some(new_v) = forward[old_v as usize] {
                        edges.push((new_u as u32, new_v));
                    }
                }
            }
        }
        let g = Graph::from_edge_list(inverse.len(), &edges)?;
        Ok((g, SubgraphMap { forward, inverse }))
    }

    /// Connected components as a partition of the vertex set.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s as u32]);
            let mut part = vec![s as u32];
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        part.push(v);
                        queue.push_back(v);
                    }
                }
            }
            parts.push(VertexSet::from_iter(part));
        }
        parts
    }

    /// Replaces every edge (u, v) by a path u - w_uv - v. Returns the new
    /// graph together with the bijection from original edges to the new
    /// degree-2 vertices; the new graph has n + m vertices and 2m edges.
    pub fn subdivide_all_edges(&self) -> (Graph, Vec<((u32, u32), u32)>) {
        let edges = self.edges();
        let mut new_edges = Vec::with_capacity(2 * edges.len());
        let mut mapping = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            let w = (self.n + i) as u32;
            new_edges.push((u, w));
            new_edges.push((w, v));
            mapping.push(((u, v), w));
        }
        let g = Graph::from_edge_list(self.n + edges.len(), &new_edges)
            .expect("subdivision introduces no loops or duplicates");
        (g, mapping)
    }

    /// Degeneracy and the min-degree elimination order realizing it.
    pub fn degeneracy(&self) -> (usize, Vec<u32>) {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.adj[v].len()).collect();
        let mut removed = vec![false; self.n];
        // Bucket queue over degrees; ties go to the lowest id.
        let maxd = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); maxd + 1];
        for v in 0..self.n {
            buckets[deg[v]].push(v as u32);
        }
        for b in &mut buckets {
            b.sort_unstable_by(|a, b| b.cmp(a)); // pop takes the smallest id
        }
        let mut order = Vec::with_capacity(self.n);
        let mut degeneracy = 0;
        for _ in 0..self.n {
            let mut v = None;
            'outer: for d in 0..buckets.len() {
                while let Some(&cand) = buckets[d].last() {
                    // Stale entries are skipped; a vertex may sit in old buckets.
                    if removed[cand as usize] || deg[cand as usize] != d {
                        buckets[d].pop();
                        continue;
                    }
                    v = Some(cand);
                    buckets[d].pop();
                    break 'outer;
                }
            }
            let v = v.expect("a vertex remains");
            degeneracy = degeneracy.max(deg[v as usize]);
            removed[v as usize] = true;
            order.push(v);
            for &w in self.neighbors(v) {
                if !removed[w as usize] {
                    deg[w as usize] -= 1;
                    let d = deg[w as usize];
                    buckets[d].push(w);
                    // Keep the smallest id on top among equal degrees.
                    let idx = buckets[d].len() - 1;
                    let mut i = idx;
                    while i > 0 && buckets[d][i - 1] < buckets[d][i] {
                        buckets[d].swap(i - 1, i);
                        i -= 1;
                    }
                }
            }
        }
        (degeneracy, order)
    }
}
