//! Exact solver for influence diffusion minimization: given immunizable
//! vertices A, counted vertices B and a budget, choose up to `budget`
//! vertices of A to immunize so that percolation from the threshold-0 seeds
//! infects as few B-vertices as possible.
//!
//! `gidm_bruteforce` enumerates immunization sets directly and serves as the
//! oracle; `solve_gidm` runs a dynamic program over a nice tree
//! decomposition and re-verifies its certificate by forward percolation.

use crate::decomposition::{validate_nice, NiceDecomposition, NodeKind};
use crate::graph::{Graph, VertexSet};
use crate::percolation::{percolate, ThresholdMap};
use itertools::Itertools;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GidmError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance too large for brute force: |A| = {a}, budget = {budget}")]
    TooLarge { a: usize, budget: usize },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("internal consistency check failed: {0}")]
    IllegalState(String),
}

/// Brute-force guard: subsets of A are enumerated only below these sizes.
pub const BRUTEFORCE_A_LIMIT: usize = 20;
pub const BRUTEFORCE_BUDGET_LIMIT: usize = 6;

/// One minimization instance. Seeds are exactly the threshold-0 vertices.
#[derive(Debug, Clone)]
pub struct GidmInstance {
    pub g: Graph,
    pub t: ThresholdMap,
    /// Vertices that may be immunized.
    pub a: VertexSet,
    /// Vertices whose infection is counted.
    pub b: VertexSet,
    pub budget: usize,
}

impl GidmInstance {
    /// Validates ranges and that every input threshold is finite; immunized
    /// thresholds only arise inside the solvers.
    pub fn new(
        g: Graph,
        t: ThresholdMap,
        a: VertexSet,
        b: VertexSet,
        budget: usize,
    ) -> Result<Self, GidmError> {
        if t.len() != g.n() {
            return Err(GidmError::InvalidInstance(format!(
                "threshold map covers {} vertices, graph has {}",
                t.len(),
                g.n()
            )));
        }
        for v in g.vertices() {
            if t.get(v).is_immunized() {
                return Err(GidmError::InvalidInstance(format!(
                    "vertex {v} is immunized in the input thresholds"
                )));
            }
        }
        for v in a.iter().chain(b.iter()) {
            if v as usize >= g.n() {
                return Err(GidmError::InvalidInstance(format!("vertex {v} out of range")));
            }
        }
        Ok(GidmInstance { g, t, a, b, budget })
    }

    /// Threshold-0 vertices, which activate unless immunized.
    pub fn seeds(&self) -> VertexSet {
        self.t.seeds()
    }

    // Infected B-count after immunizing `immune`.
    fn evaluate(&self, immune: &VertexSet) -> usize {
        let t = self.t.with_immunized(immune);
        let seeds = self.seeds().difference(immune);
        let trace = percolate(&self.g, &t, &seeds).expect("immunized vertices removed from seeds");
        trace.closure.intersection(&self.b).len()
    }
}

/// Exact optimum by enumerating every immunization set I with |I| <= budget.
/// Ties break toward the lexicographically smallest set.
pub fn gidm_bruteforce(instance: &GidmInstance) -> Result<(usize, VertexSet), GidmError> {
    let a = instance.a.len();
    if a > BRUTEFORCE_A_LIMIT || instance.budget > BRUTEFORCE_BUDGET_LIMIT {
        return Err(GidmError::TooLarge { a, budget: instance.budget });
    }
    let pool: Vec<u32> = instance.a.iter().collect();
    let mut best: Option<(usize, VertexSet)> = None;
    for size in 0..=instance.budget.min(a) {
        for combo in pool.iter().copied().combinations(size) {
            let immune = VertexSet::from_iter(combo);
            let value = instance.evaluate(&immune);
            let candidate = (value, immune);
            let improves = match &best {
                None => true,
                Some(cur) => {
                    (candidate.0, candidate.1.as_slice()) < (cur.0, cur.1.as_slice())
                }
            };
            if improves {
                best = Some(candidate);
            }
        }
    }
    Ok(best.expect("empty immunization set always enumerated"))
}

// Per-vertex commitment inside a bag.
const STATE_INFECTED: u8 = 0;
const STATE_SAFE: u8 = 1;
const STATE_IMMUNIZED: u8 = 2;

// Cell key: (budget used so far, state per bag vertex, remaining allowance
// per bag vertex). Allowances are meaningful for safe vertices only and
// pinned to 0 otherwise.
type CellKey = (u32, Vec<u8>, Vec<u32>);
type CellValue = (u64, VertexSet);
type Table = HashMap<CellKey, CellValue>;

fn merge(table: &mut Table, key: CellKey, value: CellValue) {
    match table.get_mut(&key) {
        None => {
            table.insert(key, value);
        }
        Some(cur) => {
            // Witness order makes the result independent of map iteration.
            if (value.0, value.1.as_slice()) < (cur.0, cur.1.as_slice()) {
                *cur = value;
            }
        }
    }
}

/// Exact GIDM over a nice tree decomposition.
///
/// Each cell commits every bag vertex to infected, safe or immunized and
/// tracks, for safe vertices, how many more infected neighbors they can
/// tolerate. Edges are accounted exactly once, at the forget node of their
/// first-forgotten endpoint; a safe vertex is checked against its threshold
/// when forgotten. Counted B-vertices are added at their forget node, which
/// is unique per vertex, so join nodes simply add values.
pub fn solve_gidm(
    instance: &GidmInstance,
    nd: &NiceDecomposition,
) -> Result<(usize, VertexSet), GidmError> {
    validate_nice(&instance.g, nd).map_err(GidmError::InvalidDecomposition)?;
    let thresholds: Vec<u32> = instance
        .g
        .vertices()
        .map(|v| instance.t.get(v).finite().expect("instance thresholds are finite"))
        .collect();
    let budget = instance.budget as u32;

    let order = nd.postorder();
    let mut tables: Vec<Option<Table>> = vec![None; nd.nodes.len()];
    for &i in &order {
        let node = &nd.nodes[i];
        let bag = node.bag.as_slice();
        let mut table = Table::new();
        match node.kind {
            NodeKind::Leaf => {
                table.insert((0, Vec::new(), Vec::new()), (0, VertexSet::new()));
            }
            NodeKind::Introduce(u) => {
                let child = tables[node.children[0]].take().expect("child processed");
                let pos = bag.binary_search(&u).expect("introduced vertex is in the bag");
                let can_immunize = instance.a.contains(u);
                let t_u = thresholds[u as usize];
                for ((p, s, c), (value, witness)) in child {
                    let mut s_inf = s.clone();
                    s_inf.insert(pos, STATE_INFECTED);
                    let mut c_inf = c.clone();
                    c_inf.insert(pos, 0);
                    merge(&mut table, (p, s_inf, c_inf), (value, witness.clone()));
                    // A seed can never be safe, so skip the dead cell.
                    if t_u > 0 {
                        let mut s_safe = s.clone();
                        s_safe.insert(pos, STATE_SAFE);
                        let mut c_safe = c.clone();
                        c_safe.insert(pos, t_u);
                        merge(&mut table, (p, s_safe, c_safe), (value, witness.clone()));
                    }
                    if can_immunize && p < budget {
                        let mut s_imm = s;
                        s_imm.insert(pos, STATE_IMMUNIZED);
                        let mut c_imm = c;
                        c_imm.insert(pos, 0);
                        let mut w = witness;
                        w.insert(u);
                        merge(&mut table, (p + 1, s_imm, c_imm), (value, w));
                    }
                }
            }
            NodeKind::Forget(u) => {
                let child_idx = node.children[0];
                let child_bag = nd.nodes[child_idx].bag.as_slice().to_vec();
                let child = tables[child_idx].take().expect("child processed");
                let pos = child_bag.binary_search(&u).expect("forgotten vertex in child bag");
                // Positions in the child bag of u's still-present neighbors.
                let nbr_pos: Vec<usize> = instance
                    .g
                    .neighbors(u)
                    .iter()
                    .filter_map(|w| child_bag.binary_search(w).ok())
                    .collect();
                let counted = instance.b.contains(u) as u64;
                'cells: for ((p, s, c), (value, witness)) in child {
                    let mut value = value;
                    let mut s_new = s.clone();
                    s_new.remove(pos);
                    let mut c_new = c.clone();
                    c_new.remove(pos);
                    match s[pos] {
                        STATE_INFECTED => {
                            value += counted;
                            // u infects each safe neighbor still in the bag.
                            for &q in &nbr_pos {
                                if s[q] != STATE_SAFE {
                                    continue;
                                }
                                let q_new = if q > pos { q - 1 } else { q };
                                if c_new[q_new] == 0 {
                                    continue 'cells; // allowance exhausted
                                }
                                c_new[q_new] -= 1;
                            }
                        }
                        STATE_SAFE => {
                            // Forgotten infected neighbors already reduced
                            // c[pos]; in-bag infected neighbors are final.
                            let in_bag =
                                nbr_pos.iter().filter(|&&q| s[q] == STATE_INFECTED).count() as u32;
                            if c[pos] <= in_bag {
                                continue 'cells; // threshold would be met
                            }
                        }
                        _ => {}
                    }
                    merge(&mut table, (p, s_new, c_new), (value, witness));
                }
            }
            NodeKind::Join => {
                let left = tables[node.children[0]].take().expect("child processed");
                let right = tables[node.children[1]].take().expect("child processed");
                // Bucket one side by state vector; only equal states combine.
                let mut by_state: HashMap<Vec<u8>, Vec<(u32, Vec<u32>, u64, VertexSet)>> =
                    HashMap::new();
                for ((p, s, c), (value, witness)) in right {
                    by_state.entry(s).or_default().push((p, c, value, witness));
                }
                for ((p_l, s, c_l), (v_l, w_l)) in left {
                    let Some(partners) = by_state.get(&s) else { continue };
                    let immunized_in_bag =
                        s.iter().filter(|&&x| x == STATE_IMMUNIZED).count() as u32;
                    'partners: for (p_r, c_r, v_r, w_r) in partners {
                        // Bag immunizations are paid on both sides.
                        let p = p_l + p_r - immunized_in_bag;
                        if p > budget {
                            continue;
                        }
                        let mut c = c_l.clone();
                        for (q, slot) in c.iter_mut().enumerate() {
                            if s[q] == STATE_SAFE {
                                // Both sides start from t(u); consumed
                                // allowances add up across the subtrees.
                                let t_u = thresholds[bag[q] as usize];
                                let sum = *slot + c_r[q];
                                if sum < t_u {
                                    continue 'partners;
                                }
                                *slot = sum - t_u;
                            }
                        }
                        let value = v_l + v_r;
                        let witness = w_l.union(w_r);
                        merge(&mut table, (p, s.clone(), c), (value, witness));
                    }
                }
            }
        }
        debug_assert!(table_fits_bound(&table, bag, &thresholds, &instance.g));
        tables[i] = Some(table);
    }

    let root = tables[nd.root].take().expect("root processed");
    let mut best: Option<(u64, VertexSet)> = None;
    for ((_, s, _), (value, witness)) in root {
        debug_assert!(s.is_empty());
        let better = match &best {
            None => true,
            Some(cur) => (value, witness.as_slice()) < (cur.0, cur.1.as_slice()),
        };
        if better {
            best = Some((value, witness));
        }
    }
    let (value, witness) =
        best.ok_or_else(|| GidmError::IllegalState("empty root table".into()))?;

    // A certificate must reproduce its claimed count under real percolation.
    if witness.len() > instance.budget {
        return Err(GidmError::IllegalState(format!(
            "certificate uses {} immunizations, budget is {}",
            witness.len(),
            instance.budget
        )));
    }
    let check = instance.evaluate(&witness);
    if check as u64 != value {
        return Err(GidmError::IllegalState(format!(
            "certificate infects {check} B-vertices, table claims {value}"
        )));
    }
    Ok((value as usize, witness))
}

// Distinct (state, allowance) pairs per bag stay within
// 3^|bag| * prod_u min(t(u) + 1, deg(u) + 1).
fn table_fits_bound(table: &Table, bag: &[u32], thresholds: &[u32], g: &Graph) -> bool {
    let mut bound = 1u128;
    for &u in bag {
        let per = (thresholds[u as usize] + 1).min(g.degree(u) as u32 + 1) as u128;
        bound = bound.saturating_mul(3).saturating_mul(per);
    }
    let distinct: std::collections::HashSet<(&Vec<u8>, &Vec<u32>)> =
        table.keys().map(|(_, s, c)| (s, c)).collect();
    (distinct.len() as u128) <= bound
}
