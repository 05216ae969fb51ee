//! Conflict resolution between candidate chains grown in the same phase.
//!
//! Two candidates conflict when their subgraphs share a vertex; an
//! independent set of the conflict graph can be augmented in parallel. The
//! maximal-independent-set step stands in for the hypergraph matching
//! machinery of the source pipeline: independence in this graph is exactly
//! the disjointness the parallel augmentation needs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::graph::{EdgeId, Graph};

/// Graph on the phase's candidates; node i corresponds to `edges[i]`.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    edges: Vec<EdgeId>,
    adjacency: Vec<Vec<usize>>,
}

impl ConflictGraph {
    /// Builds the exact vertex-intersection adjacency via an inverted
    /// index from graph vertices to candidates.
    pub fn build(graph: &Graph, candidates: &[(EdgeId, Chain)]) -> Self {
        let mut owner: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count()];
        for (i, (_, chain)) in candidates.iter().enumerate() {
            for v in chain.vertex_set(graph) {
                owner[v].push(i);
            }
        }
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); candidates.len()];
        for slot in &owner {
            for (a, &i) in slot.iter().enumerate() {
                for &j in &slot[a + 1..] {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Self {
            edges: candidates.iter().map(|&(e, _)| e).collect(),
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_edge(&self, i: usize) -> EdgeId {
        self.edges[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MisAlgorithm {
    /// Randomized rounds: lowest draw among live neighbors joins.
    #[default]
    Luby,
    /// Deterministic scan in node-id order.
    GreedyById,
}

impl std::str::FromStr for MisAlgorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "luby" => Ok(Self::Luby),
            "greedy" | "greedy-by-id" => Ok(Self::GreedyById),
            other => Err(format!("unknown MIS algorithm {other:?}")),
        }
    }
}

/// Maximal independent set of the conflict graph. Returns the selected
/// node indices (sorted) and the number of simulated rounds: one per Luby
/// iteration, or a single round for the greedy scan.
pub fn independent_set(
    gamma: &ConflictGraph,
    rng: &mut ChaCha8Rng,
    algorithm: MisAlgorithm,
) -> (Vec<usize>, usize) {
    match algorithm {
        MisAlgorithm::Luby => luby(gamma, rng),
        MisAlgorithm::GreedyById => greedy(gamma),
    }
}

fn greedy(gamma: &ConflictGraph) -> (Vec<usize>, usize) {
    let n = gamma.node_count();
    let mut selected = vec![false; n];
    let mut blocked = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if blocked[i] {
            continue;
        }
        selected[i] = true;
        out.push(i);
        for &j in gamma.neighbors(i) {
            blocked[j] = true;
        }
    }
    let _ = selected;
    (out, 1)
}

fn luby(gamma: &ConflictGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, usize) {
    let n = gamma.node_count();
    let mut live: Vec<bool> = vec![true; n];
    let mut remaining = n;
    let mut out = Vec::new();
    let mut rounds = 0;
    let mut draw: Vec<u64> = vec![0; n];
    while remaining > 0 {
        rounds += 1;
        // Draws are generated in index order so the result is independent
        // of scheduling.
        for i in 0..n {
            if live[i] {
                draw[i] = rng.random();
            }
        }
        let joins: Vec<usize> = (0..n)
            .filter(|&i| {
                live[i]
                    && gamma
                        .neighbors(i)
                        .iter()
                        .all(|&j| !live[j] || (draw[i], i) < (draw[j], j))
            })
            .collect();
        for &i in &joins {
            out.push(i);
            if live[i] {
                live[i] = false;
                remaining -= 1;
            }
            for &j in gamma.neighbors(i) {
                if live[j] {
                    live[j] = false;
                    remaining -= 1;
                }
            }
        }
    }
    out.sort_unstable();
    (out, rounds)
}
