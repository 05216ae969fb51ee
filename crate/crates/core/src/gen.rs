//! Seeded instance generators: named graphs and reproducible random graphs.
//!
//! The random model is G(n, p) with p targeting a requested maximum degree,
//! followed by a degree cap enforced by edge deletion, so the realized Δ
//! never exceeds the target. Everything is deterministic per seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::PartialColoring;
use crate::graph::{Graph, Vertex};

/// Mixes a master seed with stream labels into an independent RNG seed.
/// SplitMix64 finalizer; used to derive per-edge / per-phase streams.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut z = master ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with p = target_delta/(n-1), degree-capped at `target_delta` by
/// deleting excess edges in sampling order.
pub fn random_graph(n: usize, target_delta: usize, seed: u64) -> Graph {
    let mut rng = rng_from(derive_seed(seed, 0x6772_6170, n as u64));
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    if n >= 2 && target_delta > 0 {
        let p = (target_delta as f64 / (n - 1) as f64).min(1.0);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p && degree[u] < target_delta && degree[v] < target_delta {
                    degree[u] += 1;
                    degree[v] += 1;
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::new(n, edges).expect("generator emits simple graphs")
}

/// Colors roughly `fraction` of the edges, scanning in a seeded random order
/// and assigning a random common missing color where one exists. The result
/// is proper by construction.
pub fn random_partial_coloring(graph: &Graph, fraction: f64, seed: u64) -> PartialColoring {
    let mut rng = rng_from(derive_seed(seed, 0x636f_6c72, graph.edge_count() as u64));
    let mut phi = PartialColoring::new(graph);
    let mut order: Vec<usize> = graph.edge_ids().collect();
    shuffle(&mut order, &mut rng);
    for e in order {
        if rng.random::<f64>() >= fraction {
            continue;
        }
        let (x, y) = graph.endpoints(e);
        let common: Vec<_> = phi
            .missing_colors(x)
            .into_iter()
            .filter(|&c| phi.is_missing(y, c))
            .collect();
        if let Some(&c) = pick(&common, &mut rng) {
            phi.set(graph, e, c).expect("common missing color is proper");
        }
    }
    phi
}

/// Greedy pass: colors every edge (in id order) that has a common missing
/// color, leaving the stuck ones blank.
pub fn greedy_partial_coloring(graph: &Graph) -> PartialColoring {
    let mut phi = PartialColoring::new(graph);
    for e in graph.edge_ids() {
        let (x, y) = graph.endpoints(e);
        if let Some(c) = phi.smallest_common_missing(x, y) {
            phi.set(graph, e, c).expect("common missing color is proper");
        }
    }
    phi
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

fn pick<'a, T>(items: &'a [T], rng: &mut ChaCha8Rng) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.random_range(0..items.len())])
    }
}

/// The Petersen graph: outer 5-cycle, inner pentagram, five spokes.
pub fn petersen() -> Graph {
    Graph::parse(&petersen_edge_list()).expect("petersen list is simple")
}

pub fn petersen_edge_list() -> String {
    let mut lines = Vec::new();
    for i in 0..5 {
        lines.push(format!("{} {}", i, (i + 1) % 5));
    }
    for i in 0..5 {
        lines.push(format!("{} {}", 5 + i, 5 + (i + 2) % 5));
    }
    for i in 0..5 {
        lines.push(format!("{} {}", i, i + 5));
    }
    lines.join("\n")
}

/// Complete graph on `k` vertices.
pub fn complete(k: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..k {
        for v in (u + 1)..k {
            edges.push((u, v));
        }
    }
    Graph::new(k, edges).expect("complete graph is simple")
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()).unwrap()
}

/// Fixed fixture used throughout the fan tests: pivot x with leaves y, a, b
/// where y carries two more colored edges. Vertices: x=0, y=1, a=2, b=3,
/// c=4, d=5; colors: xa=1, xb=2, yc=3, yd=4; xy blank; Δ=3.
pub fn double_star() -> (Graph, PartialColoring) {
    let g = Graph::new(6, vec![(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
    let mut phi = PartialColoring::new(&g);
    for (e, c) in [(1, 1), (2, 2), (3, 3), (4, 4)] {
        phi.set(&g, e, c).unwrap();
    }
    (g, phi)
}

/// All connected labeled graphs on exactly `n` vertices, enumerated by edge
/// bitmask over the pairs of [n]. Intended for small n only.
pub fn connected_graphs_exactly(n: usize) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = {
        let mut p = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                p.push((u, v));
            }
        }
        p
    };
    assert!(pairs.len() <= 20, "enumeration is exponential in pairs");
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if edges.len() + 1 < n {
            continue;
        }
        if is_connected(n, &edges) {
            out.push(Graph::new(n, edges).unwrap());
        }
    }
    out
}

fn is_connected(n: usize, edges: &[(Vertex, Vertex)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_graph_respects_degree_cap_and_seed() {
        let g1 = random_graph(200, 6, 42);
        let g2 = random_graph(200, 6, 42);
        let g3 = random_graph(200, 6, 43);
        assert!(g1.max_degree() <= 6);
        assert_eq!(g1.edge_count(), g2.edge_count());
        for e in g1.edge_ids() {
            assert_eq!(g1.endpoints(e), g2.endpoints(e));
        }
        assert!(g1.edge_count() > 0);
        // Different seed, different graph (overwhelmingly).
        assert_ne!(
            (0..g1.edge_count().min(g3.edge_count()))
                .filter(|&e| g1.endpoints(e) != g3.endpoints(e))
                .count(),
            0
        );
    }

    #[test]
    fn random_partial_coloring_is_proper() {
        let g = random_graph(80, 7, 1);
        let phi = random_partial_coloring(&g, 0.8, 2);
        assert!(phi.is_proper(&g));
        assert!(phi.slots_consistent(&g));
        assert!(phi.colored_count() > 0);
    }

    #[test]
    fn connected_enumeration_counts() {
        // Known counts of connected labeled graphs: n=2 → 1, n=3 → 4, n=4 → 38.
        assert_eq!(connected_graphs_exactly(2).len(), 1);
        assert_eq!(connected_graphs_exactly(3).len(), 4);
        assert_eq!(connected_graphs_exactly(4).len(), 38);
    }

    #[test]
    fn greedy_pass_is_proper() {
        let g = complete(6);
        let phi = greedy_partial_coloring(&g);
        assert!(phi.is_proper(&g));
    }
}
