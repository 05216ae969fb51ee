//! Shared helpers for the integration and acceptance suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vizing_core::chain::{check_pair_shiftable, shift_chain_in_place, Chain};
use vizing_core::coloring::{Color, PartialColoring};
use vizing_core::gen;
use vizing_core::graph::{EdgeId, Graph};

/// Grows a random φ-shiftable chain from a random blank edge by repeatedly
/// appending a shiftable neighbor of the current end, following the shift
/// state as it goes. Returns `None` when the coloring has no blank edge.
pub fn random_shiftable_chain(
    graph: &Graph,
    phi: &PartialColoring,
    max_len: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Chain> {
    let blanks: Vec<EdgeId> = graph.edge_ids().filter(|&e| phi.is_blank(e)).collect();
    if blanks.is_empty() {
        return None;
    }
    let start = blanks[rng.random_range(0..blanks.len())];
    let mut work = phi.clone();
    let mut edges = vec![start];
    let target = rng.random_range(1..=max_len);
    while edges.len() < target {
        let tail = *edges.last().unwrap();
        let (a, b) = graph.endpoints(tail);
        let mut options: Vec<EdgeId> = graph
            .neighbors(a)
            .iter()
            .chain(graph.neighbors(b).iter())
            .map(|&(_, e)| e)
            .filter(|&h| h != tail && check_pair_shiftable(graph, &work, tail, h).is_ok())
            .collect();
        options.sort_unstable();
        options.dedup();
        if options.is_empty() {
            break;
        }
        let next = options[rng.random_range(0..options.len())];
        vizing_core::chain::shift_pair_in_place(graph, &mut work, tail, next)
            .expect("option was checked shiftable");
        edges.push(next);
    }
    Some(Chain::new(graph, edges).expect("grown edges are adjacent"))
}

/// Random (graph, proper partial coloring) pair for a seed.
pub fn random_instance(n: usize, delta: usize, fraction: f64, seed: u64) -> (Graph, PartialColoring) {
    let g = gen::random_graph(n, delta, seed);
    let phi = gen::random_partial_coloring(&g, fraction, seed ^ 0x517e);
    (g, phi)
}

/// Greedy-colors the graph, then blanks every `stride`-th edge so the
/// instance has a predictable supply of uncolored edges.
pub fn mostly_colored(graph: &Graph, stride: usize) -> PartialColoring {
    let mut phi = gen::greedy_partial_coloring(graph);
    for e in graph.edge_ids().step_by(stride.max(1)) {
        if !phi.is_blank(e) {
            phi.unset(graph, e).unwrap();
        }
    }
    phi
}

/// A blank edge whose fan hangs onto a long two-colored tail: the multi-step
/// construction is forced to truncate at step 0, and surviving anchors enter
/// a genuine second step. Pendants on the tail keep the truncation edges
/// unhappy. Returns the instance and the blank edge (id 0).
///
/// Layout: x(0)-y(1) blank; x-a(2)=1, x-b(3)=2, y-c(4)=3, y-d(5)=4; then a
/// tail b-p0-p1-... colored 3,1,3,1,... with pendant leaves q_i colored
/// 2/4 alternately. Δ = 3.
pub fn tailed_instance(tail: usize) -> (Graph, PartialColoring, EdgeId) {
    assert!(tail >= 2);
    let mut edges = vec![(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
    let mut colors: Vec<(usize, Color)> = vec![(1, 1), (2, 2), (3, 3), (4, 4)];
    let p = |i: usize| 6 + 2 * i;
    let q = |i: usize| 7 + 2 * i;
    for i in 0..tail {
        let prev = if i == 0 { 3 } else { p(i - 1) };
        edges.push((prev, p(i)));
        colors.push((edges.len() - 1, if i % 2 == 0 { 3 } else { 1 }));
        edges.push((p(i), q(i)));
        colors.push((edges.len() - 1, if i % 2 == 0 { 2 } else { 4 }));
    }
    let g = Graph::new(6 + 2 * tail, edges).unwrap();
    assert_eq!(g.max_degree(), 3);
    let mut phi = PartialColoring::new(&g);
    for (e, c) in colors {
        phi.set(&g, e, c).unwrap();
    }
    (g, phi, 0)
}

/// Properness check written independently of the library: collects the
/// colors at every vertex from the raw edge list.
pub fn oracle_is_valid_coloring(
    n: usize,
    edges: &[(usize, usize)],
    colors: &[Option<Color>],
    palette: usize,
) -> bool {
    if colors.len() != edges.len() {
        return false;
    }
    let mut at_vertex: Vec<Vec<Color>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        match colors[e] {
            None => return false,
            Some(c) => {
                if c == 0 || c > palette {
                    return false;
                }
                if at_vertex[u].contains(&c) || at_vertex[v].contains(&c) {
                    return false;
                }
                at_vertex[u].push(c);
                at_vertex[v].push(c);
            }
        }
    }
    true
}

/// Counts proper k-edge-colorings by backtracking over edges in order.
/// Independent of the library's coloring machinery.
pub fn oracle_count_colorings(n: usize, edges: &[(usize, usize)], k: usize) -> u64 {
    fn go(
        edges: &[(usize, usize)],
        k: usize,
        idx: usize,
        used: &mut [Vec<usize>],
    ) -> u64 {
        if idx == edges.len() {
            return 1;
        }
        let (u, v) = edges[idx];
        let mut count = 0;
        for c in 1..=k {
            if used[u].contains(&c) || used[v].contains(&c) {
                continue;
            }
            used[u].push(c);
            used[v].push(c);
            count += go(edges, k, idx + 1, used);
            used[u].pop();
            used[v].pop();
        }
        count
    }
    let mut used = vec![Vec::new(); n];
    go(edges, k, 0, &mut used)
}

/// Applies a chain shift to a cloned coloring, for tests that want the
/// functional form without mutating their instance.
pub fn shifted(graph: &Graph, phi: &PartialColoring, chain: &Chain) -> PartialColoring {
    let mut out = phi.clone();
    shift_chain_in_place(graph, &mut out, chain).expect("test chains are shiftable");
    out
}
