//! Forward and backward reachability through two-colored components.
//!
//! `r_out(x)` collects x itself, its neighbors, and every vertex reachable
//! along a single αβ-component hanging off a neighbor of x with degree < 2
//! in that component, unioned over color pairs. `r_in` is its exact
//! inverse; its size is bounded by (Δ+1)³ regardless of the coloring, which
//! is what makes the step-to-step independence arguments work.

use crate::coloring::{Color, PartialColoring};
use crate::graph::{Graph, Vertex};

/// Marks the αβ-component of `u` as visited and returns its path endpoints,
/// or `None` if the component is a cycle. A singleton component reports
/// `(u, u)`.
fn scan_component(
    graph: &Graph,
    phi: &PartialColoring,
    u: Vertex,
    alpha: Color,
    beta: Color,
    visited: &mut [bool],
    touched: &mut Vec<Vertex>,
) -> Option<(Vertex, Vertex)> {
    let mark = |v: Vertex, visited: &mut [bool], touched: &mut Vec<Vertex>| {
        if !visited[v] {
            visited[v] = true;
            touched.push(v);
        }
    };
    mark(u, visited, touched);
    let incident: Vec<_> = [
        phi.colored_edge_at(u, alpha),
        phi.colored_edge_at(u, beta),
    ]
    .into_iter()
    .flatten()
    .collect();
    match incident.len() {
        0 => Some((u, u)),
        _ => {
            let mut ends = Vec::with_capacity(2);
            for (dir, &first) in incident.iter().enumerate() {
                let mut prev = first;
                let mut cur = graph.other_endpoint(first, u);
                loop {
                    if cur == u {
                        // Closed back on the start: cycle component.
                        debug_assert_eq!(dir, 0);
                        return None;
                    }
                    mark(cur, visited, touched);
                    let next = [
                        phi.colored_edge_at(cur, alpha),
                        phi.colored_edge_at(cur, beta),
                    ]
                    .into_iter()
                    .flatten()
                    .find(|&e| e != prev);
                    match next {
                        Some(e) => {
                            prev = e;
                            cur = graph.other_endpoint(e, cur);
                        }
                        None => {
                            ends.push(cur);
                            break;
                        }
                    }
                }
            }
            match (incident.len(), ends.as_slice()) {
                (1, [a]) => Some((*a, u)),
                (2, [a, b]) => Some((*a, *b)),
                _ => unreachable!(),
            }
        }
    }
}

/// R→(x, φ): union over distinct color pairs of the forward reach of `x`.
/// Sorted and deduplicated.
pub fn r_out(graph: &Graph, phi: &PartialColoring, x: Vertex) -> Vec<Vertex> {
    let n = graph.vertex_count();
    let mut member = vec![false; n];
    let mut out = Vec::new();
    let add = |v: Vertex, member: &mut Vec<bool>, out: &mut Vec<Vertex>| {
        if !member[v] {
            member[v] = true;
            out.push(v);
        }
    };
    add(x, &mut member, &mut out);
    for &(z, _) in graph.neighbors(x) {
        add(z, &mut member, &mut out);
    }
    let palette = phi.palette();
    let mut visited = vec![false; n];
    let mut touched = Vec::new();
    for alpha in 1..=palette {
        for beta in (alpha + 1)..=palette {
            for &(z, _) in graph.neighbors(x) {
                if phi.two_color_degree(z, alpha, beta) == 2 || visited[z] {
                    continue;
                }
                let before = touched.len();
                scan_component(graph, phi, z, alpha, beta, &mut visited, &mut touched);
                for &v in &touched[before..] {
                    add(v, &mut member, &mut out);
                }
            }
            for &v in &touched {
                visited[v] = false;
            }
            touched.clear();
        }
    }
    out.sort_unstable();
    out
}

/// R←(C, φ) for a set of vertices `targets` = V(C): everything whose
/// forward reach meets the set. Sorted and deduplicated.
pub fn r_in_set(graph: &Graph, phi: &PartialColoring, targets: &[Vertex]) -> Vec<Vertex> {
    let n = graph.vertex_count();
    let mut member = vec![false; n];
    let mut out = Vec::new();
    let add = |v: Vertex, member: &mut Vec<bool>, out: &mut Vec<Vertex>| {
        if !member[v] {
            member[v] = true;
            out.push(v);
        }
    };
    for &y in targets {
        add(y, &mut member, &mut out);
        for &(w, _) in graph.neighbors(y) {
            add(w, &mut member, &mut out);
        }
    }
    let palette = phi.palette();
    let mut visited = vec![false; n];
    let mut touched = Vec::new();
    for alpha in 1..=palette {
        for beta in (alpha + 1)..=palette {
            for &y in targets {
                if visited[y] {
                    continue;
                }
                // Only path components expose a vertex z with deg(z) < 2;
                // every x adjacent to such a z reaches the whole component.
                if let Some((a, b)) =
                    scan_component(graph, phi, y, alpha, beta, &mut visited, &mut touched)
                {
                    for end in [a, b] {
                        for &(w, _) in graph.neighbors(end) {
                            add(w, &mut member, &mut out);
                        }
                    }
                }
            }
            for &v in &touched {
                visited[v] = false;
            }
            touched.clear();
        }
    }
    out.sort_unstable();
    out
}

/// R←(y, φ) = {x : y ∈ R→(x, φ)}. Sorted; size bounded by (Δ+1)³.
pub fn r_in(graph: &Graph, phi: &PartialColoring, y: Vertex) -> Vec<Vertex> {
    let out = r_in_set(graph, phi, &[y]);
    debug_assert!(
        out.len() <= (graph.max_degree() + 1).pow(3),
        "|R←({y})| = {} exceeds (Δ+1)³",
        out.len()
    );
    out
}

/// R←(C, φ) over the vertex set of a chain.
pub fn r_in_chain(graph: &Graph, phi: &PartialColoring, chain: &crate::chain::Chain) -> Vec<Vertex> {
    r_in_set(graph, phi, &chain.vertex_set(graph))
}
