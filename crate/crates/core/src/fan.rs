//! Fans and the two fan-construction procedures.
//!
//! A fan is a chain of edges sharing one pivot vertex with pairwise
//! distinct leaves. Growing a fan greedily from a blank edge either ends in
//! a happy fan, or produces a fan that can be continued with an alternating
//! path; the second procedure additionally controls how the new color pair
//! interacts with the previous one. Procedures that probe a coloring take
//! `&mut PartialColoring` and restore it before returning.

use serde::Serialize;
use thiserror::Error;

use crate::chain::{alternating_path_raw, shift_chain_in_place, Chain};
use crate::coloring::{Color, PartialColoring};
use crate::graph::{EdgeId, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("edge {edge} is colored; fans start at a blank edge")]
    EdgeColored { edge: EdgeId },
    #[error("deg(x, φ, {alpha}{beta}) = {deg}, expected exactly 1")]
    BadPairDegree { alpha: Color, beta: Color, deg: u8 },
}

/// A chain of the form (xy₀, xy₁, …) with pairwise distinct leaves yᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pivot: Vertex,
    leaves: Vec<Vertex>,
    edges: Vec<EdgeId>,
}

impl Fan {
    fn new(pivot: Vertex, leaves: Vec<Vertex>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(leaves.len(), edges.len());
        debug_assert!(!leaves.is_empty());
        Self {
            pivot,
            leaves,
            edges,
        }
    }

    pub fn pivot(&self) -> Vertex {
        self.pivot
    }

    pub fn leaves(&self) -> &[Vertex] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn v_end(&self) -> Vertex {
        *self.leaves.last().unwrap()
    }

    pub fn start(&self) -> EdgeId {
        self.edges[0]
    }

    pub fn end(&self) -> EdgeId {
        *self.edges.last().unwrap()
    }

    pub fn chain(&self) -> Chain {
        Chain::from_edges_unchecked(self.edges.clone())
    }
}

/// Result of a fan-construction procedure. `HopefulSameColors` only arises
/// from the second procedure, which keeps the caller's color pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FanOutcome {
    Happy(Fan),
    Successful(Fan, Color, Color),
    HopefulSameColors(Fan),
}

impl FanOutcome {
    pub fn fan(&self) -> &Fan {
        match self {
            FanOutcome::Happy(f) => f,
            FanOutcome::Successful(f, _, _) => f,
            FanOutcome::HopefulSameColors(f) => f,
        }
    }
}

/// Whether the fan is (φ, αβ)-hopeful: both the pivot and the last leaf
/// have degree < 2 in G(φ, αβ).
pub fn is_fan_hopeful(phi: &PartialColoring, fan: &Fan, alpha: Color, beta: Color) -> bool {
    phi.two_color_degree(fan.pivot(), alpha, beta) < 2
        && phi.two_color_degree(fan.v_end(), alpha, beta) < 2
}

/// Whether the fan is (φ, αβ)-successful: hopeful, and after shifting the
/// fan the pivot and last leaf land in different components of G(·, αβ).
/// Probes by shifting and reverting; `phi` is unchanged on return.
pub fn is_fan_successful(
    graph: &Graph,
    phi: &mut PartialColoring,
    fan: &Fan,
    alpha: Color,
    beta: Color,
) -> bool {
    if !is_fan_hopeful(phi, fan, alpha, beta) {
        return false;
    }
    let chain = fan.chain();
    shift_chain_in_place(graph, phi, &chain).expect("grown fans are shiftable");
    let related = phi
        .are_related(graph, fan.pivot(), fan.v_end(), alpha, beta)
        .expect("distinct palette colors");
    shift_chain_in_place(graph, phi, &chain.reverse()).expect("reverse shift restores");
    !related
}

/// Picks between the full fan and its prefix ending before leaf `j`,
/// preferring the full fan when both are successful.
fn disambiguate(
    graph: &Graph,
    phi: &mut PartialColoring,
    pivot: Vertex,
    leaves: Vec<Vertex>,
    edges: Vec<EdgeId>,
    j: usize,
    alpha: Color,
    beta: Color,
) -> FanOutcome {
    let full = Fan::new(pivot, leaves.clone(), edges.clone());
    if is_fan_successful(graph, phi, &full, alpha, beta) {
        return FanOutcome::Successful(full, alpha, beta);
    }
    let prefix = Fan::new(pivot, leaves[..j].to_vec(), edges[..j].to_vec());
    debug_assert!(is_fan_successful(graph, phi, &prefix, alpha, beta));
    FanOutcome::Successful(prefix, alpha, beta)
}

/// First fan procedure. Starting from the blank edge `e` with pivot `x`,
/// grows leaves by following the smallest missing color of the current
/// leaf. Ends happy (the followed color is also missing at the pivot) or
/// with a repeat, which yields a color pair (α, β) and a fan that is
/// (φ, αβ)-successful.
pub fn first_fan(
    graph: &Graph,
    phi: &mut PartialColoring,
    e: EdgeId,
    x: Vertex,
) -> Result<FanOutcome, FanError> {
    if !phi.is_blank(e) {
        return Err(FanError::EdgeColored { edge: e });
    }
    let y = graph.other_endpoint(e, x);
    if phi.smallest_common_missing(x, y).is_some() {
        return Ok(FanOutcome::Happy(Fan::new(x, vec![y], vec![e])));
    }
    let mut leaves = vec![y];
    let mut edges = vec![e];
    loop {
        let tip = *leaves.last().unwrap();
        let c = phi.smallest_missing(tip);
        if phi.is_missing(x, c) {
            return Ok(FanOutcome::Happy(Fan::new(x, leaves, edges)));
        }
        let xz = phi.colored_edge_at(x, c).expect("c present at x");
        let z = graph.other_endpoint(xz, x);
        debug_assert_ne!(z, y, "xz is colored, xy is blank");
        debug_assert_ne!(z, tip, "c is missing at the tip but present at z");
        if let Some(j) = leaves.iter().position(|&w| w == z) {
            debug_assert!(j >= 1);
            let beta = c;
            let alpha = phi.smallest_missing(x);
            debug_assert_ne!(alpha, beta);
            return Ok(disambiguate(graph, phi, x, leaves, edges, j, alpha, beta));
        }
        leaves.push(z);
        edges.push(xz);
        assert!(
            leaves.len() <= graph.degree(x),
            "fan growth exceeded the pivot degree"
        );
    }
}

/// Second fan procedure, for a step that inherits a color pair (α, β) with
/// deg(x, φ, αβ) = 1. Like the first procedure, but the leaf-color choice
/// avoids β at the first leaf, and hitting β stops with a fan that reuses
/// (α, β): hopeful, ending away from y, and touching no αβ-colored edge.
/// A repeat instead yields fresh colors (γ, δ) disjoint from {α, β}.
pub fn second_fan(
    graph: &Graph,
    phi: &mut PartialColoring,
    e: EdgeId,
    x: Vertex,
    alpha: Color,
    beta: Color,
) -> Result<FanOutcome, FanError> {
    if !phi.is_blank(e) {
        return Err(FanError::EdgeColored { edge: e });
    }
    let deg = phi.two_color_degree(x, alpha, beta);
    if deg != 1 {
        return Err(FanError::BadPairDegree { alpha, beta, deg });
    }
    let y = graph.other_endpoint(e, x);
    if phi.smallest_common_missing(x, y).is_some() {
        return Ok(FanOutcome::Happy(Fan::new(x, vec![y], vec![e])));
    }
    // Exactly one of α, β is missing at x; call the present one `present`.
    let (missing_at_x, present) = if phi.is_missing(x, alpha) {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let leaf_color = |phi: &PartialColoring, z: Vertex| -> Color {
        if z == y {
            // |M(φ, y)| ≥ 2 since y is incident to the blank edge e.
            (1..=phi.palette())
                .find(|&c| c != present && phi.is_missing(z, c))
                .expect("y misses at least two colors")
        } else {
            phi.smallest_missing(z)
        }
    };
    let mut leaves = vec![y];
    let mut edges = vec![e];
    loop {
        let tip = *leaves.last().unwrap();
        let d = leaf_color(phi, tip);
        if phi.is_missing(x, d) {
            return Ok(FanOutcome::Happy(Fan::new(x, leaves, edges)));
        }
        if d == present {
            // The fan keeps the inherited pair: hopeful, ends away from y,
            // and none of its edges is colored α or β.
            return Ok(FanOutcome::HopefulSameColors(Fan::new(x, leaves, edges)));
        }
        let xz = phi.colored_edge_at(x, d).expect("d present at x");
        let z = graph.other_endpoint(xz, x);
        debug_assert_ne!(z, y);
        debug_assert_ne!(z, tip);
        if let Some(j) = leaves.iter().position(|&w| w == z) {
            debug_assert!(j >= 1);
            let delta = d;
            let gamma = (1..=phi.palette())
                .find(|&c| c != missing_at_x && phi.is_missing(x, c))
                .expect("x misses at least two colors");
            debug_assert!(delta != alpha && delta != beta && gamma != alpha && gamma != beta);
            return Ok(disambiguate(graph, phi, x, leaves, edges, j, gamma, delta));
        }
        leaves.push(z);
        edges.push(xz);
        assert!(
            leaves.len() <= graph.degree(x),
            "fan growth exceeded the pivot degree"
        );
    }
}

/// Classical one-shot construction: a fan, optionally extended with the
/// full alternating path. Always returns a φ-happy chain starting at `e`;
/// there is no length control. `phi` is restored before returning.
pub fn single_step_vizing(graph: &Graph, phi: &mut PartialColoring, e: EdgeId) -> Chain {
    let (u, v) = graph.endpoints(e);
    let x = u.min(v);
    match first_fan(graph, phi, e, x).expect("e is blank") {
        FanOutcome::Happy(fan) => fan.chain(),
        FanOutcome::Successful(fan, alpha, beta) => {
            let fan_chain = fan.chain();
            shift_chain_in_place(graph, phi, &fan_chain).expect("grown fans are shiftable");
            let (path, _) = alternating_path_raw(graph, phi, fan.end(), fan.v_end(), alpha, beta);
            shift_chain_in_place(graph, phi, &fan_chain.reverse()).expect("reverse restores");
            fan_chain.combine(&path).expect("path starts at End(F)")
        }
        FanOutcome::HopefulSameColors(_) => unreachable!("first procedure never reuses colors"),
    }
}
