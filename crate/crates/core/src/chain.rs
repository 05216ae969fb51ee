//! Chains of adjacent edges and the shift calculus on them: shifting moves
//! each edge's color to its predecessor and leaves the last edge blank.
//! Path-chains and alternating paths are the special cases the augmenting
//! machinery is built from.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{Color, ColoringError, PartialColoring};
use crate::graph::{EdgeId, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain must be nonempty")]
    Empty,
    #[error("edges {a} and {b} at positions {pos}, {next} are not adjacent or not distinct")]
    NotAdjacent {
        a: EdgeId,
        b: EdgeId,
        pos: usize,
        next: usize,
    },
    #[error("segment length {k} out of range 1..={len}")]
    SegmentOutOfRange { k: usize, len: usize },
    #[error("cannot combine: End(C0) = {end} but Start(C1) = {start}")]
    JunctionMismatch { end: EdgeId, start: EdgeId },
    #[error("edge sequence does not form a path of distinct vertices")]
    NotAPath,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("pair ({e0}, {e1}) at position {pos} is not shiftable: {reason}")]
    NotShiftable {
        e0: EdgeId,
        e1: EdgeId,
        pos: usize,
        reason: ColoringError,
    },
    #[error("edges {e0} and {e1} are not adjacent")]
    NotAdjacentPair { e0: EdgeId, e1: EdgeId },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AugmentError {
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error("chain is not happy: endpoints of edge {edge} share no missing color")]
    NotHappy { edge: EdgeId },
}

/// A nonempty sequence of edges in which consecutive edges are adjacent and
/// distinct. Edges may repeat non-consecutively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Chain {
    edges: Vec<EdgeId>,
}

impl Chain {
    pub fn new(graph: &Graph, edges: Vec<EdgeId>) -> Result<Self, ChainError> {
        if edges.is_empty() {
            return Err(ChainError::Empty);
        }
        for i in 0..edges.len() - 1 {
            let (a, b) = (edges[i], edges[i + 1]);
            if graph.shared_endpoint(a, b).is_none() {
                return Err(ChainError::NotAdjacent {
                    a,
                    b,
                    pos: i,
                    next: i + 1,
                });
            }
        }
        Ok(Self { edges })
    }

    /// Single-edge chain.
    pub fn singleton(e: EdgeId) -> Self {
        Self { edges: vec![e] }
    }

    pub(crate) fn from_edges_unchecked(edges: Vec<EdgeId>) -> Self {
        debug_assert!(!edges.is_empty());
        Self { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> EdgeId {
        self.edges[0]
    }

    pub fn end(&self) -> EdgeId {
        *self.edges.last().unwrap()
    }

    /// Distinct edges of the chain.
    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut set = self.edges.clone();
        set.sort_unstable();
        set.dedup();
        set
    }

    /// Distinct endpoints of the chain's edges.
    pub fn vertex_set(&self, graph: &Graph) -> Vec<Vertex> {
        let mut verts: Vec<Vertex> = self
            .edges
            .iter()
            .flat_map(|&e| {
                let (u, v) = graph.endpoints(e);
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        verts
    }

    /// The reversed chain C*.
    pub fn reverse(&self) -> Chain {
        let mut edges = self.edges.clone();
        edges.reverse();
        Chain { edges }
    }

    /// Initial segment of length `k` (1-based).
    pub fn initial_segment(&self, k: usize) -> Result<Chain, ChainError> {
        if k == 0 || k > self.edges.len() {
            return Err(ChainError::SegmentOutOfRange {
                k,
                len: self.edges.len(),
            });
        }
        Ok(Chain {
            edges: self.edges[..k].to_vec(),
        })
    }

    /// Combines two chains by identifying End(C0) with Start(C1).
    pub fn combine(&self, other: &Chain) -> Result<Chain, ChainError> {
        if self.end() != other.start() {
            return Err(ChainError::JunctionMismatch {
                end: self.end(),
                start: other.start(),
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges[1..]);
        Ok(Chain { edges })
    }
}

/// A chain whose edges form a path of pairwise distinct vertices. The
/// vertex sequence is stored explicitly, which also fixes the orientation
/// of length-1 paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathChain {
    chain: Chain,
    vertices: Vec<Vertex>,
}

impl PathChain {
    /// Validates that `chain` is a path starting at `start`.
    pub fn new(graph: &Graph, chain: Chain, start: Vertex) -> Result<Self, ChainError> {
        let mut vertices = vec![start];
        let mut cur = start;
        for &e in chain.edges() {
            if !graph.is_endpoint(e, cur) {
                return Err(ChainError::NotAPath);
            }
            cur = graph.other_endpoint(e, cur);
            if vertices.contains(&cur) {
                return Err(ChainError::NotAPath);
            }
            vertices.push(cur);
        }
        Ok(Self { chain, vertices })
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn v_start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn v_end(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }
}

/// Whether `(e0, e1)` is φ-shiftable, with the failing condition on error:
/// e0 blank, e1 colored, and φ(e1) missing at the endpoint of e0 outside e1.
pub fn check_pair_shiftable(
    graph: &Graph,
    phi: &PartialColoring,
    e0: EdgeId,
    e1: EdgeId,
) -> Result<(), ShiftError> {
    let Some(shared) = graph.shared_endpoint(e0, e1) else {
        return Err(ShiftError::NotAdjacentPair { e0, e1 });
    };
    let fail = |reason| ShiftError::NotShiftable {
        e0,
        e1,
        pos: 0,
        reason,
    };
    if !phi.is_blank(e0) {
        return Err(fail(ColoringError::AlreadyColored { edge: e0 }));
    }
    let Some(c) = phi.get(e1) else {
        return Err(fail(ColoringError::Blank { edge: e1 }));
    };
    let x = graph.other_endpoint(e0, shared);
    if let Some(existing) = phi.colored_edge_at(x, c) {
        return Err(fail(ColoringError::Clash {
            color: c,
            vertex: x,
            existing,
        }));
    }
    Ok(())
}

/// Shifts the color from `e1` to `e0` in place.
pub fn shift_pair_in_place(
    graph: &Graph,
    phi: &mut PartialColoring,
    e0: EdgeId,
    e1: EdgeId,
) -> Result<(), ShiftError> {
    check_pair_shiftable(graph, phi, e0, e1)?;
    let c = phi.unset(graph, e1).expect("checked colored");
    phi.set(graph, e0, c).expect("checked proper");
    Ok(())
}

/// Functional form of `shift_pair_in_place`.
pub fn shift_pair(
    graph: &Graph,
    phi: &PartialColoring,
    e0: EdgeId,
    e1: EdgeId,
) -> Result<PartialColoring, ShiftError> {
    let mut out = phi.clone();
    shift_pair_in_place(graph, &mut out, e0, e1)?;
    Ok(out)
}

/// Shifts along the whole chain in place. On failure at pair `i`, the
/// already-applied prefix is rolled back (pair shifts are exactly
/// reversible), so the coloring is left untouched.
pub fn shift_chain_in_place(
    graph: &Graph,
    phi: &mut PartialColoring,
    chain: &Chain,
) -> Result<(), ShiftError> {
    let edges = chain.edges();
    for i in 0..edges.len().saturating_sub(1) {
        if let Err(e) = shift_pair_in_place(graph, phi, edges[i], edges[i + 1]) {
            for k in (0..i).rev() {
                shift_pair_in_place(graph, phi, edges[k + 1], edges[k])
                    .expect("rollback of an applied shift cannot fail");
            }
            return Err(match e {
                ShiftError::NotShiftable {
                    e0, e1, reason, ..
                } => ShiftError::NotShiftable {
                    e0,
                    e1,
                    pos: i,
                    reason,
                },
                other => other,
            });
        }
    }
    Ok(())
}

/// Functional form: Shift(φ, C).
pub fn shift_chain(
    graph: &Graph,
    phi: &PartialColoring,
    chain: &Chain,
) -> Result<PartialColoring, ShiftError> {
    let mut out = phi.clone();
    shift_chain_in_place(graph, &mut out, chain)?;
    Ok(out)
}

/// Whether `chain` is φ-shiftable. Probes by shifting on the coloring and
/// reverting, so `phi` is unchanged on return.
pub fn is_chain_shiftable(graph: &Graph, phi: &mut PartialColoring, chain: &Chain) -> bool {
    match shift_chain_in_place(graph, phi, chain) {
        Ok(()) => {
            shift_chain_in_place(graph, phi, &chain.reverse())
                .expect("reverse of an applied shift is shiftable");
            true
        }
        Err(_) => false,
    }
}

/// Whether `chain` is φ-happy: shiftable, with End(C) happy after the shift.
pub fn is_chain_happy(graph: &Graph, phi: &mut PartialColoring, chain: &Chain) -> bool {
    match shift_chain_in_place(graph, phi, chain) {
        Ok(()) => {
            let happy = phi
                .is_happy(graph, chain.end())
                .expect("End(C) is blank after a chain shift");
            shift_chain_in_place(graph, phi, &chain.reverse())
                .expect("reverse of an applied shift is shiftable");
            happy
        }
        Err(_) => false,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("edge {edge} is colored; alternating paths start at a blank edge")]
    EdgeColored { edge: EdgeId },
    #[error("edge {edge} is happy; no alternating path is needed")]
    EdgeHappy { edge: EdgeId },
    #[error("edge {edge} is not hopeful for ({alpha}, {beta}): deg({vertex}) = 2")]
    NotHopeful {
        edge: EdgeId,
        alpha: Color,
        beta: Color,
        vertex: Vertex,
    },
    #[error(transparent)]
    Colors(#[from] ColoringError),
}

/// P(x, y, φ, αβ): the blank edge xy followed by the αβ-alternating path
/// G(y, φ, αβ) traversed from y.
///
/// Requires xy blank, not φ-happy, and (φ, αβ)-hopeful. When xy is in fact
/// (φ, αβ)-successful, the result is a path-chain and is φ-happy.
pub fn alternating_path(
    graph: &Graph,
    phi: &PartialColoring,
    x: Vertex,
    y: Vertex,
    alpha: Color,
    beta: Color,
) -> Result<Chain, PathError> {
    let e = graph
        .neighbors(x)
        .iter()
        .find(|&&(w, _)| w == y)
        .map(|&(_, e)| e)
        .expect("xy must be an edge");
    if !phi.is_blank(e) {
        return Err(PathError::EdgeColored { edge: e });
    }
    // Surfaces equal/out-of-palette color errors before the happiness check.
    phi.two_color_component(graph, x, alpha, beta)?;
    if phi.is_happy(graph, e).expect("checked blank") {
        return Err(PathError::EdgeHappy { edge: e });
    }
    for v in [x, y] {
        if phi.two_color_degree(v, alpha, beta) == 2 {
            return Err(PathError::NotHopeful {
                edge: e,
                alpha,
                beta,
                vertex: v,
            });
        }
    }
    let (chain, _) = alternating_path_raw(graph, phi, e, y, alpha, beta);
    debug_assert!(chain.len() >= 2, "k >= 1 for a hopeful non-happy edge");
    Ok(chain)
}

/// Unchecked path builder used by the multi-step machinery: tolerates the
/// degenerate case where the walk from `y` is empty (the edge itself is
/// happy), returning the length-1 chain. Also returns the vertex sequence
/// x, y, u(2), ..., which is a path whenever the edge was successful.
pub(crate) fn alternating_path_raw(
    graph: &Graph,
    phi: &PartialColoring,
    e: EdgeId,
    y: Vertex,
    alpha: Color,
    beta: Color,
) -> (Chain, Vec<Vertex>) {
    let x = graph.other_endpoint(e, y);
    let (walk_edges, walk_verts) = phi.alternating_walk_from(graph, y, alpha, beta);
    let mut edges = vec![e];
    edges.extend(walk_edges);
    let mut vertices = vec![x, y];
    vertices.extend(walk_verts);
    (Chain::from_edges_unchecked(edges), vertices)
}

/// Augments φ along a φ-happy chain: shifts the chain, then assigns the
/// smallest common missing color to End(C). Grows the domain by exactly one
/// edge; rolls everything back and errors if the chain turns out unhappy.
pub fn augment_with_happy_chain(
    graph: &Graph,
    phi: &mut PartialColoring,
    chain: &Chain,
) -> Result<Color, AugmentError> {
    shift_chain_in_place(graph, phi, chain)?;
    let e = chain.end();
    let (x, y) = graph.endpoints(e);
    match phi.smallest_common_missing(x, y) {
        Some(c) => {
            phi.set(graph, e, c).expect("common missing color is proper");
            Ok(c)
        }
        None => {
            shift_chain_in_place(graph, phi, &chain.reverse())
                .expect("reverse of an applied shift is shiftable");
            Err(AugmentError::NotHappy { edge: e })
        }
    }
}
