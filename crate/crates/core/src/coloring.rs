//! Proper partial edge-colorings over the palette `[Δ+1]` and the two-color
//! subgraph machinery built on them.
//!
//! Colors are 1-based; a blank edge is represented by `None`. The coloring
//! keeps a per-(vertex, color) slot table so that "which edge of color c at
//! x" and missing-color queries are O(1) and O(Δ) respectively.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Vertex};

/// Palette color, `1..=Δ+1`. Blank edges carry `None` rather than color 0.
pub type Color = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("edge {edge} is already colored")]
    AlreadyColored { edge: EdgeId },
    #[error("edge {edge} is blank")]
    Blank { edge: EdgeId },
    #[error("color {color} outside palette 1..={palette}")]
    OutOfPalette { color: Color, palette: usize },
    #[error("color {color} clashes at vertex {vertex} (edge {existing})")]
    Clash {
        color: Color,
        vertex: Vertex,
        existing: EdgeId,
    },
    #[error("identical colors in a two-color query: {0}")]
    EqualColors(Color),
}

/// A proper partial (Δ+1)-edge-coloring.
///
/// Single-writer: mutation happens through `set`/`unset` (and the shift
/// operations built on them), which keep the slot table consistent and
/// refuse improper assignments. Reads may be shared freely between
/// mutations.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialColoring {
    assignment: Vec<Option<Color>>,
    // slots[x * palette + (c - 1)] = edge of color c at x, if any
    slots: Vec<Option<EdgeId>>,
    palette: usize,
    vertex_count: usize,
    colored: usize,
}

impl PartialColoring {
    /// The all-blank coloring of `graph`.
    pub fn new(graph: &Graph) -> Self {
        let palette = graph.palette();
        Self {
            assignment: vec![None; graph.edge_count()],
            slots: vec![None; graph.vertex_count() * palette],
            palette,
            vertex_count: graph.vertex_count(),
            colored: 0,
        }
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn colored_count(&self) -> usize {
        self.colored
    }

    pub fn edge_count(&self) -> usize {
        self.assignment.len()
    }

    /// True once every edge is colored.
    pub fn is_total(&self) -> bool {
        self.colored == self.assignment.len()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.assignment[e]
    }

    pub fn is_blank(&self, e: EdgeId) -> bool {
        self.assignment[e].is_none()
    }

    pub fn assignment(&self) -> &[Option<Color>] {
        &self.assignment
    }

    #[inline]
    fn slot(&self, x: Vertex, c: Color) -> Option<EdgeId> {
        self.slots[x * self.palette + (c - 1)]
    }

    #[inline]
    fn slot_mut(&mut self, x: Vertex, c: Color) -> &mut Option<EdgeId> {
        &mut self.slots[x * self.palette + (c - 1)]
    }

    /// The edge of color `c` incident to `x`, if any.
    pub fn colored_edge_at(&self, x: Vertex, c: Color) -> Option<EdgeId> {
        self.slot(x, c)
    }

    /// True iff color `c` is missing at `x`.
    pub fn is_missing(&self, x: Vertex, c: Color) -> bool {
        self.slot(x, c).is_none()
    }

    /// M(φ, x): palette colors not present on any colored edge at `x`.
    /// Never empty for a vertex of a graph with palette Δ+1.
    pub fn missing_colors(&self, x: Vertex) -> Vec<Color> {
        (1..=self.palette).filter(|&c| self.is_missing(x, c)).collect()
    }

    /// Smallest color missing at `x`.
    pub fn smallest_missing(&self, x: Vertex) -> Color {
        (1..=self.palette)
            .find(|&c| self.is_missing(x, c))
            .expect("missing-color set is never empty")
    }

    /// Smallest color missing at both `x` and `y`, if any.
    pub fn smallest_common_missing(&self, x: Vertex, y: Vertex) -> Option<Color> {
        (1..=self.palette).find(|&c| self.is_missing(x, c) && self.is_missing(y, c))
    }

    /// Whether the blank edge `e = xy` is happy: M(φ,x) ∩ M(φ,y) ≠ ∅.
    pub fn is_happy(&self, graph: &Graph, e: EdgeId) -> Result<bool, ColoringError> {
        if !self.is_blank(e) {
            return Err(ColoringError::AlreadyColored { edge: e });
        }
        let (x, y) = graph.endpoints(e);
        Ok(self.smallest_common_missing(x, y).is_some())
    }

    /// Assigns color `c` to the blank edge `e`, refusing improper results.
    pub fn set(&mut self, graph: &Graph, e: EdgeId, c: Color) -> Result<(), ColoringError> {
        if c == 0 || c > self.palette {
            return Err(ColoringError::OutOfPalette {
                color: c,
                palette: self.palette,
            });
        }
        if !self.is_blank(e) {
            return Err(ColoringError::AlreadyColored { edge: e });
        }
        let (x, y) = graph.endpoints(e);
        for v in [x, y] {
            if let Some(existing) = self.slot(v, c) {
                return Err(ColoringError::Clash {
                    color: c,
                    vertex: v,
                    existing,
                });
            }
        }
        self.assignment[e] = Some(c);
        *self.slot_mut(x, c) = Some(e);
        *self.slot_mut(y, c) = Some(e);
        self.colored += 1;
        Ok(())
    }

    /// Removes the color of `e`, returning it.
    pub fn unset(&mut self, graph: &Graph, e: EdgeId) -> Result<Color, ColoringError> {
        let c = self.assignment[e].ok_or(ColoringError::Blank { edge: e })?;
        let (x, y) = graph.endpoints(e);
        self.assignment[e] = None;
        *self.slot_mut(x, c) = None;
        *self.slot_mut(y, c) = None;
        self.colored -= 1;
        Ok(c)
    }

    /// Full-scan properness verdict, independent of the slot table.
    pub fn is_proper(&self, graph: &Graph) -> bool {
        for v in graph.vertices() {
            let mut seen = vec![false; self.palette + 1];
            for &(_, e) in graph.neighbors(v) {
                if let Some(c) = self.assignment[e] {
                    if c > self.palette || seen[c] {
                        return false;
                    }
                    seen[c] = true;
                }
            }
        }
        true
    }

    /// Recomputes the slot table from the assignment and compares. Test aid
    /// for the incremental bookkeeping.
    pub fn slots_consistent(&self, graph: &Graph) -> bool {
        let mut fresh = vec![None; self.vertex_count * self.palette];
        let mut colored = 0;
        for e in graph.edge_ids() {
            if let Some(c) = self.assignment[e] {
                colored += 1;
                let (x, y) = graph.endpoints(e);
                fresh[x * self.palette + (c - 1)] = Some(e);
                fresh[y * self.palette + (c - 1)] = Some(e);
            }
        }
        fresh == self.slots && colored == self.colored
    }

    /// deg(x, φ, αβ): number of edges at `x` colored α or β (0, 1, or 2).
    pub fn two_color_degree(&self, x: Vertex, alpha: Color, beta: Color) -> u8 {
        debug_assert_ne!(alpha, beta);
        self.slot(x, alpha).is_some() as u8 + self.slot(x, beta).is_some() as u8
    }

    fn check_pair(&self, alpha: Color, beta: Color) -> Result<(), ColoringError> {
        if alpha == beta {
            return Err(ColoringError::EqualColors(alpha));
        }
        for c in [alpha, beta] {
            if c == 0 || c > self.palette {
                return Err(ColoringError::OutOfPalette {
                    color: c,
                    palette: self.palette,
                });
            }
        }
        Ok(())
    }

    /// Walks the αβ-colored path away from `at`, starting along `first`.
    /// Returns the traversed edges and the vertices after `at`; stops at a
    /// dead end or upon returning to `stop` (cycle closure).
    fn walk_two_colored(
        &self,
        graph: &Graph,
        at: Vertex,
        first: EdgeId,
        alpha: Color,
        beta: Color,
        stop: Vertex,
    ) -> (Vec<EdgeId>, Vec<Vertex>, bool) {
        let mut edges = vec![first];
        let mut verts = Vec::new();
        let mut prev = first;
        let mut cur = graph.other_endpoint(first, at);
        let cap = graph.vertex_count() + 1;
        loop {
            verts.push(cur);
            if cur == stop {
                return (edges, verts, true);
            }
            let next = [self.slot(cur, alpha), self.slot(cur, beta)]
                .into_iter()
                .flatten()
                .find(|&e| e != prev);
            match next {
                Some(e) => {
                    edges.push(e);
                    cur = graph.other_endpoint(e, cur);
                    prev = e;
                }
                None => return (edges, verts, false),
            }
            assert!(
                edges.len() <= cap,
                "two-color walk exceeded vertex count; coloring state corrupt"
            );
        }
    }

    /// The connected component of `x` in the spanning subgraph of edges
    /// colored α or β, classified as a path or a cycle, plus deg(x, φ, αβ).
    pub fn two_color_component(
        &self,
        graph: &Graph,
        x: Vertex,
        alpha: Color,
        beta: Color,
    ) -> Result<(TwoColorComponent, u8), ColoringError> {
        self.check_pair(alpha, beta)?;
        let incident: Vec<EdgeId> = [self.slot(x, alpha), self.slot(x, beta)]
            .into_iter()
            .flatten()
            .collect();
        let deg = incident.len() as u8;
        let component = match incident.as_slice() {
            [] => TwoColorComponent::Path {
                vertices: vec![x],
                edges: vec![],
            },
            [e] => {
                let (edges, mut verts, _) = self.walk_two_colored(graph, x, *e, alpha, beta, x);
                let mut vertices = vec![x];
                vertices.append(&mut verts);
                TwoColorComponent::Path { vertices, edges }
            }
            [e1, e2] => {
                let (mut edges, mut verts, closed) =
                    self.walk_two_colored(graph, x, *e1, alpha, beta, x);
                if closed {
                    let mut vertices = vec![x];
                    verts.pop();
                    vertices.append(&mut verts);
                    TwoColorComponent::Cycle { vertices, edges }
                } else {
                    // x is interior to a path: stitch the other direction on.
                    let (edges2, verts2, _) = self.walk_two_colored(graph, x, *e2, alpha, beta, x);
                    edges.reverse();
                    let mut vertices: Vec<Vertex> = verts.into_iter().rev().collect();
                    vertices.push(x);
                    vertices.extend(verts2);
                    let mut all = edges;
                    all.extend(edges2);
                    TwoColorComponent::Path {
                        vertices,
                        edges: all,
                    }
                }
            }
            _ => unreachable!(),
        };
        Ok((component, deg))
    }

    /// Whether `x` and `y` lie in the same component of G(φ, αβ).
    pub fn are_related(
        &self,
        graph: &Graph,
        x: Vertex,
        y: Vertex,
        alpha: Color,
        beta: Color,
    ) -> Result<bool, ColoringError> {
        self.check_pair(alpha, beta)?;
        if x == y {
            return Ok(true);
        }
        let incident: Vec<EdgeId> = [self.slot(x, alpha), self.slot(x, beta)]
            .into_iter()
            .flatten()
            .collect();
        for e in incident {
            let (_, verts, _) = self.walk_two_colored(graph, x, e, alpha, beta, x);
            if verts.contains(&y) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Edge sequence of the path G(y, φ, αβ) traversed starting from `y`.
    /// Requires deg(y, φ, αβ) < 2 so that the component is a path with `y`
    /// as an endpoint. Returns the edges and the vertices after `y`.
    pub(crate) fn alternating_walk_from(
        &self,
        graph: &Graph,
        y: Vertex,
        alpha: Color,
        beta: Color,
    ) -> (Vec<EdgeId>, Vec<Vertex>) {
        debug_assert!(self.two_color_degree(y, alpha, beta) < 2);
        match [self.slot(y, alpha), self.slot(y, beta)]
            .into_iter()
            .flatten()
            .next()
        {
            Some(e) => {
                let (edges, verts, closed) = self.walk_two_colored(graph, y, e, alpha, beta, y);
                debug_assert!(!closed);
                (edges, verts)
            }
            None => (vec![], vec![]),
        }
    }
}

impl std::fmt::Debug for PartialColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartialColoring")
            .field("palette", &self.palette)
            .field("colored", &self.colored)
            .field("edges", &self.assignment.len())
            .finish()
    }
}

/// A component of the two-colored spanning subgraph G(φ, αβ).
///
/// Since φ is proper, every component is a path (possibly a single vertex)
/// or a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TwoColorComponent {
    Path {
        vertices: Vec<Vertex>,
        edges: Vec<EdgeId>,
    },
    Cycle {
        vertices: Vec<Vertex>,
        edges: Vec<EdgeId>,
    },
}

impl TwoColorComponent {
    pub fn vertices(&self) -> &[Vertex] {
        match self {
            TwoColorComponent::Path { vertices, .. } => vertices,
            TwoColorComponent::Cycle { vertices, .. } => vertices,
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            TwoColorComponent::Path { edges, .. } => edges,
            TwoColorComponent::Cycle { edges, .. } => edges,
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, TwoColorComponent::Cycle { .. })
    }
}
