//! Simple undirected graphs with dense integer identifiers.
//!
//! Vertices are `0..n`, edge ids are positions in input order. The graph is
//! immutable after construction and safe to share across threads.

use std::fmt;

use thiserror::Error;

/// Dense 0-based vertex identifier.
pub type Vertex = usize;
/// Dense 0-based edge identifier (index in input order).
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected two vertex indices, got {got:?}")]
    Malformed { line: usize, got: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
}

/// Immutable simple undirected graph.
#[derive(Clone)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<(Vertex, EdgeId)>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from explicit edges over vertices `0..vertex_count`.
    ///
    /// Rejects self-loops and duplicate edges; line numbers in errors are
    /// 1-based edge positions.
    pub fn new(vertex_count: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            let line = i + 1;
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            let key = (u.min(v), u.max(v));
            assert!(key.1 < vertex_count, "edge ({u}, {v}) out of range");
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
            normalized.push((u, v));
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            vertex_count,
            edges: normalized,
            adjacency,
            max_degree,
        })
    }

    /// Parses the edge-list text format: one `u v` pair per line, ASCII
    /// decimal, `#`-prefixed comment lines and blank lines ignored. Vertices
    /// are implicitly `0..=max_index`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut lines = Vec::new();
        let mut max_vertex = None::<usize>;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse_one = |tok: Option<&str>| -> Option<usize> { tok?.parse().ok() };
            let (u, v) = match (parse_one(it.next()), parse_one(it.next()), it.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(GraphError::Malformed {
                        line: lineno + 1,
                        got: line.to_string(),
                    })
                }
            };
            max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v));
            lines.push(lineno + 1);
        }
        let n = max_vertex.map_or(0, |m| m + 1);
        Self::new(n, edges).map_err(|e| match e {
            // Rewrite positional errors to the source line numbers.
            GraphError::SelfLoop { line, vertex } => GraphError::SelfLoop {
                line: lines[line - 1],
                vertex,
            },
            GraphError::DuplicateEdge { line, u, v } => GraphError::DuplicateEdge {
                line: lines[line - 1],
                u,
                v,
            },
            other => other,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Palette size Δ+1 used by every coloring of this graph.
    pub fn palette(&self) -> usize {
        self.max_degree + 1
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_endpoint(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        debug_assert!(v == a || v == b);
        if v == a {
            b
        } else {
            a
        }
    }

    pub fn is_endpoint(&self, e: EdgeId, v: Vertex) -> bool {
        let (a, b) = self.edges[e];
        v == a || v == b
    }

    /// The shared endpoint of two adjacent edges, if any.
    pub fn shared_endpoint(&self, e: EdgeId, h: EdgeId) -> Option<Vertex> {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[h];
        if e == h {
            return None;
        }
        if a == c || a == d {
            Some(a)
        } else if b == c || b == d {
            Some(b)
        } else {
            None
        }
    }

    /// Neighbors of `v` as `(neighbor, edge id)` pairs in input order.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count)
            .field("m", &self.edges.len())
            .field("delta", &self.max_degree)
            .finish()
    }
}
