//! Graphs with mixed directed/undirected edges and their Laplacian Hamiltonians.
//!
//! Vertices are labelled `1..=n` in every external representation (text
//! files, printed output) and `0..n` internally.
//!
//! The Hamiltonian convention is fixed: `H = D_in - A`, where
//! `A[i][j] = 1` iff there is an edge `i -> j` and `D_in[j][j]` is the
//! in-degree of `j` (the column sum of `A`). Every column of `H` therefore
//! sums to zero, which is what makes the classical Kolmogorov evolution
//! `e^{-Ht}` probability preserving.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `vertices <n>` header")]
    MissingHeader,
    #[error("vertex count must be positive")]
    NoVertices,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate or conflicting edge {u} {kind} {v}")]
    DuplicateEdge { u: usize, v: usize, kind: EdgeKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Undirected,
    /// From `u` to `v` only.
    Directed,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Undirected => "--",
            EdgeKind::Directed => "->",
        })
    }
}

/// An edge between 1-based vertex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn undirected(u: usize, v: usize) -> Self {
        Edge { u, v, kind: EdgeKind::Undirected }
    }

    pub fn directed(u: usize, v: usize) -> Self {
        Edge { u, v, kind: EdgeKind::Directed }
    }
}

/// A validated simple graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range labels and
    /// duplicate or conflicting edges.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        // Ordered pairs already claimed. An undirected edge claims both.
        let mut claimed: HashSet<(usize, usize)> = HashSet::new();
        for e in &edges {
            for w in [e.u, e.v] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            let dup = || GraphError::DuplicateEdge { u: e.u, v: e.v, kind: e.kind };
            match e.kind {
                EdgeKind::Directed => {
                    if !claimed.insert((e.u, e.v)) {
                        return Err(dup());
                    }
                }
                EdgeKind::Undirected => {
                    if claimed.contains(&(e.u, e.v)) || claimed.contains(&(e.v, e.u)) {
                        return Err(dup());
                    }
                    claimed.insert((e.u, e.v));
                    claimed.insert((e.v, e.u));
                }
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// True when no edge is directed, i.e. the Laplacian is symmetric.
    pub fn is_undirected(&self) -> bool {
        self.edges.iter().all(|e| e.kind == EdgeKind::Undirected)
    }

    /// `A[i][j] = 1` iff there is an edge from `i` to `j`; undirected edges
    /// contribute both orientations.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            let (i, j) = (e.u - 1, e.v - 1);
            a[(i, j)] = 1.0;
            if e.kind == EdgeKind::Undirected {
                a[(j, i)] = 1.0;
            }
        }
        a
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.v - 1] += 1;
            if e.kind == EdgeKind::Undirected {
                deg[e.u - 1] += 1;
            }
        }
        deg
    }

    pub fn laplacian_hamiltonian(&self) -> Hamiltonian {
        let mut h = -self.adjacency_matrix();
        for (j, d) in self.in_degrees().into_iter().enumerate() {
            h[(j, j)] = d as f64;
        }
        Hamiltonian { matrix: h, convention: LaplacianConvention::InDegreeMinusAdjacency }
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

/// Serializes in the same line format accepted by [`parse_graph`].
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.n)?;
        for e in &self.edges {
            writeln!(f, "{} {} {}", e.u, e.kind, e.v)?;
        }
        Ok(())
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertices 3
/// 1 -- 2
/// 1 -- 3
/// 2 -> 3
/// ```
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |msg: &str| GraphError::Malformed { line: line_no, msg: msg.to_string() };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if tokens.len() != 2 || tokens[0] != "vertices" {
                    return Err(GraphError::MissingHeader);
                }
                let count: usize =
                    tokens[1].parse().map_err(|_| malformed("invalid vertex count"))?;
                n = Some(count);
            }
            Some(_) => {
                if tokens.len() != 3 {
                    return Err(malformed("expected `u -- v` or `u -> v`"));
                }
                let kind = match tokens[1] {
                    "--" => EdgeKind::Undirected,
                    "->" => EdgeKind::Directed,
                    _ => return Err(malformed("unknown edge operator")),
                };
                let u = tokens[0].parse().map_err(|_| malformed("invalid vertex label"))?;
                let v = tokens[2].parse().map_err(|_| malformed("invalid vertex label"))?;
                edges.push(Edge { u, v, kind });
            }
        }
    }
    Graph::new(n.ok_or(GraphError::MissingHeader)?, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianConvention {
    /// `H = D_in - A` with `A[i][j] = 1` iff edge `i -> j`.
    InDegreeMinusAdjacency,
}

/// Dense real graph Hamiltonian plus the convention it was built under.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
    convention: LaplacianConvention,
}

impl Hamiltonian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn convention(&self) -> LaplacianConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

impl AsRef<DMatrix<f64>> for Hamiltonian {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}
