//! Graphs with an axial function and a connection, their validation, and
//! polarizations.

mod connection;
mod polarization;
mod subgraph;
mod validate;

use std::collections::HashMap;

use thiserror::Error;

use crate::symbolic::{LinearForm, Rational, SymbolicError};

pub use connection::{connection_candidates, derive_connection, ConnectionCandidates};
pub use polarization::{betti, check_generic, find_generic_xi, longest_path_morse, orient, Polarization};
pub use subgraph::totally_geodesic_subgraph;
pub use validate::{validate, ConnectionConstant, Issue, ValidationReport};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An oriented edge. Every edge is stored together with its reversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: LinearForm,
    pub reverse: EdgeId,
}

/// How weights are printed by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DisplayBasis {
    /// Coordinates `x1..xn`.
    #[default]
    Coordinates,
    /// Simple roots `a_i = x_(i+1) - x_i` of the root hyperplane.
    SimpleRoots,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkmError {
    #[error("xi has dimension {found}, graph has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("xi is not a polarization: weight of edge {edge} vanishes on it")]
    NotPolarizing { edge: String },
    #[error("ascending edges contain a cycle through vertex {vertex}")]
    AscendingCycle { vertex: String },
    #[error("connected component has several index-0 vertices: {first} and {second}")]
    MultipleMinima { first: String, second: String },
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("no edge {0}")]
    UnknownEdge(String),
    #[error("graph fails validation:\n{0}")]
    Invalid(String),
    #[error("graph has no connection")]
    MissingConnection,
    #[error("no compatible connection along edge {edge}")]
    NoConnection { edge: String },
    #[error("connection is not determined by the weights:\n{0}")]
    AmbiguousConnection(String),
    #[error("no generic polarization with entries of absolute value at most {max_norm}")]
    NoGenericXi { max_norm: i64 },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// A finite regular graph with an axial function and, usually, a connection.
#[derive(Clone, Debug)]
pub struct GkmGraph {
    dimension: usize,
    valence: usize,
    names: Vec<String>,
    aliases: Vec<Option<String>>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    /// `connection[e][k]` is the image under `theta_e` of the `k`-th edge out
    /// of the source of `e`.
    connection: Option<Vec<Vec<EdgeId>>>,
    default_xi: Option<Vec<Rational>>,
    display: DisplayBasis,
}

impl GkmGraph {
    /// Assembles a graph from fully oriented edges (each paired with its
    /// reversal). No axioms are checked here; see [`validate`].
    pub fn from_parts(
        dimension: usize,
        valence: usize,
        names: Vec<String>,
        edges: Vec<Edge>,
        connection: Option<Vec<Vec<EdgeId>>>,
    ) -> Self {
        let mut out = vec![Vec::new(); names.len()];
        for (id, e) in edges.iter().enumerate() {
            out[e.source].push(id);
        }
        let aliases = vec![None; names.len()];
        Self {
            dimension,
            valence,
            names,
            aliases,
            edges,
            out,
            connection,
            default_xi: None,
            display: DisplayBasis::Coordinates,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Display label: the alias if one is set, otherwise the name.
    pub fn label(&self, v: VertexId) -> &str {
        self.aliases[v].as_deref().unwrap_or(&self.names[v])
    }

    pub fn set_aliases(&mut self, aliases: Vec<Option<String>>) {
        assert_eq!(aliases.len(), self.names.len(), "one alias slot per vertex");
        self.aliases = aliases;
    }

    /// Looks a vertex up by name or alias.
    pub fn vertex(&self, key: &str) -> Result<VertexId, GkmError> {
        self.names
            .iter()
            .position(|n| n == key)
            .or_else(|| self.aliases.iter().position(|a| a.as_deref() == Some(key)))
            .ok_or_else(|| GkmError::UnknownVertex(key.to_string()))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, e: EdgeId) -> &LinearForm {
        &self.edges[e].weight
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e].source
    }

    pub fn target(&self, e: EdgeId) -> VertexId {
        self.edges[e].target
    }

    pub fn reverse(&self, e: EdgeId) -> EdgeId {
        self.edges[e].reverse
    }

    /// Edges leaving `v`, in a fixed order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    /// The first edge from `u` to `v`.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.out[u].iter().copied().find(|&e| self.edges[e].target == v)
    }

    pub fn edge_label(&self, e: EdgeId) -> String {
        let edge = &self.edges[e];
        format!("{}->{}", self.label(edge.source), self.label(edge.target))
    }

    pub fn has_connection(&self) -> bool {
        self.connection.is_some()
    }

    pub fn connection_table(&self) -> Option<&[Vec<EdgeId>]> {
        self.connection.as_deref()
    }

    /// `theta_e(e2)` for `e2` leaving the source of `e`.
    pub fn theta(&self, e: EdgeId, e2: EdgeId) -> Result<EdgeId, GkmError> {
        let table = self.connection.as_ref().ok_or(GkmError::MissingConnection)?;
        let k = self.out[self.source(e)]
            .iter()
            .position(|&x| x == e2)
            .ok_or_else(|| GkmError::UnknownEdge(self.edge_label(e2)))?;
        table[e].get(k).copied().ok_or_else(|| GkmError::UnknownEdge(self.edge_label(e2)))
    }

    pub fn set_connection(&mut self, table: Vec<Vec<EdgeId>>) {
        self.connection = Some(table);
    }

    pub fn default_xi(&self) -> Option<&[Rational]> {
        self.default_xi.as_deref()
    }

    pub fn set_default_xi(&mut self, xi: Option<Vec<Rational>>) {
        self.default_xi = xi;
    }

    pub fn display_basis(&self) -> DisplayBasis {
        self.display
    }

    pub fn set_display_basis(&mut self, basis: DisplayBasis) {
        self.display = basis;
    }

    /// A copy with the weight of a single oriented edge replaced; its
    /// reversal keeps the old weight. Used to exercise the validator.
    pub fn with_weight(&self, e: EdgeId, weight: LinearForm) -> Self {
        let mut g = self.clone();
        g.edges[e].weight = weight;
        g
    }

    /// Product of the weights of `edges`, as a list of factors.
    pub fn weights_of<'a>(&'a self, edges: &'a [EdgeId]) -> impl Iterator<Item = &'a LinearForm> + 'a {
        edges.iter().map(move |&e| &self.edges[e].weight)
    }

    /// Connected components, as a component index per vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_vertices()];
        let mut next = 0;
        for start in self.vertices() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &e in &self.out[v] {
                    let w = self.edges[e].target;
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

/// Incremental construction from unoriented edges.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    dimension: usize,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new(dimension: usize) -> Self {
        Self { dimension, names: Vec::new(), index: HashMap::new(), edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if let Some(&v) = self.index.get(&name) {
            return v;
        }
        let v = self.names.len();
        self.index.insert(name.clone(), v);
        self.names.push(name);
        v
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Adds `u -> v` with the given weight and `v -> u` with its negative.
    /// Returns the id of `u -> v`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: LinearForm) -> EdgeId {
        let id = self.edges.len();
        let neg = -&weight;
        self.edges.push(Edge { source: u, target: v, weight, reverse: id + 1 });
        self.edges.push(Edge { source: v, target: u, weight: neg, reverse: id });
        id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    /// The graph without a connection; valence is the out-degree of the
    /// first vertex (zero for an empty graph).
    pub fn build(self) -> GkmGraph {
        let mut degree = vec![0usize; self.names.len()];
        for e in &self.edges {
            degree[e.source] += 1;
        }
        let valence = degree.first().copied().unwrap_or(0);
        GkmGraph::from_parts(self.dimension, valence, self.names, self.edges, None)
    }

    pub fn build_with_valence(self, valence: usize) -> GkmGraph {
        GkmGraph::from_parts(self.dimension, valence, self.names, self.edges, None)
    }
}
