//! The complete graph, the permutahedron, and graphs read from files.

mod format;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::gkm::{DisplayBasis, EdgeId, GkmError, GkmGraph, GraphBuilder};
use crate::symbolic::{rational, LinearForm, Rational, SymbolicError};

pub use format::{load_graph, parse_graph, parse_graph_unvalidated, save_graph, to_json};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("invalid graph source '{0}': expected complete:N, permutahedron:N or a file path")]
    Spec(String),
    #[error("{kind} needs n >= {min}, got {n}")]
    Parameter { kind: &'static str, min: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GkmError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// The complete graph on `p1..pn` with weight `x_i - x_j` on `p_i -> p_j`.
/// Along `p_i -> p_j` the connection sends `p_i p_k` to `p_j p_k`.
pub fn complete_graph(n: usize) -> Result<GkmGraph, BuildError> {
    if n < 1 {
        return Err(BuildError::Parameter { kind: "complete graph", min: 1, n });
    }
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        b.add_vertex(format!("p{}", i + 1));
    }
    let mut edge_of: HashMap<(usize, usize), EdgeId> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = &LinearForm::coordinate(n, i) - &LinearForm::coordinate(n, j);
            let e = b.add_edge(i, j, w);
            edge_of.insert((i, j), e);
            edge_of.insert((j, i), e + 1);
        }
    }
    let mut g = b.build_with_valence(n - 1);
    let table = (0..g.num_edges())
        .map(|e| {
            let (i, j) = (g.source(e), g.target(e));
            g.out_edges(i)
                .iter()
                .map(|&e2| {
                    let k = g.target(e2);
                    if k == j {
                        edge_of[&(j, i)]
                    } else {
                        edge_of[&(j, k)]
                    }
                })
                .collect()
        })
        .collect();
    g.set_connection(table);
    g.set_default_xi(Some((0..n).map(|i| rational((n - i) as i64)).collect()));
    Ok(g)
}

fn one_line(perm: &[usize]) -> String {
    let sep = if perm.len() > 9 { "," } else { "" };
    perm.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(sep)
}

/// Permutations of `0..n` in breadth-first order from the identity, moving
/// by right multiplication with the simple transpositions.
fn permutations_bfs(n: usize) -> Vec<Vec<usize>> {
    let start: Vec<usize> = (0..n).collect();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let current = order[head].clone();
        head += 1;
        for s in 0..n.saturating_sub(1) {
            let mut next = current.clone();
            next.swap(s, s + 1);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), order.len());
                order.push(next);
            }
        }
    }
    order
}

/// The Cayley graph of `S_n` for all transpositions. The edge `pi -> pi t_ij`
/// (positions `i < j`) has weight `e_j - e_i` when `pi(j) > pi(i)` and the
/// negative otherwise; along it, the connection sends `pi -> pi t'` to
/// `pi t -> pi t' t`.
pub fn permutahedron(n: usize) -> Result<GkmGraph, BuildError> {
    if n < 2 {
        return Err(BuildError::Parameter { kind: "permutahedron", min: 2, n });
    }
    let perms = permutations_bfs(n);
    let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut b = GraphBuilder::new(n);
    for p in &perms {
        b.add_vertex(one_line(p));
    }
    // edge_of[(vertex, pair)] = oriented edge leaving the vertex by that transposition
    let mut edge_of: HashMap<(usize, (usize, usize)), EdgeId> = HashMap::new();
    for (v, p) in perms.iter().enumerate() {
        for &(i, j) in &pairs {
            let mut q = p.clone();
            q.swap(i, j);
            let w = index[&q];
            if v < w {
                let weight = if p[j] > p[i] {
                    &LinearForm::coordinate(n, j) - &LinearForm::coordinate(n, i)
                } else {
                    &LinearForm::coordinate(n, i) - &LinearForm::coordinate(n, j)
                };
                let e = b.add_edge(v, w, weight);
                edge_of.insert((v, (i, j)), e);
                edge_of.insert((w, (i, j)), e + 1);
            }
        }
    }
    let mut g = b.build_with_valence(pairs.len());
    let pair_of: HashMap<EdgeId, (usize, usize)> = edge_of.iter().map(|(&(_, t), &e)| (e, t)).collect();
    let conjugate = |t: (usize, usize), by: (usize, usize)| {
        let swap = |x: usize| {
            if x == by.0 {
                by.1
            } else if x == by.1 {
                by.0
            } else {
                x
            }
        };
        let (a, c) = (swap(t.0), swap(t.1));
        (a.min(c), a.max(c))
    };
    let table = (0..g.num_edges())
        .map(|e| {
            let t = pair_of[&e];
            let q = g.target(e);
            g.out_edges(g.source(e)).iter().map(|&e2| edge_of[&(q, conjugate(pair_of[&e2], t))]).collect()
        })
        .collect();
    g.set_connection(table);
    g.set_default_xi(Some((1..=n).map(|i| rational(i as i64)).collect()));
    g.set_display_basis(DisplayBasis::SimpleRoots);
    if n == 3 {
        let aliases = perms
            .iter()
            .map(|p| {
                let alias = match one_line(p).as_str() {
                    "123" => "1",
                    "213" => "(12)",
                    "132" => "(23)",
                    "231" => "(231)",
                    "312" => "(312)",
                    "321" => "(13)",
                    _ => unreachable!("S_3 has six elements"),
                };
                Some(alias.to_string())
            })
            .collect();
        g.set_aliases(aliases);
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuilderKind {
    Complete(usize),
    Permutahedron(usize),
    File(PathBuf),
}

/// Where a graph comes from, with an optional polarization override.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuilderSpec {
    pub kind: BuilderKind,
    pub xi: Option<Vec<Rational>>,
}

impl BuilderSpec {
    pub fn build(&self) -> Result<GkmGraph, BuildError> {
        let mut g = match &self.kind {
            BuilderKind::Complete(n) => complete_graph(*n)?,
            BuilderKind::Permutahedron(n) => permutahedron(*n)?,
            BuilderKind::File(path) => load_graph(path)?,
        };
        if let Some(xi) = &self.xi {
            if xi.len() != g.dimension() {
                return Err(GkmError::DimensionMismatch { expected: g.dimension(), found: xi.len() }.into());
            }
            g.set_default_xi(Some(xi.clone()));
        }
        Ok(g)
    }

    pub fn file(path: impl AsRef<Path>) -> Self {
        Self { kind: BuilderKind::File(path.as_ref().to_path_buf()), xi: None }
    }
}

impl FromStr for BuilderSpec {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_n = |t: &str| t.trim().parse::<usize>().map_err(|_| BuildError::Spec(s.to_string()));
        let kind = if let Some(rest) = s.strip_prefix("complete:") {
            BuilderKind::Complete(parse_n(rest)?)
        } else if let Some(rest) = s.strip_prefix("permutahedron:") {
            BuilderKind::Permutahedron(parse_n(rest)?)
        } else if let Some(rest) = s.strip_prefix("file:") {
            BuilderKind::File(PathBuf::from(rest))
        } else if s.is_empty() {
            return Err(BuildError::Spec(s.to_string()));
        } else {
            BuilderKind::File(PathBuf::from(s))
        };
        Ok(Self { kind, xi: None })
    }
}

impl fmt::Display for BuilderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BuilderKind::Complete(n) => write!(f, "complete:{n}"),
            BuilderKind::Permutahedron(n) => write!(f, "permutahedron:{n}"),
            BuilderKind::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::validate;

    #[test]
    fn complete_graph_shape() {
        let g = complete_graph(2).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.weight(0), &LinearForm::from_ints(&[1, -1]));
        assert_eq!(g.weight(1), &LinearForm::from_ints(&[-1, 1]));
        for n in 1..=7 {
            let g = complete_graph(n).unwrap();
            assert!(validate(&g).is_ok(), "complete {n}: {}", validate(&g).render(&g));
        }
    }

    #[test]
    fn permutahedron_shape() {
        let g = permutahedron(3).unwrap();
        let names: Vec<&str> = g.vertices().map(|v| g.name(v)).collect();
        assert_eq!(names, ["123", "213", "132", "231", "312", "321"]);
        let labels: Vec<&str> = g.vertices().map(|v| g.label(v)).collect();
        assert_eq!(labels, ["1", "(12)", "(23)", "(231)", "(312)", "(13)"]);
        let e = g.find_edge(0, g.vertex("(13)").unwrap()).unwrap();
        assert_eq!(g.weight(e), &LinearForm::from_ints(&[-1, 0, 1]));
        for n in 2..=4 {
            let g = permutahedron(n).unwrap();
            assert_eq!(g.valence(), n * (n - 1) / 2);
            assert!(validate(&g).is_ok(), "permutahedron {n}: {}", validate(&g).render(&g));
        }
    }

    #[test]
    fn permutahedron_three_is_complete_bipartite() {
        let g = permutahedron(3).unwrap();
        let even = |v: usize| matches!(g.name(v), "123" | "231" | "312");
        for u in g.vertices() {
            for v in g.vertices() {
                assert_eq!(g.find_edge(u, v).is_some(), even(u) != even(v));
            }
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!("complete:5".parse::<BuilderSpec>().unwrap().kind, BuilderKind::Complete(5));
        assert_eq!("permutahedron:3".parse::<BuilderSpec>().unwrap().kind, BuilderKind::Permutahedron(3));
        assert_eq!("graphs/k4.json".parse::<BuilderSpec>().unwrap().kind, BuilderKind::File("graphs/k4.json".into()));
        assert!("complete:x".parse::<BuilderSpec>().is_err());
        assert!(matches!(permutahedron(1), Err(BuildError::Parameter { .. })));
        assert!(matches!(complete_graph(0), Err(BuildError::Parameter { .. })));
    }
}
