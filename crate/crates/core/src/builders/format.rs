use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BuildError;
use crate::gkm::{derive_connection, validate, Edge, EdgeId, GkmError, GkmGraph};
use crate::symbolic::{format_rational, parse_rational, LinearForm, Rational};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    weight: Vec<Number>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    dimension: usize,
    valence: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connection: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<Vec<Number>>,
}

fn field(field: impl Into<String>, message: impl Into<String>) -> BuildError {
    BuildError::Field { field: field.into(), message: message.into() }
}

fn number(n: &Number, at: &str) -> Result<Rational, BuildError> {
    match n {
        Number::Int(i) => Ok(Rational::from_integer((*i).into())),
        Number::Text(s) => parse_rational(s).map_err(|e| field(at, e.to_string())),
    }
}

fn numbers(list: &[Number], at: &str) -> Result<Vec<Rational>, BuildError> {
    list.iter().enumerate().map(|(k, n)| number(n, &format!("{at}[{k}]"))).collect()
}

/// Reads a graph document without checking the axioms. The connection is
/// derived from the weights when the document has none.
pub fn parse_graph_unvalidated(text: &str) -> Result<GkmGraph, BuildError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (v, name) in doc.vertices.iter().enumerate() {
        if index.insert(name.as_str(), v).is_some() {
            return Err(field(format!("vertices[{v}]"), format!("duplicate vertex '{name}'")));
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut by_ends: HashMap<(usize, usize), EdgeId> = HashMap::new();
    // explicitly listed reversals, consumed when the reversal is paired up
    let mut explicit: HashMap<EdgeId, bool> = HashMap::new();
    for (k, e) in doc.edges.iter().enumerate() {
        let at = format!("edges[{k}]");
        let u = *index
            .get(e.from.as_str())
            .ok_or_else(|| field(format!("{at}.from"), format!("unknown vertex '{}'", e.from)))?;
        let v =
            *index.get(e.to.as_str()).ok_or_else(|| field(format!("{at}.to"), format!("unknown vertex '{}'", e.to)))?;
        if u == v {
            return Err(field(at, "loop edge"));
        }
        let w = LinearForm::new(numbers(&e.weight, &format!("{at}.weight"))?);
        if w.dim() != doc.dimension {
            return Err(field(format!("{at}.weight"), format!("{} entries, dimension is {}", w.dim(), doc.dimension)));
        }
        if let Some(&rev) = by_ends.get(&(v, u)) {
            // the reversal of an earlier edge, given with its own weight
            if explicit.insert(rev, true).is_some() {
                return Err(field(at, format!("edge {}->{} listed twice", e.from, e.to)));
            }
            let id = rev + 1;
            edges[id].weight = w;
            by_ends.insert((u, v), id);
            continue;
        }
        if by_ends.contains_key(&(u, v)) {
            return Err(field(at, format!("edge {}->{} listed twice", e.from, e.to)));
        }
        let id = edges.len();
        let neg = -&w;
        edges.push(Edge { source: u, target: v, weight: w, reverse: id + 1 });
        edges.push(Edge { source: v, target: u, weight: neg, reverse: id });
        by_ends.insert((u, v), id);
        by_ends.insert((v, u), id + 1);
    }
    let mut graph = GkmGraph::from_parts(doc.dimension, doc.valence, doc.vertices.clone(), edges, None);
    if let Some(xi) = &doc.xi {
        let xi = numbers(xi, "xi")?;
        if xi.len() != doc.dimension {
            return Err(field("xi", format!("{} entries, dimension is {}", xi.len(), doc.dimension)));
        }
        graph.set_default_xi(Some(xi));
    }
    match &doc.connection {
        Some(map) => {
            let table = connection_table(&graph, map, &index, &by_ends)?;
            graph.set_connection(table);
            Ok(graph)
        }
        None if graph.num_edges() == 0 => {
            graph.set_connection(Vec::new());
            Ok(graph)
        }
        None => Ok(derive_connection(&graph)?),
    }
}

fn connection_table(
    graph: &GkmGraph,
    map: &BTreeMap<String, String>,
    index: &HashMap<&str, usize>,
    by_ends: &HashMap<(usize, usize), EdgeId>,
) -> Result<Vec<Vec<EdgeId>>, BuildError> {
    let edge_id = |text: &str, at: &str| -> Result<EdgeId, BuildError> {
        let (a, b) =
            text.split_once("->").ok_or_else(|| field(at, format!("expected an edge 'u->v', got '{text}'")))?;
        let u = index.get(a.trim()).ok_or_else(|| field(at, format!("unknown vertex '{}'", a.trim())))?;
        let v = index.get(b.trim()).ok_or_else(|| field(at, format!("unknown vertex '{}'", b.trim())))?;
        by_ends.get(&(*u, *v)).copied().ok_or_else(|| field(at, format!("no edge {text}")))
    };
    let slot = |e: EdgeId, e2: EdgeId| graph.out_edges(graph.source(e)).iter().position(|&x| x == e2);
    let mut table: Vec<Vec<Option<EdgeId>>> =
        (0..graph.num_edges()).map(|e| vec![None; graph.out_edges(graph.source(e)).len()]).collect();
    let mut set = |e: EdgeId, e2: EdgeId, image: EdgeId, at: &str| -> Result<(), BuildError> {
        let k = slot(e, e2).ok_or_else(|| {
            field(at, format!("{} does not start where {} does", graph.edge_label(e2), graph.edge_label(e)))
        })?;
        match table[e][k] {
            Some(old) if old != image => Err(field(
                at,
                format!(
                    "conflicting images {} and {} for {} along {}",
                    graph.edge_label(old),
                    graph.edge_label(image),
                    graph.edge_label(e2),
                    graph.edge_label(e)
                ),
            )),
            _ => {
                table[e][k] = Some(image);
                Ok(())
            }
        }
    };
    for e in 0..graph.num_edges() {
        set(e, e, graph.reverse(e), "connection")?;
    }
    for (key, value) in map {
        let at = format!("connection[\"{key}\"]");
        let (a, b) = key.split_once('|').ok_or_else(|| field(&at, "expected a key of the form 'u->v|u->w'"))?;
        let e = edge_id(a.trim(), &at)?;
        let e2 = edge_id(b.trim(), &at)?;
        let image = edge_id(value.trim(), &at)?;
        if graph.source(image) != graph.target(e) {
            return Err(field(&at, format!("{} does not start at the end of {}", value, a)));
        }
        set(e, e2, image, &at)?;
        set(graph.reverse(e), image, e2, &at)?;
    }
    table
        .into_iter()
        .enumerate()
        .map(|(e, row)| {
            row.into_iter()
                .enumerate()
                .map(|(k, x)| {
                    x.ok_or_else(|| {
                        let e2 = graph.out_edges(graph.source(e))[k];
                        field(
                            "connection",
                            format!("no image for {} along {}", graph.edge_label(e2), graph.edge_label(e)),
                        )
                    })
                })
                .collect()
        })
        .collect()
}

/// Reads and validates a graph document.
pub fn parse_graph(text: &str) -> Result<GkmGraph, BuildError> {
    let graph = parse_graph_unvalidated(text)?;
    let report = validate(&graph);
    if !report.is_ok() {
        return Err(GkmError::Invalid(report.render(&graph)).into());
    }
    Ok(graph)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<GkmGraph, BuildError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| BuildError::Io { path: path.to_path_buf(), source })?;
    parse_graph(&text)
}

fn rationals(list: &[Rational]) -> Vec<Number> {
    list.iter().map(|q| Number::Text(format_rational(q))).collect()
}

/// Canonical document: one entry per edge pair, the full connection, and
/// the default polarization when there is one.
pub fn to_json(graph: &GkmGraph) -> String {
    let name = |v: usize| graph.name(v).to_string();
    let edge_name = |e: EdgeId| format!("{}->{}", name(graph.source(e)), name(graph.target(e)));
    let mut edges = Vec::new();
    for e in 0..graph.num_edges() {
        if e < graph.reverse(e) {
            edges.push(EdgeDoc {
                from: name(graph.source(e)),
                to: name(graph.target(e)),
                weight: rationals(graph.weight(e).coeffs()),
            });
        }
    }
    let connection = graph.connection_table().map(|_| {
        let mut map = BTreeMap::new();
        for e in 0..graph.num_edges() {
            for &e2 in graph.out_edges(graph.source(e)) {
                if e2 != e {
                    let image = graph.theta(e, e2).expect("connection table is present");
                    map.insert(format!("{}|{}", edge_name(e), edge_name(e2)), edge_name(image));
                }
            }
        }
        map
    });
    let doc = GraphDoc {
        dimension: graph.dimension(),
        valence: graph.valence(),
        vertices: graph.names().to_vec(),
        edges,
        connection,
        xi: graph.default_xi().map(rationals),
    };
    serde_json::to_string_pretty(&doc).expect("graph documents serialize") + "\n"
}

pub fn save_graph(graph: &GkmGraph, path: impl AsRef<Path>) -> Result<(), BuildError> {
    let path = path.as_ref();
    std::fs::write(path, to_json(graph)).map_err(|source| BuildError::Io { path: path.to_path_buf(), source })
}
