use std::collections::HashMap;

use super::{Edge, EdgeId, GkmGraph, VertexId};
use crate::symbolic::{in_span, LinearForm};

/// The subgraph of edges whose weights lie in the span of `subspace`, with
/// the connection restricted to it. Vertices without such edges are dropped
/// unless no edge qualifies at all, in which case every vertex is kept.
pub fn totally_geodesic_subgraph(graph: &GkmGraph, subspace: &[LinearForm]) -> GkmGraph {
    let keep: Vec<bool> = graph.edges().iter().map(|e| in_span(&e.weight, subspace)).collect();
    let any_edge = keep.iter().any(|&k| k);
    let mut vertex_map: HashMap<VertexId, VertexId> = HashMap::new();
    let mut names = Vec::new();
    let mut aliases = Vec::new();
    for v in graph.vertices() {
        let touched = graph.out_edges(v).iter().any(|&e| keep[e]);
        if touched || !any_edge {
            vertex_map.insert(v, names.len());
            names.push(graph.name(v).to_string());
            aliases.push((graph.label(v) != graph.name(v)).then(|| graph.label(v).to_string()));
        }
    }
    let mut edge_map: HashMap<EdgeId, EdgeId> = HashMap::new();
    let old_ids: Vec<EdgeId> = (0..graph.num_edges()).filter(|&e| keep[e]).collect();
    for (new, &old) in old_ids.iter().enumerate() {
        edge_map.insert(old, new);
    }
    let edges: Vec<Edge> = old_ids
        .iter()
        .map(|&old| {
            let e = graph.edge(old);
            Edge {
                source: vertex_map[&e.source],
                target: vertex_map[&e.target],
                weight: e.weight.clone(),
                reverse: edge_map[&e.reverse],
            }
        })
        .collect();
    let mut degree = vec![0usize; names.len()];
    for e in &edges {
        degree[e.source] += 1;
    }
    let valence = degree.iter().copied().max().unwrap_or(0);
    let connection = graph.connection_table().map(|_| {
        old_ids
            .iter()
            .map(|&old| {
                graph
                    .out_edges(graph.source(old))
                    .iter()
                    .filter(|&&e2| keep[e2])
                    .map(|&e2| {
                        let image = graph.theta(old, e2).expect("connection table is present");
                        edge_map.get(&image).copied().unwrap_or(usize::MAX)
                    })
                    .collect()
            })
            .collect()
    });
    let mut sub = GkmGraph::from_parts(graph.dimension(), valence, names, edges, connection);
    sub.set_aliases(aliases);
    sub.set_default_xi(graph.default_xi().map(<[_]>::to_vec));
    sub.set_display_basis(graph.display_basis());
    sub
}
