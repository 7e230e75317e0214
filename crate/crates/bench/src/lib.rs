//! Fixtures shared by the benchmarks.

use gkm_core::gkm::orient;
use gkm_core::{complete_graph, permutahedron, GkmGraph, Polarization};

/// The built-in graphs used in the benchmarks, with their labels.
pub fn graphs() -> Vec<(&'static str, GkmGraph)> {
    vec![
        ("permutahedron3", permutahedron(3).expect("builder")),
        ("permutahedron4", permutahedron(4).expect("builder")),
        ("complete6", complete_graph(6).expect("builder")),
    ]
}

/// The polarization by the graph's default vector.
pub fn default_polarization(graph: &GkmGraph) -> Polarization {
    let xi = graph.default_xi().expect("built-in graphs carry a default vector");
    orient(graph, xi).expect("default vector polarizes")
}
