use gkm_core::builders::{complete_graph, parse_graph_unvalidated, permutahedron, to_json};
use gkm_core::gkm::{
    betti, check_generic, connection_candidates, derive_connection, find_generic_xi, longest_path_morse, orient,
    totally_geodesic_subgraph, validate, GkmError, GkmGraph, GraphBuilder, Issue,
};
use gkm_core::symbolic::{rational, LinearForm, Rational};
use gkm_core::thom::Thom;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rational(x)).collect()
}

fn default_pol(g: &GkmGraph) -> gkm_core::Polarization {
    orient(g, g.default_xi().unwrap()).unwrap()
}

fn inversions(perm: &str) -> usize {
    let d: Vec<char> = perm.chars().collect();
    (0..d.len()).map(|i| (i + 1..d.len()).filter(|&j| d[i] > d[j]).count()).sum()
}

#[test]
fn builders_validate() {
    for n in 2..=7 {
        assert!(validate(&complete_graph(n).unwrap()).is_ok(), "complete({n})");
    }
    for n in 2..=4 {
        assert!(validate(&permutahedron(n).unwrap()).is_ok(), "permutahedron({n})");
    }
}

#[test]
fn negated_weight_is_reported() {
    let g = complete_graph(3).unwrap();
    let e = g.find_edge(0, 1).unwrap();
    let broken = g.with_weight(e, -g.weight(e));
    let report = validate(&broken);
    assert!(report.issues.iter().any(|i| matches!(i, Issue::ReversedWeight { .. })), "{:?}", report.issues);
}

#[test]
fn parallel_weights_are_reported() {
    let mut b = GraphBuilder::new(2);
    let (u, v, w) = (b.add_vertex("u"), b.add_vertex("v"), b.add_vertex("w"));
    b.add_edge(u, v, LinearForm::from_ints(&[1, 0]));
    b.add_edge(u, w, LinearForm::from_ints(&[2, 0]));
    b.add_edge(v, w, LinearForm::from_ints(&[0, 1]));
    let report = validate(&b.build());
    assert!(report.issues.iter().any(|i| matches!(i, Issue::ParallelWeights { .. })));
    assert!(report.issues.contains(&Issue::MissingConnection));
}

#[test]
fn complete_graph_indices() {
    for n in 2..=6 {
        let g = complete_graph(n).unwrap();
        let pol = default_pol(&g);
        for i in 0..n {
            assert_eq!(pol.sigma(i), i);
        }
        assert_eq!(pol.betti(g.valence()), vec![1; n]);
    }
}

#[test]
fn permutahedron_indices_count_inversions() {
    for n in 2..=4 {
        let g = permutahedron(n).unwrap();
        let pol = default_pol(&g);
        for v in g.vertices() {
            assert_eq!(pol.sigma(v), inversions(g.name(v)), "{}", g.name(v));
        }
    }
    let g = permutahedron(3).unwrap();
    let pol = default_pol(&g);
    let sigma: Vec<usize> =
        ["1", "(12)", "(23)", "(231)", "(312)", "(13)"].iter().map(|l| pol.sigma(g.vertex(l).unwrap())).collect();
    assert_eq!(sigma, vec![0, 1, 1, 2, 2, 3]);
}

#[test]
fn betti_examples() {
    let p3 = permutahedron(3).unwrap();
    assert_eq!(betti(&p3, p3.default_xi().unwrap()).unwrap(), vec![1, 2, 2, 1]);
    let p4 = permutahedron(4).unwrap();
    assert_eq!(betti(&p4, p4.default_xi().unwrap()).unwrap(), vec![1, 3, 5, 6, 5, 3, 1]);
}

#[test]
fn reversing_xi_swaps_edges() {
    let g = permutahedron(3).unwrap();
    let pol = default_pol(&g);
    let rev = pol.reversed(&g).unwrap();
    for e in 0..g.num_edges() {
        assert_eq!(pol.is_ascending(e), !rev.is_ascending(e));
        assert_eq!(pol.is_ascending(e), !pol.is_ascending(g.reverse(e)));
    }
    for v in g.vertices() {
        assert_eq!(rev.sigma(v), g.valence() - pol.sigma(v));
    }
}

#[test]
fn orient_errors() {
    let g = complete_graph(3).unwrap();
    assert!(matches!(orient(&g, &ints(&[1, 1, 2])), Err(GkmError::NotPolarizing { .. })));
    assert!(matches!(orient(&g, &ints(&[1, 2])), Err(GkmError::DimensionMismatch { .. })));
}

#[test]
fn ascending_cycle_is_rejected() {
    // a triangle whose weights all pair positively with xi
    let mut b = GraphBuilder::new(2);
    let (u, v, w) = (b.add_vertex("u"), b.add_vertex("v"), b.add_vertex("w"));
    b.add_edge(u, v, LinearForm::from_ints(&[1, 0]));
    b.add_edge(v, w, LinearForm::from_ints(&[0, 1]));
    b.add_edge(w, u, LinearForm::from_ints(&[1, 1]));
    let g = b.build();
    assert!(matches!(orient(&g, &ints(&[1, 1])), Err(GkmError::AscendingCycle { .. })));
}

#[test]
fn longest_path_morse_functions() {
    let g = permutahedron(3).unwrap();
    let pol = longest_path_morse(&g, g.default_xi().unwrap()).unwrap();
    assert!(pol.is_self_indexing());
    for v in g.vertices() {
        assert_eq!(pol.longest(v), inversions(g.name(v)));
    }
    for n in 2..=5 {
        let g = complete_graph(n).unwrap();
        let pol = longest_path_morse(&g, g.default_xi().unwrap()).unwrap();
        assert!(pol.is_self_indexing());
        for i in 0..n {
            assert_eq!(pol.longest(i), i);
        }
        let minimum = pol.order()[0];
        assert_eq!(pol.sigma(minimum), 0);
    }
}

#[test]
fn morse_function_increases_along_ascending_edges() {
    for g in [permutahedron(4).unwrap(), complete_graph(5).unwrap()] {
        let pol = default_pol(&g);
        for e in (0..g.num_edges()).filter(|&e| pol.is_ascending(e)) {
            assert!(pol.phi(g.source(e)) < pol.phi(g.target(e)));
        }
        let mut phis: Vec<&Rational> = g.vertices().map(|v| pol.phi(v)).collect();
        phis.sort();
        phis.dedup();
        assert_eq!(phis.len(), g.num_vertices());
    }
}

#[test]
fn several_minima_are_reported() {
    // path u - v - w with v above both neighbours
    let mut b = GraphBuilder::new(2);
    let (u, v, w) = (b.add_vertex("u"), b.add_vertex("v"), b.add_vertex("w"));
    b.add_edge(u, v, LinearForm::from_ints(&[1, 0]));
    b.add_edge(w, v, LinearForm::from_ints(&[0, 1]));
    let g = b.build();
    let result = longest_path_morse(&g, &ints(&[1, 1]));
    assert!(matches!(result, Err(GkmError::MultipleMinima { .. })));
}

#[test]
fn genericity() {
    let g = complete_graph(3).unwrap();
    let pol = orient(&g, &ints(&[3, 2, 1])).unwrap();
    assert!(g.vertices().all(|p| check_generic(&g, &pol, p)));
    // some small xi is not generic on the permutahedron
    let g = permutahedron(3).unwrap();
    let mut found = false;
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                if let Ok(pol) = orient(&g, &ints(&[a, b, c])) {
                    found |= g.vertices().any(|p| !check_generic(&g, &pol, p));
                }
            }
        }
    }
    assert!(found);
    let edge = complete_graph(2).unwrap();
    let pol = default_pol(&edge);
    assert!(edge.vertices().all(|p| check_generic(&edge, &pol, p)));
}

#[test]
fn generic_search_is_deterministic() {
    let g = permutahedron(3).unwrap();
    let xi = find_generic_xi(&g, 6).unwrap();
    assert_eq!(xi, find_generic_xi(&g, 6).unwrap());
    let pol = orient(&g, &xi).unwrap();
    assert!(g.vertices().all(|p| check_generic(&g, &pol, p)));
}

#[test]
fn totally_geodesic_subgraphs() {
    let g = permutahedron(3).unwrap();
    let all: Vec<LinearForm> = g.edges().iter().map(|e| e.weight.clone()).collect();
    let whole = totally_geodesic_subgraph(&g, &all);
    assert_eq!((whole.num_vertices(), whole.num_edges()), (g.num_vertices(), g.num_edges()));

    let a1 = LinearForm::from_ints(&[-1, 1, 0]);
    let pairs = totally_geodesic_subgraph(&g, &[a1]);
    assert_eq!(pairs.valence(), 1);
    assert_eq!(pairs.num_edges(), 6);
    assert_eq!(pairs.num_vertices(), 6);
    assert!(validate(&pairs).is_ok());

    let k4 = complete_graph(4).unwrap();
    let span = [LinearForm::from_ints(&[1, -1, 0, 0]), LinearForm::from_ints(&[0, 1, -1, 0])];
    let triangle = totally_geodesic_subgraph(&k4, &span);
    assert_eq!(triangle.names(), &["p1", "p2", "p3"]);
    assert_eq!(triangle.num_edges(), 6);
    assert!(validate(&triangle).is_ok());
}

fn without_connection(g: &GkmGraph) -> String {
    let mut doc: serde_json::Value = serde_json::from_str(&to_json(g)).unwrap();
    doc.as_object_mut().unwrap().remove("connection");
    doc.to_string()
}

#[test]
fn connection_derived_for_complete_graphs() {
    for n in 3..=5 {
        let g = complete_graph(n).unwrap();
        let derived = parse_graph_unvalidated(&without_connection(&g)).unwrap();
        assert_eq!(derived.connection_table(), g.connection_table(), "complete({n})");
    }
}

#[test]
fn permutahedron_connection_is_ambiguous() {
    // the weights alone admit several compatible connections on the flag graph
    let g = permutahedron(3).unwrap();
    let text = without_connection(&g);
    let err = parse_graph_unvalidated(&text).unwrap_err();
    assert!(err.to_string().contains("not determined"), "{err}");
    assert!(connection_candidates(&g).iter().any(|c| c.bijections > 1));
    assert!(matches!(derive_connection(&g), Err(GkmError::AmbiguousConnection(_))));
}

#[test]
fn unique_path_edges_raise_index_by_at_most_one() {
    for g in [permutahedron(3).unwrap(), permutahedron(4).unwrap(), complete_graph(5).unwrap()] {
        let th = Thom::new(&g, default_pol(&g));
        let pol = th.polarization();
        for e in (0..g.num_edges()).filter(|&e| pol.is_ascending(e)) {
            let (p, q) = (g.source(e), g.target(e));
            if th.ascending_paths(p, q).len() == 1 {
                assert!(pol.sigma(q) <= pol.sigma(p) + 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn signs_flip_under_reversal(xs in proptest::collection::vec(-20i64..20, 4)) {
        let g = complete_graph(4).unwrap();
        if let Ok(pol) = orient(&g, &ints(&xs)) {
            for e in 0..g.num_edges() {
                prop_assert_eq!(pol.value(e), &-pol.value(g.reverse(e)));
            }
            prop_assert_eq!(pol.betti(g.valence()), vec![1; 4]);
            let total: usize = pol.betti(g.valence()).iter().sum();
            prop_assert_eq!(total, 4);
        }
    }

    #[test]
    fn permutahedron_betti_is_stable(xs in proptest::collection::vec(-30i64..30, 3)) {
        let g = permutahedron(3).unwrap();
        if let Ok(pol) = orient(&g, &ints(&xs)) {
            prop_assert_eq!(pol.betti(g.valence()), vec![1, 2, 2, 1]);
        }
    }
}

#[test]
fn single_vertex_graph() {
    let mut b = GraphBuilder::new(2);
    b.add_vertex("pt");
    let g = b.build();
    assert!(validate(&g).is_ok());
    let pol = orient(&g, &ints(&[1, 1])).unwrap();
    assert_eq!(pol.betti(g.valence()), vec![1]);
    let th = Thom::new(&g, pol);
    let t = th.thom_plus_paths(0).unwrap();
    assert!(t.value(0).is_one());
    assert!(t.integrate().unwrap().is_one());
}
