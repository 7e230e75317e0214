use gkm_core::builders::{complete_graph, permutahedron};
use gkm_core::cohomology::{edge_class, integrate_cross_section, is_cocycle, CohomologyClass, CohomologyError};
use gkm_core::crosssection::{cross_section, regular_values, thom_seed};
use gkm_core::gkm::{orient, GkmGraph, GraphBuilder};
use gkm_core::symbolic::{elementary_symmetric, rational, LinearForm, Polynomial, RationalExpr};
use gkm_core::thom::Thom;
use proptest::prelude::*;

fn thom(g: &GkmGraph) -> Thom<'_> {
    Thom::new(g, orient(g, g.default_xi().unwrap()).unwrap())
}

fn x(n: usize, i: usize) -> Polynomial {
    Polynomial::variable(n, i)
}

fn coordinates(n: usize) -> Vec<LinearForm> {
    (0..n).map(|i| LinearForm::coordinate(n, i)).collect()
}

#[test]
fn cocycle_examples() {
    let g = complete_graph(3).unwrap();
    assert!(CohomologyClass::one(&g).is_cocycle());
    let tau: Vec<Polynomial> = (0..3).map(|i| x(3, i)).collect();
    assert!(is_cocycle(&g, &tau).is_ok());
    let spike = vec![x(3, 0), Polynomial::zero(3), Polynomial::zero(3)];
    let witness = is_cocycle(&g, &spike).unwrap_err();
    assert_eq!(g.edge_label(witness.edge), "p1->p2");
    assert!(!witness.remainder.is_zero());
    assert!(matches!(CohomologyClass::new(&g, spike), Err(CohomologyError::NotCocycle { .. })));
}

#[test]
fn degree_zero_cocycles_are_constant() {
    let g = permutahedron(3).unwrap();
    let mut values = vec![Polynomial::one(3); 6];
    values[4] = Polynomial::constant(3, rational(2));
    assert!(is_cocycle(&g, &values).is_err());
}

#[test]
fn integral_of_one_vanishes() {
    for g in [complete_graph(4).unwrap(), permutahedron(3).unwrap()] {
        assert!(CohomologyClass::one(&g).integrate().unwrap().is_zero());
    }
}

#[test]
fn complete_graph_dual_basis() {
    for n in 2..=5 {
        let g = complete_graph(n).unwrap();
        let tau = CohomologyClass::new(&g, (0..n).map(|i| x(n, i)).collect()).unwrap();
        let power = |r: usize| (0..r).fold(CohomologyClass::one(&g), |acc, _| acc.product(&tau).unwrap());
        let sigma = |k: usize| elementary_symmetric(&coordinates(n), k).unwrap();
        for i in 1..=n {
            // nu_i = sum_r (-1)^(n-i-r) sigma_(n-i-r) tau^r
            let mut nu = CohomologyClass::from_values(&g, vec![Polynomial::zero(n); n]).unwrap();
            for r in 0..=n - i {
                let sign = if (n - i - r) % 2 == 0 { rational(1) } else { rational(-1) };
                nu = nu.try_add(&power(r).scale(&sigma(n - i - r).scale(&sign))).unwrap();
            }
            assert!(nu.is_cocycle());
            for j in 1..=n {
                let v = nu.product(&power(j - 1)).unwrap().integrate().unwrap();
                let want = if i == j { Polynomial::one(n) } else { Polynomial::zero(n) };
                assert_eq!(v, want, "n = {n}, i = {i}, j = {j}");
            }
        }
    }
}

#[test]
fn products() {
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    let t12 = th.thom_plus_paths(g.vertex("(12)").unwrap()).unwrap();
    let t23 = th.thom_plus_paths(g.vertex("(23)").unwrap()).unwrap();
    assert_eq!(t12.product(&CohomologyClass::one(&g)).unwrap().values(), t12.values());
    let p = t12.product(&t23).unwrap();
    assert!(p.is_cocycle());
    assert_eq!(p.degree(), Some(2));
    let s = Polynomial::from_linear(&LinearForm::from_ints(&[-1, 0, 1]));
    assert_eq!(p.value(g.vertex("(13)").unwrap()), &(&s * &s));
    let other = complete_graph(3).unwrap();
    assert!(matches!(t12.product(&CohomologyClass::one(&other)), Err(CohomologyError::GraphMismatch)));
}

#[test]
fn declared_degree_is_checked() {
    let g = complete_graph(3).unwrap();
    let tau = CohomologyClass::new(&g, (0..3).map(|i| x(3, i)).collect()).unwrap();
    assert!(tau.clone().with_degree(1).is_ok());
    assert!(matches!(tau.with_degree(2), Err(CohomologyError::NotHomogeneous { .. })));
}

#[test]
fn edge_classes() {
    let g = complete_graph(3).unwrap();
    let e = g.find_edge(0, 1).unwrap();
    let c = edge_class(&g, e);
    let w =
        |i: usize, j: usize| Polynomial::from_linear(&(&LinearForm::coordinate(3, i) - &LinearForm::coordinate(3, j)));
    assert_eq!(c.values(), &[w(0, 2), w(1, 2), Polynomial::zero(3)]);
    assert!(c.is_cocycle());

    let p = permutahedron(3).unwrap();
    for e in 0..p.num_edges() {
        let c = edge_class(&p, e);
        assert!(c.is_cocycle());
        assert_eq!(c.degree(), Some(2));
    }

    let single = complete_graph(2).unwrap();
    assert!(edge_class(&single, 0).values().iter().all(Polynomial::is_one));
}

#[test]
fn kirwan_restrictions() {
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    let pol = th.polarization();
    let levels = regular_values(pol);
    for c in &levels {
        let k = CohomologyClass::one(&g).kirwan(pol, c).unwrap();
        assert!(k.values.values().all(Polynomial::is_one));
    }
    let p0 = pol.order()[0];
    let above = &levels[1];
    let seed = thom_seed(&g, pol, p0).unwrap();
    for p in g.vertices() {
        let k = th.thom_plus_paths(p).unwrap().kirwan(pol, above).unwrap();
        for v in k.values.values() {
            assert!(v.annihilates(pol.xi()));
        }
        if p == p0 {
            assert_eq!(k, seed);
        }
    }
    let critical = pol.phi(p0).clone();
    assert!(CohomologyClass::one(&g).kirwan(pol, &critical).is_err());
    let broken = CohomologyClass::from_values(&g, (0..6).map(|v| x(3, v % 3)).collect()).unwrap();
    let mismatch = levels.iter().any(|c| matches!(broken.kirwan(pol, c), Err(CohomologyError::KirwanMismatch { .. })));
    assert!(mismatch);
}

#[test]
fn kirwan_is_a_ring_map() {
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    let pol = th.polarization();
    let classes: Vec<_> = g.vertices().map(|p| th.thom_plus_paths(p).unwrap()).collect();
    for c in &regular_values(pol) {
        for a in &classes {
            for b in &classes {
                let lhs = a.product(b).unwrap().kirwan(pol, c).unwrap();
                let rhs = a.kirwan(pol, c).unwrap().product(&b.kirwan(pol, c).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn cross_section_integrals_give_intersection_numbers() {
    for g in [permutahedron(3).unwrap(), complete_graph(4).unwrap()] {
        let th = thom(&g);
        let pol = th.polarization();
        let down = th.reversed().unwrap();
        let (mut checked, mut unit) = (0, 0);
        for e in (0..g.num_edges()).filter(|&e| pol.is_ascending(e)) {
            let (p, q) = (g.source(e), g.target(e));
            if th.ascending_paths(p, q).len() != 1 {
                continue;
            }
            let c = regular_values(pol).into_iter().find(|c| pol.phi(p) < c && c < pol.phi(q)).unwrap();
            let up = th.thom_plus_paths(p).unwrap().kirwan(pol, &c).unwrap();
            let dn = down.thom_plus_paths(q).unwrap().kirwan(pol, &c).unwrap();
            let integral = integrate_cross_section(&g, pol, &up.product(&dn)).unwrap();
            let iota = th.iota(e).unwrap();
            assert!(iota.global);
            // the integral is Theta itself, i.e. alpha_e(xi) iota_e
            let integral = RationalExpr::from_polynomial(integral);
            assert_eq!(integral, th.theta(e).unwrap(), "{}", g.edge_label(e));
            assert_eq!(integral, iota.value.scale(pol.value(e)), "{}", g.edge_label(e));
            if pol.value(e) == &rational(1) {
                assert_eq!(integral, iota.value);
                unit += 1;
            }
            // self-indexing: a constant
            assert!(integral.is_polynomial() && integral.numerator().as_constant().is_some());
            checked += 1;
        }
        assert!(checked > 0 && unit > 0);
    }
}

#[test]
fn cross_section_integral_of_the_edge_class() {
    let g = complete_graph(2).unwrap();
    let pol = orient(&g, g.default_xi().unwrap()).unwrap();
    let c = regular_values(&pol)[1].clone();
    assert_eq!(cross_section(&g, &pol, &c).unwrap().cut_edges.len(), 1);
    let k = edge_class(&g, 0).kirwan(&pol, &c).unwrap();
    assert!(integrate_cross_section(&g, &pol, &k).unwrap().is_one());
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    let pol = th.polarization();
    for e in (0..g.num_edges()).filter(|&e| pol.is_ascending(e)) {
        let (p, q) = (g.source(e), g.target(e));
        let c = regular_values(pol).into_iter().find(|c| pol.phi(p) < c && c < pol.phi(q)).unwrap();
        let section = cross_section(&g, pol, &c).unwrap();
        let k = edge_class(&g, e).kirwan(pol, &c).unwrap();
        // supported on e alone when no other cut edge joins p and q
        if section.cut_edges.iter().all(|&v| v == e || (g.source(v), g.target(v)) != (p, q)) {
            assert!(integrate_cross_section(&g, pol, &k).unwrap().is_one());
        }
    }
}

#[test]
fn self_indexing_pair_integral_is_constant() {
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    let pol = th.polarization();
    let (p, q) = (g.vertex("(12)").unwrap(), g.vertex("(231)").unwrap());
    let c = regular_values(pol).into_iter().find(|c| pol.phi(p) < c && c < pol.phi(q)).unwrap();
    let up = th.thom_plus_paths(p).unwrap().kirwan(pol, &c).unwrap();
    let dn = th.thom_minus(q).unwrap().kirwan(pol, &c).unwrap();
    let v = integrate_cross_section(&g, pol, &up.product(&dn)).unwrap();
    assert!(v.as_constant().is_some(), "{v}");
}

#[test]
fn low_degree_integrals_vanish() {
    let g = permutahedron(3).unwrap();
    let th = thom(&g);
    for p in g.vertices() {
        let t = th.thom_plus_paths(p).unwrap();
        if th.polarization().sigma(p) < g.valence() {
            assert!(t.integrate().unwrap().is_zero());
        }
    }
}

#[test]
fn non_cocycle_integral_is_rejected() {
    let mut b = GraphBuilder::new(1);
    let (u, v) = (b.add_vertex("u"), b.add_vertex("v"));
    b.add_edge(u, v, LinearForm::from_ints(&[1]));
    let g = b.build();
    let f = CohomologyClass::from_values(&g, vec![Polynomial::one(1), Polynomial::zero(1)]).unwrap();
    assert!(matches!(f.integrate(), Err(CohomologyError::NotPolynomial(_))));
}

fn small_poly(n: usize, coeffs: &[i64]) -> Polynomial {
    // c0 + c1 x1 + c2 x2 + c3 x1 x2 (first two coordinates)
    let x1 = x(n, 0);
    let x2 = x(n, 1);
    let terms = [Polynomial::one(n), x1.clone(), x2.clone(), &x1 * &x2];
    terms.iter().zip(coeffs).fold(Polynomial::zero(n), |acc, (t, &c)| &acc + &t.scale(&rational(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integration_is_linear(
        a in proptest::collection::vec(-5i64..5, 4),
        b in proptest::collection::vec(-5i64..5, 4),
        p in 0usize..6,
        q in 0usize..6,
    ) {
        let g = permutahedron(3).unwrap();
        let th = thom(&g);
        let f = th.thom_plus_paths(p).unwrap().product(&th.thom_minus(q).unwrap()).unwrap();
        let h = th.thom_plus_paths(q).unwrap().product(&th.thom_plus_paths(p).unwrap()).unwrap();
        let (a, b) = (small_poly(3, &a), small_poly(3, &b));
        let lhs = f.scale(&a).try_add(&h.scale(&b)).unwrap().integrate().unwrap();
        let rhs = &(&a * &f.integrate().unwrap()) + &(&b * &h.integrate().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_stay_cocycles(p in 0usize..6, q in 0usize..6) {
        let g = permutahedron(3).unwrap();
        let th = thom(&g);
        let f = th.thom_plus_paths(p).unwrap().product(&th.thom_minus(q).unwrap()).unwrap();
        prop_assert!(f.is_cocycle());
    }
}
