use gkm_core::builders::complete_graph;
use gkm_core::gkm::orient;
use gkm_core::symbolic::{
    elementary_symmetric, elementary_symmetric_omitting, lagrange_interpolate, ratio, rational, rho, vandermonde,
    vandermonde_inverse, vandermonde_inverse_power_form, LinearForm, Monomial, Polynomial, Rational, RationalExpr,
};
use gkm_core::thom::Thom;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const NVARS: usize = 3;

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, NVARS), -5i64..=5), 0..5).prop_map(|terms| {
        Polynomial::from_terms(NVARS, terms.into_iter().map(|(e, c)| (Monomial::new(e), rational(c))))
    })
}

fn form_strategy() -> impl Strategy<Value = LinearForm> {
    proptest::collection::vec(-4i64..=4, NVARS).prop_map(|v| LinearForm::from_ints(&v))
}

fn xi_strategy() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-6i64..=6, 1i64..4), NVARS)
        .prop_map(|v| v.into_iter().map(|(a, b)| ratio(a, b)).collect())
}

fn random_point(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| ratio(rng.random_range(-40..=40), rng.random_range(1..=9))).collect()
}

fn random_nodes(rng: &mut StdRng, size: usize, dim: usize) -> Vec<LinearForm> {
    loop {
        let nodes: Vec<LinearForm> = (0..size).map(|_| LinearForm::new(random_point(rng, dim))).collect();
        let distinct = (0..size).all(|i| (i + 1..size).all(|j| nodes[i] != nodes[j]));
        if distinct {
            return nodes;
        }
    }
}

/// Elementary symmetric function by summing over all `r`-subsets.
fn brute_symmetric(nodes: &[LinearForm], r: usize, nvars: usize) -> Polynomial {
    let mut total = Polynomial::zero(nvars);
    for mask in 0u32..(1 << nodes.len()) {
        if mask.count_ones() as usize == r {
            let chosen = nodes.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, f)| f);
            total = &total + &Polynomial::product_of_linear(nvars, chosen);
        }
    }
    total
}

#[test]
fn pairing_examples() {
    assert_eq!(LinearForm::from_ints(&[1, -1]).pair(&[rational(2), rational(1)]).unwrap(), rational(1));
    assert_eq!(LinearForm::zero(3).pair(&[rational(7), rational(-2), ratio(1, 3)]).unwrap(), rational(0));
    let xi = [rational(1), rational(2), rational(3)];
    assert_eq!(LinearForm::from_ints(&[-1, 1, 0]).pair(&xi).unwrap(), rational(1));
    assert!(LinearForm::from_ints(&[1, 0]).pair(&xi).is_err());
}

#[test]
fn divisibility_examples() {
    let x1 = Polynomial::variable(2, 0);
    let x2 = Polynomial::variable(2, 1);
    let d = LinearForm::from_ints(&[1, -1]);
    let squares = &(&x1 * &x1) - &(&x2 * &x2);
    assert_eq!(squares.divides_linear(&d).unwrap(), Some(&x1 + &x2));
    assert_eq!((&x1 + &x2).divides_linear(&d).unwrap(), None);
    // a1 = x2 - x1, a2 = x3 - x2
    let a1 = LinearForm::from_ints(&[-1, 1, 0]);
    let a2 = LinearForm::from_ints(&[0, -1, 1]);
    let sum = &a1 + &a2;
    let p = &Polynomial::from_linear(&a2) * &Polynomial::from_linear(&sum);
    let q = p.divides_linear(&sum).unwrap().unwrap();
    assert_eq!(q, Polynomial::from_linear(&a2));
    assert_eq!(&q * &Polynomial::from_linear(&sum), p);
    assert!(p.divides_linear(&LinearForm::zero(3)).is_err());
}

#[test]
fn rho_examples() {
    let xi = [rational(1), rational(2), rational(3)];
    let a1 = LinearForm::from_ints(&[-1, 1, 0]);
    let a2 = LinearForm::from_ints(&[0, -1, 1]);
    assert!(rho(&a1, &xi, &Polynomial::from_linear(&a1)).unwrap().is_zero());
    // forms vanishing on xi are fixed
    let fixed = Polynomial::from_linear(&LinearForm::from_ints(&[1, 1, -1]));
    assert_eq!(rho(&a1, &xi, &fixed.pow(2)).unwrap(), fixed.pow(2));
    // rho_(a1)(a2) = a2 - (a2(xi)/a1(xi)) a1, proportional to a2(xi) a1 - a1(xi) a2
    let image = rho(&a1, &xi, &Polynomial::from_linear(&a2)).unwrap();
    let (v1, v2) = (a1.pair(&xi).unwrap(), a2.pair(&xi).unwrap());
    let cross = &a1.scale(&v2) - &a2.scale(&v1);
    assert_eq!(image, Polynomial::from_linear(&cross).scale(&(-v1.recip())));
    assert!(rho(&LinearForm::from_ints(&[1, 1, -1]), &xi, &fixed).is_err());
}

#[test]
fn symmetric_function_examples() {
    let nodes: Vec<LinearForm> = (0..4).map(|i| LinearForm::coordinate(4, i)).collect();
    assert!(elementary_symmetric(&nodes, 0).unwrap().is_one());
    assert_eq!(elementary_symmetric(&nodes, 4).unwrap(), Polynomial::product_of_linear(4, &nodes));
    for r in 0..=4 {
        assert_eq!(elementary_symmetric(&nodes, r).unwrap(), brute_symmetric(&nodes, r, 4));
    }
    assert!(elementary_symmetric(&nodes, 5).is_err());
}

#[test]
fn omitted_symmetric_identity_under_substitution() {
    // sigma^j_k = sum_r (-1)^r sigma_(k-r) x_j^r at n = 3, k = 2, j = 1
    let nodes: Vec<LinearForm> = (0..3).map(|i| LinearForm::coordinate(3, i)).collect();
    let (j, k) = (0, 2);
    let lhs = elementary_symmetric_omitting(&nodes, j, k).unwrap();
    let xj = Polynomial::from_linear(&nodes[j]);
    let mut rhs = Polynomial::zero(3);
    for r in 0..=k {
        let term = &elementary_symmetric(&nodes, k - r).unwrap() * &xj.pow(r as u32);
        rhs = &rhs + &term.scale(&rational(if r % 2 == 0 { 1 } else { -1 }));
    }
    let mut rng = StdRng::seed_from_u64(39);
    for _ in 0..20 {
        let point = random_point(&mut rng, 3);
        assert_eq!(lhs.eval(&point).unwrap(), rhs.eval(&point).unwrap());
    }
}

#[test]
fn vandermonde_inverse_sizes_one_to_six() {
    let mut rng = StdRng::seed_from_u64(7);
    for size in 1..=6 {
        let nodes = random_nodes(&mut rng, size, 2);
        let a = vandermonde(&nodes);
        let b = vandermonde_inverse(&nodes).unwrap();
        assert_eq!(b, vandermonde_inverse_power_form(&nodes).unwrap());
        for i in 0..size {
            for k in 0..size {
                let ba: Vec<RationalExpr> = (0..size).map(|j| b[i][j].mul_polynomial(&a[j][k])).collect();
                let ab: Vec<RationalExpr> = (0..size).map(|j| b[j][k].mul_polynomial(&a[i][j])).collect();
                let expected = if i == k { RationalExpr::one(2) } else { RationalExpr::zero(2) };
                assert_eq!(RationalExpr::sum(2, &ba), expected);
                assert_eq!(RationalExpr::sum(2, &ab), expected);
            }
        }
    }
}

#[test]
fn two_node_inverse() {
    let nodes = [LinearForm::coordinate(2, 0), LinearForm::coordinate(2, 1)];
    let b = vandermonde_inverse(&nodes).unwrap();
    let d = LinearForm::from_ints(&[1, -1]);
    assert_eq!(b[1][0], RationalExpr::new(Polynomial::one(2), [&d]).unwrap());
    assert_eq!(b[1][1], RationalExpr::new(Polynomial::one(2), [&-&d]).unwrap());
    assert!(vandermonde_inverse(&[d.clone(), d]).is_err());
}

fn symbolic_nodes(n: usize) -> Vec<LinearForm> {
    (0..n).map(|i| LinearForm::coordinate(n, i)).collect()
}

fn differences(nodes: &[LinearForm], j: usize) -> Vec<LinearForm> {
    (0..nodes.len()).filter(|&l| l != j).map(|l| &nodes[j] - &nodes[l]).collect()
}

#[test]
fn power_sums_over_differences() {
    for n in 1..=5 {
        let nodes = symbolic_nodes(n);
        for k in 1..=n {
            let terms: Vec<RationalExpr> = (0..n)
                .map(|j| {
                    RationalExpr::new(Polynomial::from_linear(&nodes[j]).pow(k as u32 - 1), &differences(&nodes, j))
                        .unwrap()
                })
                .collect();
            let expected = if k == n { RationalExpr::one(n) } else { RationalExpr::zero(n) };
            assert_eq!(RationalExpr::sum(n, &terms), expected, "n={n} k={k}");
        }
    }
}

fn partition_of_unity(nodes: &[LinearForm], nvars: usize) -> RationalExpr {
    let terms: Vec<RationalExpr> = (0..nodes.len())
        .map(|j| {
            let num: Vec<LinearForm> = (0..nodes.len()).filter(|&l| l != j).map(|l| -&nodes[l]).collect();
            RationalExpr::from_factors(nvars, &num, &differences(nodes, j)).unwrap()
        })
        .collect();
    RationalExpr::sum(nvars, &terms)
}

#[test]
fn partition_of_unity_symbolic_and_random() {
    for n in 1..=5 {
        assert!(partition_of_unity(&symbolic_nodes(n), n).is_one());
    }
    let mut rng = StdRng::seed_from_u64(311);
    for size in 2..=6 {
        for _ in 0..50 {
            let nodes = random_nodes(&mut rng, size, 2);
            assert!(partition_of_unity(&nodes, 2).is_one());
        }
    }
}

#[test]
fn interpolation_of_a_single_point_is_constant() {
    let f = Polynomial::from_linear(&LinearForm::from_ints(&[2, -1]));
    let g = lagrange_interpolate(&[(LinearForm::from_ints(&[1, 1]), f.clone())]).unwrap();
    assert_eq!(g.polynomial_coefficients().unwrap(), vec![f]);
}

#[test]
fn interpolation_recovers_low_degree_monomials() {
    let n = 4;
    let nodes = symbolic_nodes(n);
    for k in 0..n {
        let points: Vec<(LinearForm, Polynomial)> =
            nodes.iter().map(|x| (x.clone(), Polynomial::from_linear(x).pow(k as u32))).collect();
        let g = lagrange_interpolate(&points).unwrap().polynomial_coefficients().unwrap();
        for (i, gi) in g.iter().enumerate() {
            assert_eq!(gi.is_one(), i == k);
            assert!(gi.is_one() || gi.is_zero());
        }
    }
}

#[test]
fn interpolating_thom_classes_of_the_complete_graph() {
    let n = 4;
    let g = complete_graph(n).unwrap();
    let th = Thom::new(&g, orient(&g, g.default_xi().unwrap()).unwrap());
    let nodes = symbolic_nodes(n);
    for p in g.vertices() {
        let class = th.thom_plus_paths(p).unwrap();
        let points: Vec<(LinearForm, Polynomial)> = nodes.iter().cloned().zip(class.values().iter().cloned()).collect();
        let coefficients = lagrange_interpolate(&points).unwrap().polynomial_coefficients().expect("polynomial");
        for (i, gi) in coefficients.iter().enumerate() {
            // g_i = (-1)^(n-i) sum_j sigma^j_(n-i) f_j / prod_(l != j) (x_j - x_l), with 1-based i
            let r = n - 1 - i;
            let terms: Vec<RationalExpr> = (0..n)
                .map(|j| {
                    let rest: Vec<LinearForm> = (0..n).filter(|&l| l != j).map(|l| nodes[l].clone()).collect();
                    let num = &brute_symmetric(&rest, r, n) * &points[j].1;
                    RationalExpr::new(num, &differences(&nodes, j)).unwrap()
                })
                .collect();
            let sign = rational(if r % 2 == 0 { 1 } else { -1 });
            assert_eq!(RationalExpr::sum(n, &terms).scale(&sign), RationalExpr::from_polynomial(gi.clone()));
        }
    }
}

#[test]
fn non_divisible_data_gives_rational_coefficients() {
    let nodes = symbolic_nodes(2);
    let points = vec![(nodes[0].clone(), Polynomial::one(2)), (nodes[1].clone(), Polynomial::zero(2))];
    assert!(lagrange_interpolate(&points).unwrap().polynomial_coefficients().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(NVARS), a.clone());
    }

    #[test]
    fn rational_equality_is_cross_multiplication(
        a in poly_strategy(),
        b in poly_strategy(),
        d in form_strategy(),
        e in form_strategy(),
    ) {
        prop_assume!(!d.is_zero() && !e.is_zero());
        let x = RationalExpr::new(a.clone(), [&d]).unwrap();
        let y = RationalExpr::new(b.clone(), [&e]).unwrap();
        let cross = &a * &Polynomial::from_linear(&e) == &b * &Polynomial::from_linear(&d);
        prop_assert_eq!(x == y, cross);
        let z = RationalExpr::new(&a * &Polynomial::from_linear(&e), [&d, &e]).unwrap();
        prop_assert_eq!(&x, &z);
        prop_assert_eq!(z.clone().reduce(), z.clone().reduce().reduce());
        prop_assert_eq!(z.clone().reduce(), x);
    }

    #[test]
    fn rational_field_operations(a in poly_strategy(), b in poly_strategy(), d in form_strategy(), e in form_strategy()) {
        prop_assume!(!d.is_zero() && !e.is_zero());
        let x = RationalExpr::new(a, [&d]).unwrap();
        let y = RationalExpr::new(b, [&e]).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn rho_is_an_idempotent_ring_map(
        a in poly_strategy(),
        b in poly_strategy(),
        w in form_strategy(),
        xi in xi_strategy(),
    ) {
        let Ok(at) = w.pair(&xi) else { return Ok(()) };
        prop_assume!(at != rational(0));
        let r = |p: &Polynomial| rho(&w, &xi, p).unwrap();
        prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
        prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
        prop_assert_eq!(r(&r(&a)), r(&a));
        prop_assert!(r(&Polynomial::from_linear(&w)).is_zero());
        prop_assert!(r(&a).annihilates(&xi));
    }

    #[test]
    fn interpolation_reproduces_nodes(seed in any::<u64>(), size in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let nodes = random_nodes(&mut rng, size, 2);
        let points: Vec<(LinearForm, Polynomial)> = nodes
            .iter()
            .map(|x| {
                let c: Vec<Rational> = random_point(&mut rng, 2);
                (x.clone(), Polynomial::from_linear(&LinearForm::new(c)))
            })
            .collect();
        let interpolant = lagrange_interpolate(&points).unwrap();
        for (x, f) in &points {
            prop_assert_eq!(interpolant.eval_at(x), RationalExpr::from_polynomial(f.clone()));
        }
    }
}
