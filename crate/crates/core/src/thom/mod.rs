//! Thom classes: ascending paths and their weights, intersection numbers,
//! the path-sum and inductive constructions, descending classes, pairings
//! and structure constants.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::cohomology::{CohomologyClass, CohomologyError};
use crate::crosssection::{q_edge_factors, q_pair_factors};
use crate::gkm::{EdgeId, GkmError, GkmGraph, Polarization, VertexId};
use crate::symbolic::{LinearForm, Polynomial, Projection, Rational, RationalExpr, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThomError {
    #[error("{vertex}: path sum {value} is not a polynomial")]
    NotPolynomial { vertex: String, value: String },
    #[error("path {path}: the two weight formulas disagree ({first} vs {second})")]
    RouteMismatch { path: String, first: String, second: String },
    #[error("{edge} is not ascending")]
    NotAscending { edge: String },
    #[error("edges {first} and {second} do not form a path")]
    Broken { first: String, second: String },
    #[error("class of {base} is nonzero at {vertex}, outside its flow-up")]
    Support { base: String, vertex: String },
    #[error("class of {base} has value {found} at its base, expected {expected}")]
    LeadingValue { base: String, found: String, expected: String },
    #[error("class of {base} is not homogeneous of degree {degree} at {vertex}")]
    Degree { base: String, vertex: String, degree: usize },
    #[error("value {value} at {vertex} violates the congruence along {edge}")]
    Congruence { vertex: String, edge: String, value: String },
    #[error("not in the span of the Thom classes: residue {residue} at {vertex} is not divisible by {nu}")]
    NotInSpan { vertex: String, residue: String, nu: String },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// A path `e_1, ..., e_m` with `t(e_(k-1)) = i(e_k)`. The empty path sits at
/// `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AscendingPath {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl AscendingPath {
    pub fn empty(start: VertexId) -> Self {
        Self { start, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, graph: &GkmGraph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| graph.target(e))
    }

    pub fn vertices(&self, graph: &GkmGraph) -> Vec<VertexId> {
        std::iter::once(self.start).chain(self.edges.iter().map(|&e| graph.target(e))).collect()
    }

    /// The same edges traced backwards.
    pub fn reversed(&self, graph: &GkmGraph) -> Self {
        Self { start: self.end(graph), edges: self.edges.iter().rev().map(|&e| graph.reverse(e)).collect() }
    }

    /// The first `k` edges and the rest.
    pub fn split_at(&self, graph: &GkmGraph, k: usize) -> (Self, Self) {
        let head = Self { start: self.start, edges: self.edges[..k].to_vec() };
        let tail = Self { start: head.end(graph), edges: self.edges[k..].to_vec() };
        (head, tail)
    }

    pub fn render(&self, graph: &GkmGraph) -> String {
        self.vertices(graph).iter().map(|&v| graph.label(v)).collect::<Vec<_>>().join(" -> ")
    }
}

/// `E(gamma)` for a path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathWeight {
    pub path: AscendingPath,
    pub value: RationalExpr,
}

/// `Theta / alpha_e(xi)`, flagged global when `e` is the only ascending path
/// between its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Iota {
    pub value: RationalExpr,
    pub global: bool,
}

/// A quotient kept as lists of linear factors and a scalar.
struct Factored {
    scale: Rational,
    num: Vec<LinearForm>,
    den: Vec<LinearForm>,
}

impl Factored {
    fn one() -> Self {
        Self { scale: Rational::one(), num: Vec::new(), den: Vec::new() }
    }

    fn times(&mut self, (num, den): (Vec<LinearForm>, Vec<LinearForm>)) {
        self.num.extend(num);
        self.den.extend(den);
    }

    fn finish(self, nvars: usize) -> Result<RationalExpr, SymbolicError> {
        Ok(RationalExpr::from_factors(nvars, &self.num, &self.den)?.scale(&self.scale))
    }
}

/// Thom-class computations for a graph under one polarization.
#[derive(Clone, Debug)]
pub struct Thom<'g> {
    graph: &'g GkmGraph,
    pol: Polarization,
    descending: Vec<Vec<EdgeId>>,
    ascending: Vec<Vec<EdgeId>>,
}

impl<'g> Thom<'g> {
    pub fn new(graph: &'g GkmGraph, pol: Polarization) -> Self {
        let descending = graph.vertices().map(|p| pol.descending_edges(graph, p).collect()).collect();
        let ascending = graph.vertices().map(|p| pol.ascending_edges(graph, p).collect()).collect();
        Self { graph, pol, descending, ascending }
    }

    pub fn graph(&self) -> &'g GkmGraph {
        self.graph
    }

    pub fn polarization(&self) -> &Polarization {
        &self.pol
    }

    /// The same graph under `-xi`.
    pub fn reversed(&self) -> Result<Thom<'g>, ThomError> {
        Ok(Thom::new(self.graph, self.pol.reversed(self.graph)?))
    }

    fn n(&self) -> usize {
        self.graph.dimension()
    }

    /// `nu_p^+`: the product of the descending weights at `p`.
    pub fn nu(&self, p: VertexId) -> Polynomial {
        Polynomial::product_of_linear(self.n(), self.graph.weights_of(&self.descending[p]))
    }

    /// `nu_p^-`: the product of the ascending weights at `p`.
    pub fn nu_minus(&self, p: VertexId) -> Polynomial {
        Polynomial::product_of_linear(self.n(), self.graph.weights_of(&self.ascending[p]))
    }

    fn check_ascending(&self, e: EdgeId) -> Result<(), ThomError> {
        if self.pol.is_ascending(e) {
            Ok(())
        } else {
            Err(ThomError::NotAscending { edge: self.graph.edge_label(e) })
        }
    }

    fn check_path(&self, path: &AscendingPath) -> Result<(), ThomError> {
        let mut at = path.start;
        for (k, &e) in path.edges.iter().enumerate() {
            if self.graph.source(e) != at {
                let first =
                    if k == 0 { self.graph.label(at).to_string() } else { self.graph.edge_label(path.edges[k - 1]) };
                return Err(ThomError::Broken { first, second: self.graph.edge_label(e) });
            }
            self.check_ascending(e)?;
            at = self.graph.target(e);
        }
        Ok(())
    }

    /// Every ascending path starting at `p`, the empty one included, in
    /// depth-first order.
    pub fn paths_from(&self, p: VertexId) -> Vec<AscendingPath> {
        let mut out = Vec::new();
        let mut stack = vec![AscendingPath::empty(p)];
        while let Some(path) = stack.pop() {
            let end = path.end(self.graph);
            for &e in self.ascending[end].iter().rev() {
                let mut next = path.clone();
                next.edges.push(e);
                stack.push(next);
            }
            out.push(path);
        }
        out
    }

    /// Every ascending path from `p` to `q`; the empty path iff `p = q`.
    pub fn ascending_paths(&self, p: VertexId, q: VertexId) -> Vec<AscendingPath> {
        self.paths_from(p).into_iter().filter(|g| g.end(self.graph) == q).collect()
    }

    /// Vertices reachable from `p` by ascending paths, `p` included.
    pub fn flow_up(&self, p: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.graph.num_vertices()];
        let mut stack = vec![p];
        seen[p] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.ascending[v] {
                let w = self.graph.target(e);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn project(&self, e: EdgeId, edges: &[EdgeId]) -> Result<Vec<LinearForm>, SymbolicError> {
        let proj = Projection::along(self.graph.weight(e), self.pol.xi())?;
        Ok(proj.apply_product(self.graph.weights_of(edges)))
    }

    /// The sets `E_(p,q)` and `E_(q,p)` for the ascending edge `e = pq`:
    /// descending edges at `p` sent by the connection to ascending ones at
    /// `q`, and descending edges at `q` (other than the reversal of `e`)
    /// sent back to ascending ones at `p`.
    pub fn theta_sets(&self, e: EdgeId) -> Result<(Vec<EdgeId>, Vec<EdgeId>), ThomError> {
        self.check_ascending(e)?;
        let (p, q) = (self.graph.source(e), self.graph.target(e));
        let back = self.graph.reverse(e);
        let mut epq = Vec::new();
        for &x in &self.descending[p] {
            if self.pol.is_ascending(self.graph.theta(e, x)?) {
                epq.push(x);
            }
        }
        let mut eqp = Vec::new();
        for &x in self.descending[q].iter().filter(|&&x| x != back) {
            if self.pol.is_ascending(self.graph.theta(back, x)?) {
                eqp.push(x);
            }
        }
        Ok((epq, eqp))
    }

    fn theta_factors(&self, e: EdgeId) -> Result<(Vec<LinearForm>, Vec<LinearForm>), ThomError> {
        let (epq, eqp) = self.theta_sets(e)?;
        Ok((self.project(e, &epq)?, self.project(e, &eqp)?))
    }

    /// `Theta_pq = rho_e(Z_pq) / rho_e(Z_qp)` for an ascending edge `e = pq`.
    pub fn theta(&self, e: EdgeId) -> Result<RationalExpr, ThomError> {
        let (num, den) = self.theta_factors(e)?;
        Ok(RationalExpr::from_factors(self.n(), &num, &den)?)
    }

    /// The quotient before cancellation: `rho_e` of all descending weights
    /// at `p` over `rho_e` of those at `q` other than the reversal of `e`.
    pub fn theta_uncancelled(&self, e: EdgeId) -> Result<RationalExpr, ThomError> {
        self.check_ascending(e)?;
        let q = self.graph.target(e);
        let back = self.graph.reverse(e);
        let below_q: Vec<EdgeId> = self.descending[q].iter().copied().filter(|&x| x != back).collect();
        let num = self.project(e, &self.descending[self.graph.source(e)])?;
        let den = self.project(e, &below_q)?;
        let mut expr = RationalExpr::from_polynomial(Polynomial::product_of_linear(self.n(), &num));
        for f in &den {
            expr = expr.div_linear(f)?;
        }
        Ok(expr)
    }

    /// `iota_e = Theta / alpha_e(xi)`.
    pub fn iota(&self, e: EdgeId) -> Result<Iota, ThomError> {
        let value = self.theta(e)?.scale(&self.pol.value(e).recip());
        let global = self.ascending_paths(self.graph.source(e), self.graph.target(e)).len() == 1;
        Ok(Iota { value, global })
    }

    fn hat(&self, e: EdgeId) -> LinearForm {
        self.graph.weight(e).scale(&self.pol.value(e).recip())
    }

    /// `E(gamma)` from intersection numbers:
    /// `(-1)^m nu_q iota_(e_1) / a_m * prod_(k >= 2) iota_(e_k) / (a_(k-1) - a_k)`
    /// with `a_k = alpha_(e_k) / alpha_(e_k)(xi)`.
    pub fn weight_by_intersections(&self, path: &AscendingPath) -> Result<RationalExpr, ThomError> {
        self.check_path(path)?;
        let q = path.end(self.graph);
        if path.is_empty() {
            return Ok(RationalExpr::from_polynomial(self.nu(q)));
        }
        let mut f = Factored::one();
        f.num.extend(self.graph.weights_of(&self.descending[q]).cloned());
        for (k, &e) in path.edges.iter().enumerate() {
            f.times(self.theta_factors(e)?);
            f.scale /= self.pol.value(e);
            if k > 0 {
                f.den.push(&self.hat(path.edges[k - 1]) - &self.hat(e));
            }
        }
        f.den.push(self.hat(*path.edges.last().expect("nonempty path")));
        if path.len() % 2 == 1 {
            f.scale = -f.scale;
        }
        Ok(f.finish(self.n())?)
    }

    /// `E(gamma) = Q(e_m) * prod_(i >= 2) Q(e_(i-1), e_i) * rho_(e_1)(nu_(p_0))`.
    pub fn weight_by_transfer(&self, path: &AscendingPath) -> Result<RationalExpr, ThomError> {
        self.check_path(path)?;
        let Some(&last) = path.edges.last() else {
            return Ok(RationalExpr::from_polynomial(self.nu(path.start)));
        };
        let mut f = Factored::one();
        f.num.extend(self.project(path.edges[0], &self.descending[path.start])?);
        f.times(q_edge_factors(self.graph, &self.pol, last)?);
        for w in path.edges.windows(2) {
            f.times(q_pair_factors(self.graph, &self.pol, w[0], w[1])?);
        }
        Ok(f.finish(self.n())?)
    }

    /// `E(gamma)`, computed both ways; disagreement is an error.
    pub fn path_weight(&self, path: &AscendingPath) -> Result<PathWeight, ThomError> {
        let first = self.weight_by_intersections(path)?;
        let second = self.weight_by_transfer(path)?;
        if first != second {
            return Err(ThomError::RouteMismatch {
                path: path.render(self.graph),
                first: first.to_string(),
                second: second.to_string(),
            });
        }
        Ok(PathWeight { path: path.clone(), value: first })
    }

    /// Path weights of every ascending path from `p`, grouped by end vertex.
    pub fn weights_from(&self, p: VertexId) -> Result<BTreeMap<VertexId, Vec<PathWeight>>, ThomError> {
        let weights: Vec<PathWeight> =
            self.paths_from(p).par_iter().map(|g| self.path_weight(g)).collect::<Result<_, _>>()?;
        let mut grouped: BTreeMap<VertexId, Vec<PathWeight>> = BTreeMap::new();
        for w in weights {
            grouped.entry(w.path.end(self.graph)).or_default().push(w);
        }
        Ok(grouped)
    }

    fn reduce_sum(&self, q: VertexId, weights: &[PathWeight]) -> Result<Polynomial, ThomError> {
        let total = RationalExpr::sum(self.n(), weights.iter().map(|w| &w.value));
        total
            .to_polynomial()
            .map_err(|_| ThomError::NotPolynomial { vertex: self.graph.label(q).to_string(), value: total.to_string() })
    }

    /// `tau_p0^+(q) = sum E(gamma)` over ascending paths from `p0` to `q`.
    pub fn thom_plus_paths(&self, p0: VertexId) -> Result<CohomologyClass<'g>, ThomError> {
        let grouped = self.weights_from(p0)?;
        let mut values = vec![Polynomial::zero(self.n()); self.graph.num_vertices()];
        let sums: Vec<(VertexId, Polynomial)> =
            grouped.par_iter().map(|(&q, ws)| Ok((q, self.reduce_sum(q, ws)?))).collect::<Result<_, ThomError>>()?;
        for (q, v) in sums {
            values[q] = v;
        }
        self.finish_class(p0, values)
    }

    /// Checks support, leading value, degree and the cocycle condition.
    fn finish_class(&self, p0: VertexId, values: Vec<Polynomial>) -> Result<CohomologyClass<'g>, ThomError> {
        let base = || self.graph.label(p0).to_string();
        let reach = self.flow_up(p0);
        let degree = self.pol.sigma(p0);
        for q in self.graph.vertices() {
            if values[q].is_zero() {
                continue;
            }
            if !reach[q] {
                return Err(ThomError::Support { base: base(), vertex: self.graph.label(q).to_string() });
            }
            if !values[q].is_homogeneous_of(degree as u32) {
                return Err(ThomError::Degree { base: base(), vertex: self.graph.label(q).to_string(), degree });
            }
        }
        let nu = self.nu(p0);
        if values[p0] != nu {
            return Err(ThomError::LeadingValue {
                base: base(),
                found: values[p0].to_string(),
                expected: nu.to_string(),
            });
        }
        let class = CohomologyClass::new(self.graph, values)?.with_degree(degree as u32)?;
        Ok(class)
    }

    /// The Thom class of `p0` built vertex by vertex in increasing Morse
    /// order: at `p` with descending edges `e_k` to `q_k`,
    /// `psi = sum_j prod_(k != j) alpha_(e_k) / rho_(e_j)(prod_(k != j) alpha_(e_k)) * rho_(e_j)(tau(q_j))`,
    /// checked against every congruence `psi = tau(q_k) mod alpha_(e_k)`.
    pub fn thom_plus_inductive(&self, p0: VertexId) -> Result<CohomologyClass<'g>, ThomError> {
        let n = self.n();
        let mut values = vec![Polynomial::zero(n); self.graph.num_vertices()];
        values[p0] = self.nu(p0);
        let start = self.pol.phi(p0);
        for &p in self.pol.order().iter().filter(|&&p| self.pol.phi(p) > start) {
            let down = &self.descending[p];
            if down.iter().all(|&e| values[self.graph.target(e)].is_zero()) {
                continue;
            }
            let mut terms = Vec::with_capacity(down.len());
            for &ej in down {
                let below = &values[self.graph.target(ej)];
                if below.is_zero() {
                    continue;
                }
                let rest: Vec<EdgeId> = down.iter().copied().filter(|&x| x != ej).collect();
                let num: Vec<LinearForm> = self.graph.weights_of(&rest).cloned().collect();
                let coefficient = RationalExpr::from_factors(n, &num, &self.project(ej, &rest)?)?;
                let proj = Projection::along(self.graph.weight(ej), self.pol.xi())?;
                terms.push(coefficient.mul_polynomial(&proj.apply(below)));
            }
            let psi = RationalExpr::sum(n, &terms);
            let psi = psi.to_polynomial().map_err(|_| ThomError::NotPolynomial {
                vertex: self.graph.label(p).to_string(),
                value: psi.to_string(),
            })?;
            for &ek in down {
                let diff = &psi - &values[self.graph.target(ek)];
                if diff.divides_linear(self.graph.weight(ek))?.is_none() {
                    return Err(ThomError::Congruence {
                        vertex: self.graph.label(p).to_string(),
                        edge: self.graph.edge_label(ek),
                        value: psi.to_string(),
                    });
                }
            }
            values[p] = psi;
        }
        self.finish_class(p0, values)
    }

    /// `tau_p0^-`: the path-sum class under `-xi`.
    pub fn thom_minus(&self, p0: VertexId) -> Result<CohomologyClass<'g>, ThomError> {
        self.reversed()?.thom_plus_paths(p0)
    }

    /// All ascending and descending Thom classes.
    pub fn basis(&self) -> Result<ThomBasis<'g>, ThomError> {
        let minus_side = self.reversed()?;
        let plus = self.graph.vertices().into_par_iter().map(|p| self.thom_plus_paths(p)).collect::<Result<_, _>>()?;
        let minus =
            self.graph.vertices().into_par_iter().map(|p| minus_side.thom_plus_paths(p)).collect::<Result<_, _>>()?;
        Ok(ThomBasis { plus, minus })
    }

    /// `int tau_p^+ tau_q^-`.
    pub fn pairing(&self, p: VertexId, q: VertexId) -> Result<Polynomial, ThomError> {
        let a = self.thom_plus_paths(p)?;
        let b = self.thom_minus(q)?;
        Ok(a.product(&b)?.integrate()?)
    }

    /// Path weights for every base vertex, ascending and descending, grouped
    /// by end vertex; the input to [`StructureConstants`].
    pub fn structure_constants(&self) -> Result<StructureConstants<'g>, ThomError> {
        let minus_side = self.reversed()?;
        let up = self.graph.vertices().into_par_iter().map(|p| self.weights_from(p)).collect::<Result<_, _>>()?;
        let down =
            self.graph.vertices().into_par_iter().map(|p| minus_side.weights_from(p)).collect::<Result<_, _>>()?;
        let delta = self
            .graph
            .vertices()
            .map(|t| {
                RationalExpr::from_factors(
                    self.n(),
                    &[],
                    &self.graph.weights_of(self.graph.out_edges(t)).cloned().collect::<Vec<_>>(),
                )
            })
            .collect::<Result<_, _>>()?;
        Ok(StructureConstants { graph: self.graph, up, down, delta })
    }

    /// `c_pqr = sum_t delta_t E(gamma_1) E(gamma_2) E(gamma_3)` over ascending
    /// `gamma_1: p -> t`, `gamma_2: q -> t` and descending `gamma_3: r -> t`.
    pub fn structure_constants_paths(&self, p: VertexId, q: VertexId, r: VertexId) -> Result<RationalExpr, ThomError> {
        Ok(self.structure_constants()?.get(p, q, r))
    }

    /// Coefficients `c_r` with `f = sum_r c_r tau_r^+`, peeled off in
    /// increasing Morse order.
    pub fn expand_in_thom_basis(
        &self,
        f: &CohomologyClass<'_>,
        plus: &[CohomologyClass<'_>],
    ) -> Result<BTreeMap<VertexId, Polynomial>, ThomError> {
        let mut coefficients = BTreeMap::new();
        let mut residue: Vec<Polynomial> = f.values().to_vec();
        for &r in self.pol.order() {
            if residue[r].is_zero() {
                continue;
            }
            let mut c = residue[r].clone();
            for w in self.graph.weights_of(&self.descending[r]) {
                c = c.divides_linear(w)?.ok_or_else(|| ThomError::NotInSpan {
                    vertex: self.graph.label(r).to_string(),
                    residue: residue[r].to_string(),
                    nu: self.nu(r).to_string(),
                })?;
            }
            for (v, value) in residue.iter_mut().enumerate() {
                let t = plus[r].value(v);
                if !t.is_zero() {
                    *value -= &(&c * t);
                }
            }
            debug_assert!(residue[r].is_zero());
            coefficients.insert(r, c);
        }
        Ok(coefficients)
    }
}

/// Ascending and descending Thom classes of every vertex.
#[derive(Clone, Debug)]
pub struct ThomBasis<'g> {
    pub plus: Vec<CohomologyClass<'g>>,
    pub minus: Vec<CohomologyClass<'g>>,
}

impl ThomBasis<'_> {
    /// `int tau_p^+ tau_q^-` for all `p, q`.
    pub fn pairing_matrix(&self) -> Result<Vec<Vec<Polynomial>>, ThomError> {
        self.plus
            .par_iter()
            .map(|a| self.minus.iter().map(|b| Ok(a.product(b)?.integrate()?)).collect::<Result<Vec<_>, ThomError>>())
            .collect()
    }

    /// `int tau_p^+ tau_q^+ tau_r^-`.
    pub fn triple_integral(&self, p: VertexId, q: VertexId, r: VertexId) -> Result<Polynomial, ThomError> {
        Ok(self.plus[p].product(&self.plus[q])?.product(&self.minus[r])?.integrate()?)
    }
}

/// Cached path weights for the triple sums.
#[derive(Clone, Debug)]
pub struct StructureConstants<'g> {
    graph: &'g GkmGraph,
    up: Vec<BTreeMap<VertexId, Vec<PathWeight>>>,
    down: Vec<BTreeMap<VertexId, Vec<PathWeight>>>,
    delta: Vec<RationalExpr>,
}

impl StructureConstants<'_> {
    /// Number of path triples contributing to `c_pqr`.
    pub fn configurations(&self, p: VertexId, q: VertexId, r: VertexId) -> usize {
        self.graph
            .vertices()
            .map(|t| {
                let count = |m: &BTreeMap<VertexId, Vec<PathWeight>>| m.get(&t).map_or(0, Vec::len);
                count(&self.up[p]) * count(&self.up[q]) * count(&self.down[r])
            })
            .sum()
    }

    pub fn get(&self, p: VertexId, q: VertexId, r: VertexId) -> RationalExpr {
        let n = self.graph.dimension();
        let mut terms = Vec::new();
        for t in self.graph.vertices() {
            let (Some(g1), Some(g2), Some(g3)) = (self.up[p].get(&t), self.up[q].get(&t), self.down[r].get(&t)) else {
                continue;
            };
            for a in g1 {
                let da = &self.delta[t] * &a.value;
                for b in g2 {
                    let dab = &da * &b.value;
                    for c in g3 {
                        terms.push(&dab * &c.value);
                    }
                }
            }
        }
        if terms.is_empty() {
            return RationalExpr::zero(n);
        }
        RationalExpr::sum(n, &terms)
    }
}
