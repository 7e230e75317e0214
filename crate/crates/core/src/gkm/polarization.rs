use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use super::{EdgeId, GkmError, GkmGraph, VertexId};
use crate::symbolic::{rational, LinearForm, Rational};

/// A polarizing vector together with everything it determines: the
/// orientation of every edge, the indices, and a Morse function.
#[derive(Clone, Debug)]
pub struct Polarization {
    xi: Vec<Rational>,
    values: Vec<Rational>,
    sigma: Vec<usize>,
    longest: Vec<usize>,
    phi: Vec<Rational>,
    order: Vec<VertexId>,
    self_indexing: bool,
}

impl Polarization {
    pub fn xi(&self) -> &[Rational] {
        &self.xi
    }

    /// `alpha_e(xi)`.
    pub fn value(&self, e: EdgeId) -> &Rational {
        &self.values[e]
    }

    pub fn is_ascending(&self, e: EdgeId) -> bool {
        self.values[e].is_positive()
    }

    /// Number of descending edges at `p`.
    pub fn sigma(&self, p: VertexId) -> usize {
        self.sigma[p]
    }

    pub fn sigmas(&self) -> &[usize] {
        &self.sigma
    }

    /// Length of the longest ascending path ending at `p`.
    pub fn longest(&self, p: VertexId) -> usize {
        self.longest[p]
    }

    pub fn phi(&self, p: VertexId) -> &Rational {
        &self.phi[p]
    }

    /// Vertices in increasing order of the Morse function.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Whether the longest-path function equals the index everywhere.
    pub fn is_self_indexing(&self) -> bool {
        self.self_indexing
    }

    pub fn ascending_edges<'g>(&'g self, graph: &'g GkmGraph, p: VertexId) -> impl Iterator<Item = EdgeId> + 'g {
        graph.out_edges(p).iter().copied().filter(move |&e| self.is_ascending(e))
    }

    pub fn descending_edges<'g>(&'g self, graph: &'g GkmGraph, p: VertexId) -> impl Iterator<Item = EdgeId> + 'g {
        graph.out_edges(p).iter().copied().filter(move |&e| !self.is_ascending(e))
    }

    pub fn betti(&self, valence: usize) -> Vec<usize> {
        let top = self.sigma.iter().copied().max().unwrap_or(0).max(valence);
        let mut b = vec![0; top + 1];
        for &s in &self.sigma {
            b[s] += 1;
        }
        b
    }

    /// The polarization by `-xi`.
    pub fn reversed(&self, graph: &GkmGraph) -> Result<Polarization, GkmError> {
        let neg: Vec<Rational> = self.xi.iter().map(|x| -x).collect();
        orient(graph, &neg)
    }
}

/// Orients the edges by the sign of `alpha_e(xi)` and builds the
/// longest-path Morse function, tie-broken by vertex position.
pub fn orient(graph: &GkmGraph, xi: &[Rational]) -> Result<Polarization, GkmError> {
    if xi.len() != graph.dimension() {
        return Err(GkmError::DimensionMismatch { expected: graph.dimension(), found: xi.len() });
    }
    let mut values = Vec::with_capacity(graph.num_edges());
    for e in 0..graph.num_edges() {
        let v = graph.weight(e).pair(xi)?;
        if v.is_zero() {
            return Err(GkmError::NotPolarizing { edge: graph.edge_label(e) });
        }
        values.push(v);
    }
    let n = graph.num_vertices();
    let mut sigma = vec![0usize; n];
    let mut indegree = vec![0usize; n];
    for (e, edge) in graph.edges().iter().enumerate() {
        if values[e].is_positive() {
            indegree[edge.target] += 1;
        } else {
            sigma[edge.source] += 1;
        }
    }
    let mut longest = vec![0usize; n];
    let mut queue: VecDeque<VertexId> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &e in graph.out_edges(v) {
            if values[e].is_positive() {
                let w = graph.target(e);
                longest[w] = longest[w].max(longest[v] + 1);
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    if seen < n {
        let v = (0..n).find(|&v| indegree[v] > 0).expect("some vertex lies on the cycle");
        return Err(GkmError::AscendingCycle { vertex: graph.label(v).to_string() });
    }
    let denom = rational(n as i64 + 1);
    let phi: Vec<Rational> = (0..n).map(|v| rational(longest[v] as i64) + rational(v as i64) / &denom).collect();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by(|&a, &b| phi[a].cmp(&phi[b]));
    let self_indexing = longest == sigma;
    Ok(Polarization { xi: xi.to_vec(), values, sigma, longest, phi, order, self_indexing })
}

/// [`orient`], additionally requiring a single index-0 vertex in every
/// connected component.
pub fn longest_path_morse(graph: &GkmGraph, xi: &[Rational]) -> Result<Polarization, GkmError> {
    let pol = orient(graph, xi)?;
    let comp = graph.components();
    let mut minimum: Vec<Option<VertexId>> = vec![None; graph.num_vertices()];
    for v in graph.vertices() {
        if pol.sigma(v) == 0 {
            if let Some(u) = minimum[comp[v]] {
                return Err(GkmError::MultipleMinima {
                    first: graph.label(u).to_string(),
                    second: graph.label(v).to_string(),
                });
            }
            minimum[comp[v]] = Some(v);
        }
    }
    Ok(pol)
}

pub fn betti(graph: &GkmGraph, xi: &[Rational]) -> Result<Vec<usize>, GkmError> {
    Ok(orient(graph, xi)?.betti(graph.valence()))
}

/// `rho_(e2)(alpha_(e1)) / alpha_(e1)(xi)`, which equals `a1 - a2` with
/// `a = alpha / alpha(xi)`.
fn normalized_difference(graph: &GkmGraph, pol: &Polarization, e1: EdgeId, e2: EdgeId) -> LinearForm {
    let a1 = graph.weight(e1).scale(&pol.value(e1).recip());
    let a2 = graph.weight(e2).scale(&pol.value(e2).recip());
    &a1 - &a2
}

/// Whether the quantities `rho_(e2)(alpha_(e1)) / alpha_(e1)(xi)` over
/// pairs of edges at `p` coincide only where they are forced to.
pub fn check_generic(graph: &GkmGraph, pol: &Polarization, p: VertexId) -> bool {
    let out = graph.out_edges(p);
    for &e1 in out {
        for &e2 in out {
            let lhs = normalized_difference(graph, pol, e1, e2);
            for &e3 in out {
                for &e4 in out {
                    let forced = (e1 == e2 && e3 == e4) || (e1 == e3 && e2 == e4);
                    if !forced && lhs == normalized_difference(graph, pol, e3, e4) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The first integer vector, by increasing max-norm and then
/// lexicographically, that polarizes the graph without ascending cycles and
/// is generic at every vertex.
pub fn find_generic_xi(graph: &GkmGraph, max_norm: i64) -> Result<Vec<Rational>, GkmError> {
    let n = graph.dimension();
    if n == 0 {
        return Ok(Vec::new());
    }
    for m in 1..=max_norm {
        let mut v = vec![-m; n];
        loop {
            if v.iter().any(|x| x.abs() == m) {
                let xi: Vec<Rational> = v.iter().map(|&x| rational(x)).collect();
                if let Ok(pol) = orient(graph, &xi) {
                    if graph.vertices().all(|p| check_generic(graph, &pol, p)) {
                        return Ok(xi);
                    }
                }
            }
            if !advance(&mut v, m) {
                break;
            }
        }
    }
    Err(GkmError::NoGenericXi { max_norm })
}

fn advance(v: &mut [i64], m: i64) -> bool {
    for k in (0..v.len()).rev() {
        if v[k] < m {
            v[k] += 1;
            for x in &mut v[k + 1..] {
                *x = -m;
            }
            return true;
        }
    }
    false
}
