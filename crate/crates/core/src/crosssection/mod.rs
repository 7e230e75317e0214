//! Level sets of the Morse function: cut edges, the flip-flop transfer
//! matrices between levels, and transport of classes across them.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::cohomology::CrossSectionClass;
use crate::gkm::{check_generic, EdgeId, GkmGraph, Polarization, VertexId};
use crate::symbolic::{
    format_rational, rational, LinearForm, Polynomial, Projection, Rational, RationalExpr, SymbolicError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossSectionError {
    #[error("level {level} is critical: it is the Morse value of {vertex}")]
    CriticalLevel { level: String, vertex: String },
    #[error("expected exactly one critical value between the levels, found {found}")]
    NotSingleStep { found: usize },
    #[error("levels must increase: {from} >= {to}")]
    Order { from: String, to: String },
    #[error("class lives at level {found}, expected {expected}")]
    WrongLevel { expected: String, found: String },
    #[error("transported value at {edge} is not a polynomial: {value}")]
    NotPolynomial { edge: String, value: String },
    #[error("matrix product and path sum disagree at ({source_edge}, {target_edge})")]
    PathFormMismatch { source_edge: String, target_edge: String },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// The edges crossing the level `c` of the Morse function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSection {
    pub level: Rational,
    /// Ascending edges `e` with `phi(i(e)) < c < phi(t(e))`, by edge id.
    pub cut_edges: Vec<EdgeId>,
}

impl CrossSection {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.cut_edges.binary_search(&e).is_ok()
    }
}

fn check_regular(graph: &GkmGraph, pol: &Polarization, c: &Rational) -> Result<(), CrossSectionError> {
    match graph.vertices().find(|&p| pol.phi(p) == c) {
        Some(p) => {
            Err(CrossSectionError::CriticalLevel { level: format_rational(c), vertex: graph.label(p).to_string() })
        }
        None => Ok(()),
    }
}

pub fn cross_section(graph: &GkmGraph, pol: &Polarization, c: &Rational) -> Result<CrossSection, CrossSectionError> {
    check_regular(graph, pol, c)?;
    let cut_edges = (0..graph.num_edges())
        .filter(|&e| pol.is_ascending(e) && pol.phi(graph.source(e)) < c && c < pol.phi(graph.target(e)))
        .collect();
    Ok(CrossSection { level: c.clone(), cut_edges })
}

/// One regular value in every chamber: below the minimum, midpoints between
/// consecutive critical values, and above the maximum.
pub fn regular_values(pol: &Polarization) -> Vec<Rational> {
    let phis: Vec<&Rational> = pol.order().iter().map(|&p| pol.phi(p)).collect();
    let (Some(first), Some(last)) = (phis.first(), phis.last()) else {
        return vec![rational(0)];
    };
    let mut out = vec![*first - rational(1)];
    for w in phis.windows(2) {
        out.push((w[0] + w[1]) / rational(2));
    }
    out.push(*last + rational(1));
    out
}

/// The regular values just below and just above `phi(p)`.
pub fn levels_around(pol: &Polarization, p: VertexId) -> (Rational, Rational) {
    let values = regular_values(pol);
    let phi = pol.phi(p);
    let below = values.iter().filter(|c| *c < phi).max().cloned().expect("a level lies below every vertex");
    let above = values.iter().filter(|c| *c > phi).min().cloned().expect("a level lies above every vertex");
    (below, above)
}

/// Descending edges at `t(e)` other than the reversal of `e`.
fn others_below(graph: &GkmGraph, pol: &Polarization, e: EdgeId) -> Vec<EdgeId> {
    let back = graph.reverse(e);
    pol.descending_edges(graph, graph.target(e)).filter(|&x| x != back).collect()
}

fn projected(
    graph: &GkmGraph,
    pol: &Polarization,
    along: EdgeId,
    edges: &[EdgeId],
) -> Result<Vec<LinearForm>, SymbolicError> {
    let proj = Projection::along(graph.weight(along), pol.xi())?;
    Ok(proj.apply_product(graph.weights_of(edges)))
}

/// Numerator and denominator factors of `Q(e, e2)` for `t(e) = i(e2)`:
/// with `R` the product of the weights of the descending edges at `t(e)`
/// other than the reversal of `e`, the quotient `rho_(e2)(R) / rho_e(R)`.
pub(crate) fn q_pair_factors(
    graph: &GkmGraph,
    pol: &Polarization,
    e: EdgeId,
    e2: EdgeId,
) -> Result<(Vec<LinearForm>, Vec<LinearForm>), SymbolicError> {
    let rest = others_below(graph, pol, e);
    Ok((projected(graph, pol, e2, &rest)?, projected(graph, pol, e, &rest)?))
}

/// Factors of `Q(e) = R / rho_e(R)` with `R` as in [`q_pair`].
pub(crate) fn q_edge_factors(
    graph: &GkmGraph,
    pol: &Polarization,
    e: EdgeId,
) -> Result<(Vec<LinearForm>, Vec<LinearForm>), SymbolicError> {
    let rest = others_below(graph, pol, e);
    let num: Vec<LinearForm> = graph.weights_of(&rest).cloned().collect();
    Ok((num, projected(graph, pol, e, &rest)?))
}

/// `Q(e, e2) = rho_(e2)(R) / rho_e(R)`, where `R` is the product of the
/// weights of the descending edges at `t(e) = i(e2)` other than the
/// reversal of `e`.
pub fn q_pair(graph: &GkmGraph, pol: &Polarization, e: EdgeId, e2: EdgeId) -> Result<RationalExpr, SymbolicError> {
    let (num, den) = q_pair_factors(graph, pol, e, e2)?;
    RationalExpr::from_factors(graph.dimension(), &num, &den)
}

/// `Q(e) = R / rho_e(R)` with `R` as in [`q_pair`].
pub fn q_edge(graph: &GkmGraph, pol: &Polarization, e: EdgeId) -> Result<RationalExpr, SymbolicError> {
    let (num, den) = q_edge_factors(graph, pol, e)?;
    RationalExpr::from_factors(graph.dimension(), &num, &den)
}

/// Matrix entries `T(v, w)` for `v` cut at the lower level and `w` at the
/// upper one; absent entries are zero.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub source: CrossSection,
    pub target: CrossSection,
    pub entries: BTreeMap<(EdgeId, EdgeId), RationalExpr>,
    /// Vertices crossed whose polarization is not generic; the quotient
    /// formula does not need genericity, so this is informational.
    pub non_generic: Vec<VertexId>,
}

impl TransferMatrix {
    fn identity(section: CrossSection, nvars: usize) -> Self {
        let entries = section.cut_edges.iter().map(|&e| ((e, e), RationalExpr::one(nvars))).collect();
        Self { source: section.clone(), target: section, entries, non_generic: Vec::new() }
    }

    pub fn entry(&self, v: EdgeId, w: EdgeId, nvars: usize) -> RationalExpr {
        self.entries.get(&(v, w)).cloned().unwrap_or_else(|| RationalExpr::zero(nvars))
    }

    /// `sum_v T(v, w)` for every target `w`.
    pub fn column_sums(&self, nvars: usize) -> BTreeMap<EdgeId, RationalExpr> {
        self.target
            .cut_edges
            .iter()
            .map(|&w| {
                let column: Vec<&RationalExpr> =
                    self.source.cut_edges.iter().filter_map(|&v| self.entries.get(&(v, w))).collect();
                (w, RationalExpr::sum(nvars, column))
            })
            .collect()
    }

    /// Target edges whose column does not sum to one.
    pub fn markov_defects(&self, nvars: usize) -> Vec<EdgeId> {
        let one = RationalExpr::one(nvars);
        self.column_sums(nvars).into_iter().filter(|(_, s)| *s != one).map(|(w, _)| w).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TransferMatrix, nvars: usize) -> TransferMatrix {
        let mut entries = BTreeMap::new();
        for &v in &self.source.cut_edges {
            for &w in &next.target.cut_edges {
                let terms: Vec<RationalExpr> = self
                    .target
                    .cut_edges
                    .iter()
                    .filter_map(|&u| match (self.entries.get(&(v, u)), next.entries.get(&(u, w))) {
                        (Some(a), Some(b)) => Some(a * b),
                        _ => None,
                    })
                    .collect();
                if !terms.is_empty() {
                    let s = RationalExpr::sum(nvars, &terms);
                    if !s.is_zero() {
                        entries.insert((v, w), s);
                    }
                }
            }
        }
        let mut non_generic = self.non_generic.clone();
        non_generic.extend(&next.non_generic);
        TransferMatrix { source: self.source.clone(), target: next.target.clone(), entries, non_generic }
    }
}

fn critical_between(pol: &Polarization, c: &Rational, c2: &Rational) -> Vec<VertexId> {
    pol.order().iter().copied().filter(|&p| c < pol.phi(p) && pol.phi(p) < c2).collect()
}

/// The transfer across the single vertex `p` between `c` and `c2`:
/// identity on persisting edges and
/// `T(j, a) = rho_(e_a)(prod_(k != j) alpha_(e_k)) / rho_(e_j)(prod_(k != j) alpha_(e_k))`
/// from the reversal of the descending edge `e_j` to the ascending `e_a`.
pub fn single_step_transfer(
    graph: &GkmGraph,
    pol: &Polarization,
    c: &Rational,
    c2: &Rational,
) -> Result<TransferMatrix, CrossSectionError> {
    if c >= c2 {
        return Err(CrossSectionError::Order { from: format_rational(c), to: format_rational(c2) });
    }
    let source = cross_section(graph, pol, c)?;
    let target = cross_section(graph, pol, c2)?;
    let crossed = critical_between(pol, c, c2);
    let [p] = crossed[..] else {
        return Err(CrossSectionError::NotSingleStep { found: crossed.len() });
    };
    let n = graph.dimension();
    let mut entries = BTreeMap::new();
    for &e in &source.cut_edges {
        if target.contains(e) {
            entries.insert((e, e), RationalExpr::one(n));
        }
    }
    let descending: Vec<EdgeId> = pol.descending_edges(graph, p).collect();
    let ascending: Vec<EdgeId> = pol.ascending_edges(graph, p).collect();
    let block: Vec<((EdgeId, EdgeId), RationalExpr)> = descending
        .par_iter()
        .enumerate()
        .flat_map_iter(|(j, &ej)| {
            let rest: Vec<EdgeId> = descending.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
            ascending
                .iter()
                .map(move |&ea| {
                    let entry = RationalExpr::from_factors(
                        n,
                        &projected(graph, pol, ea, &rest)?,
                        &projected(graph, pol, ej, &rest)?,
                    )?;
                    Ok(((graph.reverse(ej), ea), entry))
                })
                .collect::<Vec<Result<_, SymbolicError>>>()
        })
        .collect::<Result<_, _>>()?;
    entries.extend(block);
    let non_generic = if check_generic(graph, pol, p) { Vec::new() } else { vec![p] };
    Ok(TransferMatrix { source, target, entries, non_generic })
}

/// `sum_gamma Q(gamma)` over ascending paths from `v` (cut at `c`) to the
/// edges cut at `c2`.
fn path_form(
    graph: &GkmGraph,
    pol: &Polarization,
    v: EdgeId,
    c2: &Rational,
) -> Result<BTreeMap<EdgeId, RationalExpr>, SymbolicError> {
    let n = graph.dimension();
    let mut sums: BTreeMap<EdgeId, Vec<RationalExpr>> = BTreeMap::new();
    let mut stack = vec![(v, RationalExpr::one(n))];
    while let Some((e, weight)) = stack.pop() {
        let q = graph.target(e);
        if pol.phi(q) > c2 {
            sums.entry(e).or_default().push(weight);
            continue;
        }
        for e2 in pol.ascending_edges(graph, q) {
            let w = &weight * &q_pair(graph, pol, e, e2)?;
            stack.push((e2, w));
        }
    }
    Ok(sums.into_iter().map(|(w, terms)| (w, RationalExpr::sum(n, &terms))).collect())
}

/// The transfer from `c` to `c2` as a product of single steps, checked
/// entrywise against the weighted sum over ascending paths.
pub fn compose_transfer(
    graph: &GkmGraph,
    pol: &Polarization,
    c: &Rational,
    c2: &Rational,
) -> Result<TransferMatrix, CrossSectionError> {
    if c > c2 {
        return Err(CrossSectionError::Order { from: format_rational(c), to: format_rational(c2) });
    }
    let n = graph.dimension();
    let start = cross_section(graph, pol, c)?;
    check_regular(graph, pol, c2)?;
    let crossed = critical_between(pol, c, c2);
    let mut levels = vec![c.clone()];
    for w in crossed.windows(2) {
        levels.push((pol.phi(w[0]) + pol.phi(w[1])) / rational(2));
    }
    levels.push(c2.clone());
    let mut total = TransferMatrix::identity(start, n);
    if crossed.is_empty() {
        return Ok(total);
    }
    for pair in levels.windows(2) {
        let step = single_step_transfer(graph, pol, &pair[0], &pair[1])?;
        total = total.then(&step, n);
    }
    let sources = total.source.cut_edges.clone();
    let path_rows: Vec<(EdgeId, BTreeMap<EdgeId, RationalExpr>)> =
        sources.par_iter().map(|&v| Ok((v, path_form(graph, pol, v, c2)?))).collect::<Result<_, SymbolicError>>()?;
    for (v, row) in path_rows {
        let targets: BTreeSet<EdgeId> =
            row.keys().copied().chain(total.entries.keys().filter(|(a, _)| *a == v).map(|&(_, b)| b)).collect();
        for w in targets {
            let by_paths = row.get(&w).cloned().unwrap_or_else(|| RationalExpr::zero(n));
            if by_paths != total.entry(v, w, n) {
                return Err(CrossSectionError::PathFormMismatch {
                    source_edge: graph.edge_label(v),
                    target_edge: graph.edge_label(w),
                });
            }
        }
    }
    Ok(total)
}

/// Applies the transfer from the level of `class` up to `c2`.
pub fn transport_class(
    graph: &GkmGraph,
    pol: &Polarization,
    class: &CrossSectionClass,
    c2: &Rational,
) -> Result<CrossSectionClass, CrossSectionError> {
    let t = compose_transfer(graph, pol, &class.level, c2)?;
    apply_transfer(graph, &t, class)
}

pub fn apply_transfer(
    graph: &GkmGraph,
    t: &TransferMatrix,
    class: &CrossSectionClass,
) -> Result<CrossSectionClass, CrossSectionError> {
    if class.level != t.source.level {
        return Err(CrossSectionError::WrongLevel {
            expected: format_rational(&t.source.level),
            found: format_rational(&class.level),
        });
    }
    let n = graph.dimension();
    let mut values = BTreeMap::new();
    for &w in &t.target.cut_edges {
        let terms: Vec<RationalExpr> = t
            .source
            .cut_edges
            .iter()
            .filter_map(|&v| {
                let f = class.values.get(&v)?;
                t.entries.get(&(v, w)).map(|tv| tv.mul_polynomial(f))
            })
            .collect();
        let s = RationalExpr::sum(n, &terms);
        let p = s
            .to_polynomial()
            .map_err(|_| CrossSectionError::NotPolynomial { edge: graph.edge_label(w), value: s.to_string() })?;
        values.insert(w, p);
    }
    Ok(CrossSectionClass { level: t.target.level.clone(), values })
}

/// The restriction of the Thom class of `p0` to the level just above it:
/// `rho_(e_a)` of the product of the descending weights at `p0`, on each
/// ascending edge `e_a` out of `p0`, and zero on other cut edges.
pub fn thom_seed(graph: &GkmGraph, pol: &Polarization, p0: VertexId) -> Result<CrossSectionClass, CrossSectionError> {
    let (_, c) = levels_around(pol, p0);
    let section = cross_section(graph, pol, &c)?;
    let n = graph.dimension();
    let down: Vec<EdgeId> = pol.descending_edges(graph, p0).collect();
    let mut values = BTreeMap::new();
    for &e in &section.cut_edges {
        let v = if graph.source(e) == p0 {
            let proj = Projection::along(graph.weight(e), pol.xi())?;
            Polynomial::product_of_linear(n, &proj.apply_product(graph.weights_of(&down)))
        } else {
            Polynomial::zero(n)
        };
        values.insert(e, v);
    }
    Ok(CrossSectionClass { level: c, values })
}

/// The flip-flop polynomial at `p`:
/// `sum_j prod_(k != j) alpha_(e_k) / rho_(e_j)(prod_(k != j) alpha_(e_k)) * f(j)`
/// over the descending edges `e_j` at `p`, where `f(j)` is the value on the
/// cut edge reversing `e_j`.
pub fn flip_flop_polynomial(
    graph: &GkmGraph,
    pol: &Polarization,
    p: VertexId,
    values: &BTreeMap<EdgeId, Polynomial>,
) -> Result<RationalExpr, SymbolicError> {
    let n = graph.dimension();
    let descending: Vec<EdgeId> = pol.descending_edges(graph, p).collect();
    let mut terms = Vec::with_capacity(descending.len());
    for (j, &ej) in descending.iter().enumerate() {
        let Some(f) = values.get(&graph.reverse(ej)) else {
            continue;
        };
        let rest: Vec<EdgeId> = descending.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
        let num: Vec<LinearForm> = graph.weights_of(&rest).cloned().collect();
        let coefficient = RationalExpr::from_factors(n, &num, &projected(graph, pol, ej, &rest)?)?;
        terms.push(coefficient.mul_polynomial(f));
    }
    Ok(RationalExpr::sum(n, &terms))
}

/// The Thom class of `p0` obtained by seeding just above `p0` and sweeping
/// the flip-flops upward: the value at each higher vertex is the flip-flop
/// polynomial of the transported seed.
pub fn thom_by_transfer(
    graph: &GkmGraph,
    pol: &Polarization,
    p0: VertexId,
) -> Result<Vec<Polynomial>, CrossSectionError> {
    let n = graph.dimension();
    let mut values = vec![Polynomial::zero(n); graph.num_vertices()];
    let down: Vec<EdgeId> = pol.descending_edges(graph, p0).collect();
    values[p0] = Polynomial::product_of_linear(n, graph.weights_of(&down));
    let mut current = thom_seed(graph, pol, p0)?;
    for &p in pol.order().iter().filter(|&&p| pol.phi(p) > pol.phi(p0)) {
        let (below, above) = levels_around(pol, p);
        if current.level != below {
            let t = compose_transfer(graph, pol, &current.level, &below)?;
            current = apply_transfer(graph, &t, &current)?;
        }
        let psi = flip_flop_polynomial(graph, pol, p, &current.values)?;
        values[p] = psi.to_polynomial().map_err(|_| CrossSectionError::NotPolynomial {
            edge: graph.label(p).to_string(),
            value: psi.to_string(),
        })?;
        let step = single_step_transfer(graph, pol, &below, &above)?;
        current = apply_transfer(graph, &step, &current)?;
    }
    Ok(values)
}
