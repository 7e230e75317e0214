//! Cohomology classes on a graph: the cocycle condition, the localization
//! integral, edge classes, and restriction to a cross-section.

use std::collections::BTreeMap;
use std::ops::Sub;
use std::ptr;

use rayon::prelude::*;
use thiserror::Error;

use crate::crosssection::{cross_section, CrossSectionError};
use crate::gkm::{EdgeId, GkmError, GkmGraph, Polarization, VertexId};
use crate::symbolic::{LinearForm, Polynomial, Projection, Rational, RationalExpr, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("classes live on different graphs")]
    GraphMismatch,
    #[error("{found} values for a graph with {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("value at {vertex} is a polynomial in {found} variables, expected {expected}")]
    WrongArity { vertex: String, expected: usize, found: usize },
    #[error("not a cocycle: weight of {edge} does not divide the difference (remainder {remainder})")]
    NotCocycle { edge: String, remainder: String },
    #[error("value at {vertex} is not homogeneous of degree {degree}")]
    NotHomogeneous { vertex: String, degree: u32 },
    #[error("integral does not reduce to a polynomial: {0}")]
    NotPolynomial(String),
    #[error("restriction along {edge} disagrees at its two ends")]
    KirwanMismatch { edge: String },
    #[error("restriction value at {edge} is not constant along xi")]
    NotAnnihilated { edge: String },
    #[error(transparent)]
    CrossSection(#[from] CrossSectionError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Failure witness for the cocycle condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleWitness {
    pub edge: EdgeId,
    pub remainder: Polynomial,
}

/// Checks that `alpha_e` divides `f(i(e)) - f(t(e))` for every edge.
pub fn is_cocycle(graph: &GkmGraph, values: &[Polynomial]) -> Result<(), CocycleWitness> {
    for (e, edge) in graph.edges().iter().enumerate() {
        if e > edge.reverse {
            continue;
        }
        let diff = &values[edge.source] - &values[edge.target];
        let (_, r) = diff.div_rem_linear(&edge.weight).unwrap_or_else(|_| (Polynomial::zero(diff.nvars()), diff));
        if !r.is_zero() {
            return Err(CocycleWitness { edge: e, remainder: r });
        }
    }
    Ok(())
}

/// A map from vertices to polynomials on a fixed graph.
#[derive(Clone, Debug)]
pub struct CohomologyClass<'g> {
    graph: &'g GkmGraph,
    values: Vec<Polynomial>,
    degree: Option<u32>,
}

impl<'g> CohomologyClass<'g> {
    /// Wraps values without checking the cocycle condition.
    pub fn from_values(graph: &'g GkmGraph, values: Vec<Polynomial>) -> Result<Self, CohomologyError> {
        if values.len() != graph.num_vertices() {
            return Err(CohomologyError::WrongLength { expected: graph.num_vertices(), found: values.len() });
        }
        for (v, p) in values.iter().enumerate() {
            if p.nvars() != graph.dimension() {
                return Err(CohomologyError::WrongArity {
                    vertex: graph.label(v).to_string(),
                    expected: graph.dimension(),
                    found: p.nvars(),
                });
            }
        }
        Ok(Self { graph, values, degree: None })
    }

    /// Wraps values that must satisfy the cocycle condition.
    pub fn new(graph: &'g GkmGraph, values: Vec<Polynomial>) -> Result<Self, CohomologyError> {
        let class = Self::from_values(graph, values)?;
        class.check_cocycle()?;
        Ok(class)
    }

    pub fn constant(graph: &'g GkmGraph, c: Rational) -> Self {
        let values = vec![Polynomial::constant(graph.dimension(), c); graph.num_vertices()];
        Self { graph, values, degree: Some(0) }
    }

    pub fn one(graph: &'g GkmGraph) -> Self {
        Self::constant(graph, Rational::from_integer(1.into()))
    }

    /// Declares the degree, checking that every value lies in `S^k`.
    pub fn with_degree(mut self, k: u32) -> Result<Self, CohomologyError> {
        for (v, p) in self.values.iter().enumerate() {
            if !p.is_homogeneous_of(k) {
                return Err(CohomologyError::NotHomogeneous { vertex: self.graph.label(v).to_string(), degree: k });
            }
        }
        self.degree = Some(k);
        Ok(self)
    }

    pub fn graph(&self) -> &'g GkmGraph {
        self.graph
    }

    pub fn value(&self, v: VertexId) -> &Polynomial {
        &self.values[v]
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Polynomial> {
        self.values
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    /// Vertices with a nonzero value.
    pub fn support(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| !self.values[v].is_zero()).collect()
    }

    pub fn check_cocycle(&self) -> Result<(), CohomologyError> {
        is_cocycle(self.graph, &self.values).map_err(|w| CohomologyError::NotCocycle {
            edge: self.graph.edge_label(w.edge),
            remainder: w.remainder.to_string(),
        })
    }

    pub fn is_cocycle(&self) -> bool {
        is_cocycle(self.graph, &self.values).is_ok()
    }

    fn same_graph(&self, other: &Self) -> Result<(), CohomologyError> {
        if ptr::eq(self.graph, other.graph) {
            Ok(())
        } else {
            Err(CohomologyError::GraphMismatch)
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.same_graph(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let degree = match (self.degree, other.degree) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Self { graph: self.graph, values, degree })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.same_graph(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let degree = if self.degree == other.degree { self.degree } else { None };
        Ok(Self { graph: self.graph, values, degree })
    }

    /// Multiplies every value by the same polynomial.
    pub fn scale(&self, a: &Polynomial) -> Self {
        let values = self.values.iter().map(|v| v * a).collect();
        let degree = match (self.degree, a.homogeneous_degree()) {
            (Some(k), Some(j)) => Some(k + j),
            _ => None,
        };
        Self { graph: self.graph, values, degree }
    }

    /// `sum_p f(p) / prod_(i(e) = p) alpha_e`, which must be a polynomial.
    pub fn integrate(&self) -> Result<Polynomial, CohomologyError> {
        let terms: Vec<RationalExpr> = self
            .graph
            .vertices()
            .into_par_iter()
            .map(|p| {
                let out = self.graph.out_edges(p);
                RationalExpr::new(self.values[p].clone(), self.graph.weights_of(out))
            })
            .collect::<Result<_, _>>()?;
        let total = RationalExpr::sum(self.graph.dimension(), &terms);
        total.to_polynomial().map_err(|_| CohomologyError::NotPolynomial(total.to_string()))
    }

    /// Restriction to the cross-section at the regular level `c`.
    pub fn kirwan(&self, pol: &Polarization, c: &Rational) -> Result<CrossSectionClass, CohomologyError> {
        let section = cross_section(self.graph, pol, c)?;
        let values = section
            .cut_edges
            .par_iter()
            .map(|&e| {
                let proj = Projection::along(self.graph.weight(e), pol.xi())?;
                let below = proj.apply(&self.values[self.graph.source(e)]);
                let above = proj.apply(&self.values[self.graph.target(e)]);
                if below != above {
                    return Err(CohomologyError::KirwanMismatch { edge: self.graph.edge_label(e) });
                }
                Ok((e, below))
            })
            .collect::<Result<BTreeMap<_, _>, CohomologyError>>()?;
        Ok(CrossSectionClass { level: c.clone(), values })
    }
}

impl<'g> Sub for &CohomologyClass<'g> {
    type Output = Result<CohomologyClass<'g>, CohomologyError>;

    fn sub(self, rhs: Self) -> Self::Output {
        self.same_graph(rhs)?;
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect();
        let degree = if self.degree == rhs.degree { self.degree } else { None };
        Ok(CohomologyClass { graph: self.graph, values, degree })
    }
}

/// Product of the weights at the source of `e`, other than `e` itself, as a
/// list of factors.
fn other_weights(graph: &GkmGraph, e: EdgeId) -> Vec<&LinearForm> {
    graph.out_edges(graph.source(e)).iter().filter(|&&x| x != e).map(|&x| graph.weight(x)).collect()
}

/// The class supported on the two ends of `e`: at each end, the product of
/// the weights of the other edges there.
pub fn edge_class(graph: &GkmGraph, e: EdgeId) -> CohomologyClass<'_> {
    let n = graph.dimension();
    let mut values = vec![Polynomial::zero(n); graph.num_vertices()];
    values[graph.source(e)] = Polynomial::product_of_linear(n, other_weights(graph, e));
    let back = graph.reverse(e);
    values[graph.target(e)] = Polynomial::product_of_linear(n, other_weights(graph, back));
    let degree = graph.valence().checked_sub(1).map(|d| d as u32);
    CohomologyClass { graph, values, degree }
}

/// A class on the cross-section at level `c`, keyed by the cut edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSectionClass {
    pub level: Rational,
    pub values: BTreeMap<EdgeId, Polynomial>,
}

impl CrossSectionClass {
    pub fn product(&self, other: &CrossSectionClass) -> CrossSectionClass {
        let values = self.values.iter().filter_map(|(e, a)| other.values.get(e).map(|b| (*e, a * b))).collect();
        CrossSectionClass { level: self.level.clone(), values }
    }
}

/// `sum_v F(v) / rho_e(prod_(e' != e) alpha_(e'))` over the cut edges `e`.
pub fn integrate_cross_section(
    graph: &GkmGraph,
    pol: &Polarization,
    class: &CrossSectionClass,
) -> Result<Polynomial, CohomologyError> {
    let terms: Vec<RationalExpr> = class
        .values
        .iter()
        .map(|(&e, value)| {
            let proj = Projection::along(graph.weight(e), pol.xi())?;
            let den = proj.apply_product(other_weights(graph, e));
            Ok(RationalExpr::new(value.clone(), &den)?)
        })
        .collect::<Result<_, CohomologyError>>()?;
    let total = RationalExpr::sum(graph.dimension(), &terms);
    let p = total.to_polynomial().map_err(|_| CohomologyError::NotPolynomial(total.to_string()))?;
    if !p.annihilates(pol.xi()) {
        return Err(CohomologyError::NotPolynomial(p.to_string()));
    }
    Ok(p)
}
