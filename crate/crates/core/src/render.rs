//! Text rendering of polynomials, rational expressions and classes, either
//! in the coordinates `x1..xn` or in the simple roots `a_k = x_(k+1) - x_k`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cohomology::CohomologyClass;
use crate::gkm::{DisplayBasis, GkmGraph};
use crate::symbolic::{coordinate_names, LinearForm, Polynomial, Rational, RationalExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{0} is not a polynomial in the simple roots")]
    NotInRootSpan(String),
    #[error("unknown basis '{0}': expected auto, coords or roots")]
    UnknownBasis(String),
}

/// Requested output basis. `Auto` uses the graph's preferred basis and
/// falls back to coordinates for values the roots cannot express.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Basis {
    #[default]
    Auto,
    Coordinates,
    Roots,
}

impl FromStr for Basis {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Basis::Auto),
            "coords" | "coordinates" | "x" => Ok(Basis::Coordinates),
            "roots" | "alpha" => Ok(Basis::Roots),
            _ => Err(RenderError::UnknownBasis(s.to_string())),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Auto => "auto",
            Basis::Coordinates => "coords",
            Basis::Roots => "roots",
        })
    }
}

pub fn root_names(n: usize) -> Vec<String> {
    (1..n).map(|k| format!("a{k}")).collect()
}

/// Rewrites `p(x1..xn)` in the simple roots, provided `p` depends only on
/// coordinate differences.
pub fn to_roots(p: &Polynomial) -> Option<Polynomial> {
    let n = p.nvars();
    if n == 0 {
        return Some(p.clone());
    }
    let m = n - 1;
    // x1 -> 0, x_(k+1) -> a1 + ... + ak
    let images: Vec<Polynomial> =
        (0..n).map(|i| (0..i).fold(Polynomial::zero(m), |acc, k| &acc + &Polynomial::variable(m, k))).collect();
    let q = p.substitute(&images);
    let back: Vec<Polynomial> = (0..m).map(|k| &Polynomial::variable(n, k + 1) - &Polynomial::variable(n, k)).collect();
    let restored =
        if m == 0 { Polynomial::constant(n, q.as_constant().unwrap_or_default()) } else { q.substitute(&back) };
    (restored == *p).then_some(q)
}

/// Coefficients on `a1..a(n-1)` of a form whose coefficients sum to zero.
pub fn form_to_roots(form: &LinearForm) -> Option<LinearForm> {
    let c = form.coeffs();
    let total: Rational = c.iter().sum();
    if total != Rational::default() {
        return None;
    }
    let coeffs = (0..c.len().saturating_sub(1)).map(|k| c[k + 1..].iter().sum()).collect();
    Some(LinearForm::new(coeffs))
}

fn rational_to_roots(r: &RationalExpr) -> Option<RationalExpr> {
    let num = to_roots(r.numerator())?;
    let mut factors = Vec::new();
    for (f, &k) in r.denominator() {
        let g = form_to_roots(f)?;
        factors.extend(std::iter::repeat_n(g, k as usize));
    }
    RationalExpr::new(num, &factors).ok()
}

/// Renders values for one graph in one basis.
#[derive(Clone, Copy, Debug)]
pub struct Renderer {
    basis: Basis,
    n: usize,
}

impl Renderer {
    pub fn new(graph: &GkmGraph, basis: Basis) -> Self {
        let basis = match basis {
            Basis::Auto if graph.display_basis() == DisplayBasis::SimpleRoots => Basis::Auto,
            Basis::Auto => Basis::Coordinates,
            b => b,
        };
        Self { basis, n: graph.dimension() }
    }

    pub fn polynomial(&self, p: &Polynomial) -> Result<String, RenderError> {
        match self.basis {
            Basis::Coordinates => Ok(p.render(&coordinate_names(self.n))),
            Basis::Roots => to_roots(p)
                .map(|q| q.render(&root_names(self.n)))
                .ok_or_else(|| RenderError::NotInRootSpan(p.to_string())),
            Basis::Auto => Ok(match to_roots(p) {
                Some(q) => q.render(&root_names(self.n)),
                None => p.render(&coordinate_names(self.n)),
            }),
        }
    }

    pub fn rational(&self, r: &RationalExpr) -> Result<String, RenderError> {
        match self.basis {
            Basis::Coordinates => Ok(r.render(&coordinate_names(self.n))),
            Basis::Roots => rational_to_roots(r)
                .map(|q| q.render(&root_names(self.n)))
                .ok_or_else(|| RenderError::NotInRootSpan(r.to_string())),
            Basis::Auto => Ok(match rational_to_roots(r) {
                Some(q) => q.render(&root_names(self.n)),
                None => r.render(&coordinate_names(self.n)),
            }),
        }
    }

    /// One `label: value` line per vertex.
    pub fn class(&self, class: &CohomologyClass<'_>) -> Result<String, RenderError> {
        let g = class.graph();
        let mut out = String::new();
        for v in g.vertices() {
            out.push_str(&format!("{}: {}\n", g.label(v), self.polynomial(class.value(v))?));
        }
        Ok(out)
    }

    /// Vertex label to rendered value.
    pub fn class_json(&self, class: &CohomologyClass<'_>) -> Result<serde_json::Value, RenderError> {
        let g = class.graph();
        let mut map = serde_json::Map::new();
        for v in g.vertices() {
            map.insert(g.label(v).to_string(), self.polynomial(class.value(v))?.into());
        }
        Ok(serde_json::Value::Object(map))
    }

    /// Rows are evaluation vertices and columns the classes, cells separated
    /// by `" | "`.
    pub fn table(&self, graph: &GkmGraph, classes: &[CohomologyClass<'_>]) -> Result<String, RenderError> {
        let mut out = String::from("vertex");
        for v in graph.vertices() {
            out.push_str(&format!(" | tau_{}", graph.label(v)));
        }
        out.push('\n');
        for q in graph.vertices() {
            out.push_str(graph.label(q));
            for class in classes {
                out.push_str(" | ");
                out.push_str(&self.polynomial(class.value(q))?);
            }
            out.push('\n');
        }
        Ok(out)
    }
}
