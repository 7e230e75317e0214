//! Exact equivariant cohomology of GKM graphs: Thom classes, intersection
//! numbers, localization integrals, transfer maps and structure constants.

pub mod builders;
pub mod cohomology;
pub mod crosssection;
pub mod demo;
pub mod gkm;
pub mod render;
pub mod symbolic;
pub mod thom;

pub use builders::{complete_graph, load_graph, permutahedron, BuildError, BuilderSpec};
pub use cohomology::{CohomologyClass, CohomologyError, CrossSectionClass};
pub use crosssection::{CrossSection, CrossSectionError, TransferMatrix};
pub use gkm::{EdgeId, GkmError, GkmGraph, Polarization, VertexId};
pub use render::{Basis, RenderError, Renderer};
pub use symbolic::{LinearForm, Polynomial, Rational, RationalExpr, SymbolicError};
pub use thom::{AscendingPath, PathWeight, Thom, ThomError};

/// Search bound for a polarization when the graph supplies none.
pub const XI_SEARCH_NORM: i64 = 6;

/// The polarization by `xi`, else by the graph's default, else by the first
/// generic vector found.
pub fn polarize(graph: &GkmGraph, xi: Option<&[Rational]>) -> Result<Polarization, GkmError> {
    match xi.or(graph.default_xi()) {
        Some(xi) => gkm::orient(graph, xi),
        None => gkm::orient(graph, &gkm::find_generic_xi(graph, XI_SEARCH_NORM)?),
    }
}
