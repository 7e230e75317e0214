use std::collections::HashSet;
use std::fmt;

use super::{EdgeId, GkmGraph};
use crate::symbolic::{format_rational, Rational};

/// One violated axiom, naming the offending vertex or edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    Valence { vertex: String, expected: usize, found: usize },
    WeightDimension { edge: String, expected: usize, found: usize },
    ZeroWeight { edge: String },
    ReversalMismatch { edge: String },
    ReversedWeight { edge: String },
    ParallelWeights { vertex: String, first: String, second: String },
    MissingConnection,
    ConnectionShape { edge: String },
    ConnectionNotBijective { edge: String },
    ConnectionFixesEdge { edge: String },
    ConnectionInverse { edge: String },
    Incompatible { edge: String, from: String, to: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Valence { vertex, expected, found } => {
                write!(f, "vertex {vertex}: {found} edges, expected valence {expected}")
            }
            Issue::WeightDimension { edge, expected, found } => {
                write!(f, "edge {edge}: weight has dimension {found}, expected {expected}")
            }
            Issue::ZeroWeight { edge } => write!(f, "edge {edge}: zero weight"),
            Issue::ReversalMismatch { edge } => {
                write!(f, "edge {edge}: reversal does not run between the same vertices")
            }
            Issue::ReversedWeight { edge } => {
                write!(f, "edge {edge}: weight of the reversed edge is not the negative")
            }
            Issue::ParallelWeights { vertex, first, second } => {
                write!(f, "vertex {vertex}: weights of {first} and {second} are linearly dependent")
            }
            Issue::MissingConnection => write!(f, "no connection"),
            Issue::ConnectionShape { edge } => {
                write!(f, "edge {edge}: connection does not map into the edges at the target")
            }
            Issue::ConnectionNotBijective { edge } => write!(f, "edge {edge}: connection is not a bijection"),
            Issue::ConnectionFixesEdge { edge } => {
                write!(f, "edge {edge}: connection does not send the edge to its reversal")
            }
            Issue::ConnectionInverse { edge } => {
                write!(f, "edge {edge}: connection along the reversal is not the inverse")
            }
            Issue::Incompatible { edge, from, to } => write!(
                f,
                "edge {edge}: connection sends {from} to {to}, whose weights do not differ by a multiple of the edge weight"
            ),
        }
    }
}

/// The constant `c` in `alpha(theta_e(e2)) = alpha(e2) + c alpha(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionConstant {
    pub edge: EdgeId,
    pub from: EdgeId,
    pub to: EdgeId,
    pub c: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub constants: Vec<ConnectionConstant>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn render(&self, graph: &GkmGraph) -> String {
        let mut lines: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        if lines.is_empty() {
            lines.push("ok".to_string());
        }
        let integral = self.constants.iter().all(|k| k.c.is_integer());
        if !self.constants.is_empty() && !integral {
            for k in self.constants.iter().filter(|k| !k.c.is_integer()) {
                lines.push(format!(
                    "note: non-integral connection constant {} along {} ({} -> {})",
                    format_rational(&k.c),
                    graph.edge_label(k.edge),
                    graph.edge_label(k.from),
                    graph.edge_label(k.to)
                ));
            }
        }
        lines.join("\n")
    }
}

pub fn validate(graph: &GkmGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let issues = &mut report.issues;
    for v in graph.vertices() {
        let found = graph.out_edges(v).len();
        if found != graph.valence() {
            issues.push(Issue::Valence { vertex: graph.label(v).to_string(), expected: graph.valence(), found });
        }
    }
    let mut weights_ok = true;
    for (id, e) in graph.edges().iter().enumerate() {
        let label = graph.edge_label(id);
        if e.weight.dim() != graph.dimension() {
            issues.push(Issue::WeightDimension { edge: label, expected: graph.dimension(), found: e.weight.dim() });
            weights_ok = false;
            continue;
        }
        if e.weight.is_zero() {
            issues.push(Issue::ZeroWeight { edge: label.clone() });
        }
        let Some(r) = graph.edges().get(e.reverse) else {
            issues.push(Issue::ReversalMismatch { edge: label });
            continue;
        };
        if r.source != e.target || r.target != e.source || r.reverse != id {
            issues.push(Issue::ReversalMismatch { edge: label });
            continue;
        }
        if r.weight != -&e.weight {
            issues.push(Issue::ReversedWeight { edge: label });
        }
    }
    if !weights_ok {
        return report;
    }
    for v in graph.vertices() {
        let out = graph.out_edges(v);
        for (i, &a) in out.iter().enumerate() {
            for &b in &out[i + 1..] {
                let (wa, wb) = (graph.weight(a), graph.weight(b));
                if wa.is_zero() || wb.is_zero() || wa.is_parallel(wb) {
                    issues.push(Issue::ParallelWeights {
                        vertex: graph.label(v).to_string(),
                        first: graph.edge_label(a),
                        second: graph.edge_label(b),
                    });
                }
            }
        }
    }
    check_connection(graph, &mut report);
    report
}

fn check_connection(graph: &GkmGraph, report: &mut ValidationReport) {
    let Some(table) = graph.connection_table() else {
        if graph.num_edges() > 0 {
            report.issues.push(Issue::MissingConnection);
        }
        return;
    };
    for (e, images) in table.iter().enumerate() {
        let label = graph.edge_label(e);
        let (p, q) = (graph.source(e), graph.target(e));
        let at_q: HashSet<EdgeId> = graph.out_edges(q).iter().copied().collect();
        if images.len() != graph.out_edges(p).len() || images.iter().any(|x| !at_q.contains(x)) {
            report.issues.push(Issue::ConnectionShape { edge: label });
            continue;
        }
        let distinct: HashSet<EdgeId> = images.iter().copied().collect();
        if distinct.len() != images.len() || distinct.len() != at_q.len() {
            report.issues.push(Issue::ConnectionNotBijective { edge: label.clone() });
        }
        let back = graph.reverse(e);
        if graph.theta(e, e).ok() != Some(back) {
            report.issues.push(Issue::ConnectionFixesEdge { edge: label.clone() });
        }
        for &e2 in graph.out_edges(p) {
            let image = graph.theta(e, e2).expect("shape checked above");
            if graph.theta(back, image).ok() != Some(e2) {
                report.issues.push(Issue::ConnectionInverse { edge: label.clone() });
                break;
            }
        }
        let we = graph.weight(e);
        for &e2 in graph.out_edges(p) {
            let image = graph.theta(e, e2).expect("shape checked above");
            let diff = graph.weight(image) - graph.weight(e2);
            match diff.ratio_to(we) {
                Some(c) => report.constants.push(super::ConnectionConstant { edge: e, from: e2, to: image, c }),
                None => report.issues.push(Issue::Incompatible {
                    edge: label.clone(),
                    from: graph.edge_label(e2),
                    to: graph.edge_label(image),
                }),
            }
        }
    }
}
