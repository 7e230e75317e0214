use super::{EdgeId, GkmError, GkmGraph};

/// For one edge `e`, the admissible images of every edge at its source: the
/// edges at the target whose weight differs by a multiple of `alpha_e`.
#[derive(Clone, Debug)]
pub struct ConnectionCandidates {
    pub edge: EdgeId,
    pub choices: Vec<(EdgeId, Vec<EdgeId>)>,
    /// Compatible bijections with `theta_e(e) = reverse(e)`, counted up to
    /// [`BIJECTION_CAP`].
    pub bijections: usize,
}

pub const BIJECTION_CAP: usize = 10_000;

fn count_bijections(choices: &[(EdgeId, Vec<EdgeId>)], cap: usize) -> (usize, Option<Vec<EdgeId>>) {
    fn go(
        k: usize,
        choices: &[(EdgeId, Vec<EdgeId>)],
        used: &mut Vec<EdgeId>,
        count: &mut usize,
        first: &mut Option<Vec<EdgeId>>,
        cap: usize,
    ) {
        if *count >= cap {
            return;
        }
        if k == choices.len() {
            *count += 1;
            if first.is_none() {
                *first = Some(used.clone());
            }
            return;
        }
        for &c in &choices[k].1 {
            if !used.contains(&c) {
                used.push(c);
                go(k + 1, choices, used, count, first, cap);
                used.pop();
            }
        }
    }
    let mut count = 0;
    let mut first = None;
    go(0, choices, &mut Vec::new(), &mut count, &mut first, cap);
    (count, first)
}

pub fn connection_candidates(graph: &GkmGraph) -> Vec<ConnectionCandidates> {
    (0..graph.num_edges())
        .map(|e| {
            let (p, q) = (graph.source(e), graph.target(e));
            let we = graph.weight(e);
            let choices: Vec<(EdgeId, Vec<EdgeId>)> = graph
                .out_edges(p)
                .iter()
                .map(|&e2| {
                    let options = if e2 == e {
                        vec![graph.reverse(e)]
                    } else {
                        graph
                            .out_edges(q)
                            .iter()
                            .copied()
                            .filter(|&e3| e3 != graph.reverse(e))
                            .filter(|&e3| (graph.weight(e3) - graph.weight(e2)).ratio_to(we).is_some())
                            .collect()
                    };
                    (e2, options)
                })
                .collect();
            let (bijections, _) = count_bijections(&choices, BIJECTION_CAP);
            ConnectionCandidates { edge: e, choices, bijections }
        })
        .collect()
}

/// Fills in the connection from the weights alone. Fails unless every edge
/// admits exactly one compatible bijection.
pub fn derive_connection(graph: &GkmGraph) -> Result<GkmGraph, GkmError> {
    let candidates = connection_candidates(graph);
    let mut ambiguous = Vec::new();
    let mut table = Vec::with_capacity(graph.num_edges());
    for c in &candidates {
        let (count, first) = count_bijections(&c.choices, 2);
        match count {
            0 => return Err(GkmError::NoConnection { edge: graph.edge_label(c.edge) }),
            1 => table.push(first.expect("one bijection was found")),
            _ => ambiguous.push(c),
        }
    }
    if !ambiguous.is_empty() {
        let mut lines = Vec::new();
        for c in ambiguous {
            let count = if c.bijections >= BIJECTION_CAP {
                format!("at least {BIJECTION_CAP}")
            } else {
                c.bijections.to_string()
            };
            lines.push(format!("edge {}: {count} compatible bijections", graph.edge_label(c.edge)));
            for (e2, options) in &c.choices {
                let opts: Vec<String> = options.iter().map(|&x| graph.edge_label(x)).collect();
                lines.push(format!("  {} -> {{{}}}", graph.edge_label(*e2), opts.join(", ")));
            }
        }
        return Err(GkmError::AmbiguousConnection(lines.join("\n")));
    }
    let mut g = graph.clone();
    g.set_connection(table);
    Ok(g)
}
