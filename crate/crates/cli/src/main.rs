use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gkm_core::builders::{parse_graph_unvalidated, BuilderSpec};
use gkm_core::cohomology::CohomologyClass;
use gkm_core::crosssection::{
    compose_transfer, regular_values, single_step_transfer, thom_by_transfer, TransferMatrix,
};
use gkm_core::gkm::{validate, GkmGraph, VertexId};
use gkm_core::symbolic::{format_rational, parse_rational, Rational};
use gkm_core::{demo, polarize, Basis, Renderer, Thom};

const THREADS_VAR: &str = "GKM_THREADS";

#[derive(Parser)]
#[command(name = "gkm", version, about = "Equivariant cohomology of GKM graphs in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph axioms and report every violation.
    Validate(Common),
    /// Betti numbers from the index of each vertex.
    Betti(Common),
    /// One Thom class, listed vertex by vertex.
    Thom {
        #[command(flatten)]
        common: Common,
        /// Base vertex, by name or label.
        #[arg(long)]
        vertex: String,
        /// The descending class instead of the ascending one.
        #[arg(long)]
        minus: bool,
        #[arg(long, value_enum, default_value_t = Method::Paths)]
        method: Method,
    },
    /// All Thom classes: rows are vertices, columns are classes.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        minus: bool,
    },
    /// Integrals of the products of ascending and descending Thom classes.
    Pair(Common),
    /// Structure constants of the ascending Thom basis.
    Structconst {
        #[command(flatten)]
        common: Common,
        /// A single constant c(p, q, r) instead of all nonzero ones.
        #[arg(long, num_args = 3, value_names = ["P", "Q", "R"])]
        triple: Option<Vec<String>>,
    },
    /// Transfer matrices between cross-sections.
    Transfer {
        #[command(flatten)]
        common: Common,
        /// Lower level; defaults to one matrix per critical value.
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Integral of a product of Thom classes.
    Integrate {
        #[command(flatten)]
        common: Common,
        /// Base vertex of an ascending class factor; repeatable.
        #[arg(long)]
        vertex: Vec<String>,
        /// Base vertex of a descending class factor; repeatable.
        #[arg(long)]
        dual: Vec<String>,
    },
    /// Recompute the worked examples and report each check.
    Demo {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// complete:N, permutahedron:N or a graph file.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    graph: Option<String>,
    /// Graph file.
    #[arg(long)]
    file: Option<String>,
    /// Polarization as comma-separated rationals, e.g. 1,2,3 or 1/2,-1.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// auto, coords or roots.
    #[arg(long, default_value = "auto")]
    basis: Basis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Paths,
    Inductive,
    Transfer,
}

/// Rendered output and whether every check it reports passed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn parse_xi(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim()).with_context(|| format!("bad xi entry '{t}'"))).collect()
}

impl Common {
    fn spec(&self) -> Result<BuilderSpec> {
        let mut spec = match (&self.graph, &self.file) {
            (Some(g), _) => g.parse::<BuilderSpec>()?,
            (None, Some(f)) => BuilderSpec::file(f),
            (None, None) => bail!("no graph given"),
        };
        spec.xi = self.xi.as_deref().map(parse_xi).transpose()?;
        Ok(spec)
    }

    fn load(&self) -> Result<GkmGraph> {
        Ok(self.spec()?.build()?)
    }
}

fn thom_for(graph: &GkmGraph) -> Result<Thom<'_>> {
    Ok(Thom::new(graph, polarize(graph, None)?))
}

fn lookup(graph: &GkmGraph, key: &str) -> Result<VertexId> {
    Ok(graph.vertex(key)?)
}

fn class_of<'g>(th: &Thom<'g>, p: VertexId, minus: bool) -> Result<CohomologyClass<'g>> {
    Ok(if minus { th.thom_minus(p)? } else { th.thom_plus_paths(p)? })
}

fn grid(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let mut out = header.join(" | ");
    out.push('\n');
    for (label, cells) in rows {
        out.push_str(label);
        for c in cells {
            out.push_str(" | ");
            out.push_str(c);
        }
        out.push('\n');
    }
    out
}

fn cmd_validate(common: &Common) -> Result<Report> {
    let graph = match (&common.graph, &common.file) {
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
            parse_graph_unvalidated(&text)?
        }
        _ => common.load()?,
    };
    let report = validate(&graph);
    let issues: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
    let mut text = report.render(&graph);
    text.push('\n');
    Ok(Report { text, json: json!({ "ok": report.is_ok(), "issues": issues }), ok: report.is_ok() })
}

fn cmd_betti(common: &Common) -> Result<Report> {
    let graph = common.load()?;
    let betti = polarize(&graph, None)?.betti(graph.valence());
    let line: Vec<String> = betti.iter().map(ToString::to_string).collect();
    Ok(Report::ok(format!("{}\n", line.join(" ")), json!(betti)))
}

fn cmd_thom(common: &Common, vertex: &str, minus: bool, method: Method) -> Result<Report> {
    let graph = common.load()?;
    let th = thom_for(&graph)?;
    let p = lookup(&graph, vertex)?;
    let class = match (minus, method) {
        (true, Method::Paths) => th.thom_minus(p)?,
        (true, _) => {
            let down = th.reversed()?;
            match method {
                Method::Inductive => down.thom_plus_inductive(p)?,
                _ => CohomologyClass::new(&graph, thom_by_transfer(&graph, down.polarization(), p)?)?,
            }
        }
        (false, Method::Paths) => th.thom_plus_paths(p)?,
        (false, Method::Inductive) => th.thom_plus_inductive(p)?,
        (false, Method::Transfer) => CohomologyClass::new(&graph, thom_by_transfer(&graph, th.polarization(), p)?)?,
    };
    let r = Renderer::new(&graph, common.basis);
    Ok(Report::ok(r.class(&class)?, r.class_json(&class)?))
}

fn cmd_table(common: &Common, minus: bool) -> Result<Report> {
    let graph = common.load()?;
    let th = thom_for(&graph)?;
    let classes = graph.vertices().map(|p| class_of(&th, p, minus)).collect::<Result<Vec<_>>>()?;
    let r = Renderer::new(&graph, common.basis);
    let mut rows = serde_json::Map::new();
    for q in graph.vertices() {
        let mut row = serde_json::Map::new();
        for (p, c) in graph.vertices().zip(&classes) {
            row.insert(format!("tau_{}", graph.label(p)), r.polynomial(c.value(q))?.into());
        }
        rows.insert(graph.label(q).to_string(), row.into());
    }
    Ok(Report::ok(r.table(&graph, &classes)?, rows.into()))
}

fn cmd_pair(common: &Common) -> Result<Report> {
    let graph = common.load()?;
    let th = thom_for(&graph)?;
    let matrix = th.basis()?.pairing_matrix()?;
    let r = Renderer::new(&graph, common.basis);
    let mut header = vec!["plus \\ minus".to_string()];
    header.extend(graph.vertices().map(|q| graph.label(q).to_string()));
    let mut rows = Vec::new();
    let mut json_rows = serde_json::Map::new();
    let mut identity = true;
    for (p, row) in matrix.iter().enumerate() {
        let cells = row.iter().map(|v| r.polynomial(v)).collect::<Result<Vec<_>, _>>()?;
        identity &= row.iter().enumerate().all(|(q, v)| if p == q { v.is_one() } else { v.is_zero() });
        json_rows.insert(graph.label(p).to_string(), json!(cells));
        rows.push((graph.label(p).to_string(), cells));
    }
    Ok(Report { text: grid(&header, &rows), json: json!({ "identity": identity, "rows": json_rows }), ok: identity })
}

fn cmd_structconst(common: &Common, triple: Option<&[String]>) -> Result<Report> {
    let graph = common.load()?;
    let th = thom_for(&graph)?;
    let r = Renderer::new(&graph, common.basis);
    let sc = th.structure_constants()?;
    let triples: Vec<[VertexId; 3]> = match triple {
        Some(t) => vec![[lookup(&graph, &t[0])?, lookup(&graph, &t[1])?, lookup(&graph, &t[2])?]],
        None => {
            let mut all = Vec::new();
            for p in graph.vertices() {
                for q in graph.vertices() {
                    all.extend(graph.vertices().map(|s| [p, q, s]));
                }
            }
            all
        }
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    for [p, q, s] in triples {
        let c = sc.get(p, q, s);
        if triple.is_none() && c.is_zero() {
            continue;
        }
        let labels = [graph.label(p), graph.label(q), graph.label(s)];
        let value = r.rational(&c)?;
        text.push_str(&format!("c({}, {}, {}) = {value}\n", labels[0], labels[1], labels[2]));
        entries.push(json!({ "p": labels[0], "q": labels[1], "r": labels[2], "value": value }));
    }
    Ok(Report::ok(text, json!(entries)))
}

fn render_transfer(graph: &GkmGraph, r: &Renderer, t: &TransferMatrix) -> Result<(String, Value)> {
    let n = graph.dimension();
    let crossed: Vec<&str> = t.non_generic.iter().map(|&p| graph.label(p)).collect();
    let mut text = format!("transfer {} -> {}\n", format_rational(&t.source.level), format_rational(&t.target.level));
    if !crossed.is_empty() {
        text.push_str(&format!("non-generic: {}\n", crossed.join(", ")));
    }
    let mut header = vec!["edge".to_string()];
    header.extend(t.target.cut_edges.iter().map(|&w| graph.edge_label(w)));
    let mut rows = Vec::new();
    let mut json_rows = serde_json::Map::new();
    for &v in &t.source.cut_edges {
        let cells = t.target.cut_edges.iter().map(|&w| r.rational(&t.entry(v, w, n))).collect::<Result<Vec<_>, _>>()?;
        json_rows.insert(graph.edge_label(v), json!(cells));
        rows.push((graph.edge_label(v), cells));
    }
    text.push_str(&grid(&header, &rows));
    let json = json!({
        "from": format_rational(&t.source.level),
        "to": format_rational(&t.target.level),
        "columns": header[1..],
        "rows": json_rows,
        "non_generic": crossed,
    });
    Ok((text, json))
}

fn cmd_transfer(common: &Common, from: Option<&str>, to: Option<&str>) -> Result<Report> {
    let graph = common.load()?;
    let pol = polarize(&graph, None)?;
    let r = Renderer::new(&graph, common.basis);
    let matrices = match (from, to) {
        (Some(a), Some(b)) => vec![compose_transfer(&graph, &pol, &parse_rational(a)?, &parse_rational(b)?)?],
        _ => regular_values(&pol)
            .windows(2)
            .map(|w| single_step_transfer(&graph, &pol, &w[0], &w[1]))
            .collect::<Result<_, _>>()?,
    };
    let mut text = String::new();
    let mut json = Vec::new();
    for (k, t) in matrices.iter().enumerate() {
        if k > 0 {
            text.push('\n');
        }
        let (s, j) = render_transfer(&graph, &r, t)?;
        text.push_str(&s);
        json.push(j);
    }
    Ok(Report::ok(text, json.into()))
}

fn cmd_integrate(common: &Common, plus: &[String], minus: &[String]) -> Result<Report> {
    if plus.is_empty() && minus.is_empty() {
        bail!("give at least one --vertex or --dual factor");
    }
    let graph = common.load()?;
    let th = thom_for(&graph)?;
    let mut product = CohomologyClass::one(&graph);
    for (keys, is_minus) in [(plus, false), (minus, true)] {
        for key in keys {
            product = product.product(&class_of(&th, lookup(&graph, key)?, is_minus)?)?;
        }
    }
    let value = Renderer::new(&graph, common.basis).polynomial(&product.integrate()?)?;
    Ok(Report::ok(format!("{value}\n"), json!(value)))
}

fn cmd_demo() -> Report {
    let checks = demo::run();
    let mut text = String::new();
    let mut entries = Vec::new();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
        entries.push(json!({ "name": c.name, "passed": c.passed, "detail": c.detail }));
    }
    let ok = checks.iter().all(|c| c.passed);
    Report { text, json: entries.into(), ok }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize =
        value.trim().parse().with_context(|| format!("{THREADS_VAR} must be a positive integer, got '{value}'"))?;
    if n == 0 {
        bail!("{THREADS_VAR} must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(command: &Command) -> Result<(Report, Format)> {
    Ok(match command {
        Command::Validate(c) => (cmd_validate(c)?, c.format),
        Command::Betti(c) => (cmd_betti(c)?, c.format),
        Command::Thom { common, vertex, minus, method } => (cmd_thom(common, vertex, *minus, *method)?, common.format),
        Command::Table { common, minus } => (cmd_table(common, *minus)?, common.format),
        Command::Pair(c) => (cmd_pair(c)?, c.format),
        Command::Structconst { common, triple } => (cmd_structconst(common, triple.as_deref())?, common.format),
        Command::Transfer { common, from, to } => {
            (cmd_transfer(common, from.as_deref(), to.as_deref())?, common.format)
        }
        Command::Integrate { common, vertex, dual } => (cmd_integrate(common, vertex, dual)?, common.format),
        Command::Demo { format } => (cmd_demo(), *format),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli.command) {
        Ok((report, format)) => {
            match format {
                Format::Text => print!("{}", report.text),
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&report.json).expect("json values serialize"))
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
