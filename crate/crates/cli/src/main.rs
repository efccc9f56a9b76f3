use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use symdyn::catalog::{example_by_name, Example};
use symdyn::graph::{build_rauzy_graph, cycle_space, four_vertex_example, stats_csv, Multigraph, STATS_CSV_HEADER};
use symdyn::substitution::{fractal_cloud, Substitution};
use symdyn::torus::examples::hexagon_center;
use symdyn::torus::{OrbitStatus, PiecewiseTranslation};
use symdyn::verify::{run_verification, VerifyConfig, CHECK_NAMES};
use symdyn::word::{complexity, LazyWord, StabilizationPolicy, Symbol};

#[derive(Parser)]
#[command(name = "symdyn", version, about = "Substitutive words, Rauzy fractals, torus codings and Rauzy graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a substitution fixed point.
    FixedPoint(FixedPointArgs),
    /// Tabulate the factor complexity p(n).
    Complexity(ComplexityArgs),
    /// Emit a labelled Rauzy fractal point cloud.
    Fractal(FractalArgs),
    /// Follow an orbit of a piecewise translation and print its coding.
    CodeOrbit(CodeOrbitArgs),
    /// Build a Rauzy graph, or show the four-vertex example.
    Graph(GraphArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Dot,
    Bin,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for examples and sampling; repeatable where several runs make sense.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Longest prefix read from any word.
    #[arg(long, default_value_t = 1 << 24)]
    prefix_cap: usize,
}

#[derive(Args, Clone)]
struct Source {
    /// Fixed point of the k-bonacci substitution.
    #[arg(long, conflicts_with_all = ["morphism", "example", "domain"])]
    kbonacci: Option<usize>,
    /// Substitution in JSON form, e.g. {"images": ["12", "1"]}.
    #[arg(long, conflicts_with_all = ["example", "domain"])]
    morphism: Option<PathBuf>,
    /// Built-in example: circle, hexagon, fibonacci, tribonacci, kbonacci-K.
    #[arg(long, conflicts_with = "domain")]
    example: Option<String>,
    /// Piecewise translation in JSON form.
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Rotation number for the circle example.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct FixedPointArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 100)]
    length: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ComplexityArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    /// Torus dimension k, adding the kn + 1 reference column.
    #[arg(long)]
    torus_dim: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FractalArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 10_000)]
    points: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CodeOrbitArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 20)]
    length: usize,
    /// Starting point, comma separated; defaults to the example's own.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1)]
    order: usize,
    /// Prefix length used to collect factors.
    #[arg(long, default_value_t = 1 << 20)]
    length: usize,
    /// Also write the stats CSV to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these checks; repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Include per-check runtimes in the JSON report.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::FixedPoint(a) => fixed_point(a),
        Command::Complexity(a) => complexity_cmd(a),
        Command::Fractal(a) => fractal(a),
        Command::CodeOrbit(a) => code_orbit(a),
        Command::Graph(a) => graph(a),
        Command::Verify(a) => return verify(a),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn format_or(common: &Common, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = common.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!(UsageError(format!("format {:?} is not supported here", f.to_possible_value().unwrap().get_name())));
    }
    Ok(f)
}

/// Argument combinations clap cannot express; reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn load_substitution(source: &Source) -> Result<Option<Substitution>> {
    if let Some(k) = source.kbonacci {
        return Ok(Some(Substitution::k_bonacci(k)?));
    }
    if let Some(path) = &source.morphism {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Some(Substitution::from_json(&text)?));
    }
    Ok(None)
}

fn fixed_point_word(s: &Substitution) -> Result<LazyWord> {
    let seed = s.prolongable_letter().unwrap_or(Symbol(0));
    Ok(s.fixed_point(seed)?)
}

fn load_domain(path: &Path) -> Result<Arc<PiecewiseTranslation>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Arc::new(PiecewiseTranslation::from_json(&text)?))
}

/// A word with its torus dimension, when known, and stabilization policy.
struct WordSource {
    label: String,
    word: LazyWord,
    torus_dim: Option<usize>,
    policy: StabilizationPolicy,
}

fn word_sources(source: &Source, common: &Common) -> Result<Vec<WordSource>> {
    let cap = common.prefix_cap;
    if let Some(s) = load_substitution(source)? {
        let torus_dim = source.kbonacci.map(|k| k.saturating_sub(1));
        return Ok(vec![WordSource {
            label: "fixed point".into(),
            word: fixed_point_word(&s)?,
            torus_dim,
            policy: StabilizationPolicy::with_cap(cap),
        }]);
    }
    if let Some(path) = &source.domain {
        let map = load_domain(path)?;
        let x0 = hexagon_center(&map);
        return Ok(vec![WordSource {
            label: map.name().to_string(),
            word: map.coding(&x0)?,
            torus_dim: Some(map.dim()),
            policy: StabilizationPolicy::with_cap(cap),
        }]);
    }
    let name = source.example.as_deref().ok_or_else(|| {
        UsageError("choose a word with --kbonacci, --morphism, --example or --domain".into())
    })?;
    let seeds: Vec<Option<u64>> =
        if common.seeds.is_empty() { vec![None] } else { common.seeds.iter().copied().map(Some).collect() };
    let per_seed = name == "hexagon";
    let seeds = if per_seed { seeds } else { vec![None] };
    seeds
        .into_iter()
        .map(|seed| {
            let e: Example = example_by_name(name, source.alpha, seed)?.with_cap(cap);
            Ok(WordSource { label: e.name.clone(), torus_dim: Some(e.torus_dim), policy: e.policy, word: e.word })
        })
        .collect()
}

fn fixed_point(a: FixedPointArgs) -> Result<()> {
    let format = format_or(&a.common, Format::Text, &[Format::Text, Format::Json])?;
    let s = load_substitution(&a.source)?
        .ok_or_else(|| UsageError("fixed-point needs --kbonacci or --morphism".into()))?;
    let text = fixed_point_word(&s)?.take(a.length).to_string();
    let out = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json!({"length": a.length, "word": text}))?),
        _ if text.is_empty() => String::new(),
        _ => format!("{text}\n"),
    };
    emit(&a.common.out, out.as_bytes())
}

fn complexity_cmd(a: ComplexityArgs) -> Result<()> {
    let format = format_or(&a.common, Format::Csv, &[Format::Csv, Format::Json])?;
    let sources = word_sources(&a.source, &a.common)?;
    let reports = sources
        .iter()
        .map(|s| Ok((s, complexity(&s.word, a.nmax, s.policy)?)))
        .collect::<Result<Vec<_>>>()?;
    let out = match format {
        Format::Json => {
            let tables: Vec<_> = reports
                .iter()
                .map(|(s, r)| json!({"source": s.label, "torus_dim": a.torus_dim.or(s.torus_dim), "policy": s.policy, "entries": r.entries}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&tables)?)
        }
        _ => {
            let mut out = String::new();
            for (i, (s, r)) in reports.iter().enumerate() {
                if reports.len() > 1 {
                    if i > 0 {
                        out.push('\n');
                    }
                    writeln!(out, "# {}", s.label)?;
                }
                out.push_str(&r.to_csv(a.torus_dim.or(s.torus_dim)));
            }
            out
        }
    };
    emit(&a.common.out, out.as_bytes())?;
    for (s, r) in &reports {
        let open: Vec<usize> = r.entries.iter().filter(|e| !e.stabilized).map(|e| e.n).collect();
        if !open.is_empty() {
            eprintln!("warning: {}: rows n = {open:?} did not stabilize", s.label);
        }
    }
    Ok(())
}

fn fractal(a: FractalArgs) -> Result<()> {
    let format = format_or(&a.common, Format::Csv, &[Format::Csv, Format::Bin])?;
    let s = load_substitution(&a.source)?
        .ok_or_else(|| UsageError("fractal needs --kbonacci or --morphism".into()))?;
    let cloud = fractal_cloud(&s, a.points, a.common.tol)?;
    match format {
        Format::Bin => {
            let mut bytes = Vec::new();
            cloud.write_binary(&mut bytes)?;
            emit(&a.common.out, &bytes)
        }
        _ => emit(&a.common.out, cloud.to_csv().as_bytes()),
    }
}

fn code_orbit(a: CodeOrbitArgs) -> Result<()> {
    let format = format_or(&a.common, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let map = match (&a.source.domain, a.source.example.as_deref()) {
        (Some(path), _) => load_domain(path)?,
        (None, Some(name)) => example_by_name(name, a.source.alpha, a.common.seeds.first().copied())?
            .map
            .ok_or_else(|| UsageError(format!("example {name:?} has no piecewise translation")))?,
        (None, None) => bail!(UsageError("code-orbit needs --example or --domain".into())),
    };
    let x0 = a.x0.clone().unwrap_or_else(|| {
        if map.dim() == 1 {
            vec![0.0]
        } else {
            hexagon_center(&map)
        }
    });
    let orbit = map.orbit(&x0, a.length)?;
    let alphabet = map.alphabet();
    let coding: Vec<Symbol> = orbit.cells.iter().map(|&c| Symbol(c as u8)).collect();
    let coding = alphabet.render(&coding);
    if let OrbitStatus::BoundaryHit { step, hit, .. } = &orbit.status {
        eprintln!("warning: orbit stopped at step {step}: {hit:?}");
    }
    let out = match format {
        Format::Text => format!("{coding}\n"),
        Format::Json => {
            let status = match &orbit.status {
                OrbitStatus::Complete => json!("complete"),
                OrbitStatus::BoundaryHit { step, point, hit } => {
                    json!({"boundary_hit": {"step": step, "point": point, "kind": format!("{hit:?}")}})
                }
            };
            let value = json!({
                "domain": map.to_description(),
                "x0": x0,
                "coding": coding,
                "points": orbit.points,
                "status": status,
            });
            format!("{}\n", serde_json::to_string_pretty(&value)?)
        }
        _ => orbit.to_csv(),
    };
    emit(&a.common.out, out.as_bytes())
}

fn graph_text(g: &Multigraph, weights: Option<&[f64]>) -> String {
    let basis = cycle_space(g);
    let mut out = String::new();
    writeln!(out, "vertices: {}", (0..g.vertex_count()).map(|v| g.vertex_label(v)).collect::<Vec<_>>().join(" ")).unwrap();
    for (e, &(s, t)) in g.edges().iter().enumerate() {
        write!(out, "{}: {} -> {}", g.edge_label(e), g.vertex_label(s), g.vertex_label(t)).unwrap();
        if let Some(w) = weights {
            write!(out, "  weight {}", w[e]).unwrap();
        }
        out.push('\n');
    }
    writeln!(
        out,
        "dim Z = |E| - |V| + components = {} - {} + {} = {}",
        g.edge_count(),
        g.vertex_count(),
        basis.components,
        basis.dimension
    )
    .unwrap();
    for c in &basis.cycles {
        writeln!(out, "cycle: {}", c.render(g)).unwrap();
    }
    out
}

/// The four-vertex example with the flow `(1, 0, 1, 2, 1, 1)`.
fn four_vertex_report(format: Format) -> Result<(String, String)> {
    let g = four_vertex_example();
    let f = [1.0, 0.0, 1.0, 2.0, 1.0, 1.0];
    let basis = cycle_space(&g);
    let stats_row = format!(
        "{STATS_CSV_HEADER}\n0,{},{},{},{},{}\n",
        g.vertex_count(),
        g.edge_count(),
        basis.components,
        basis.dimension,
        g.edge_count() as i64 - g.vertex_count() as i64 + 1
    );
    let body = match format {
        Format::Dot => g.to_dot("four_vertex", Some(&f)),
        Format::Csv => stats_row.clone(),
        Format::Json => {
            let value = json!({
                "vertices": g.vertex_count(),
                "edges": g.edges(),
                "dim_z": basis.dimension,
                "cycles": basis.cycles.iter().map(|c| c.render(&g)).collect::<Vec<_>>(),
                "flow": f,
                "defects": g.conservation_defect(&f)?,
            });
            format!("{}\n", serde_json::to_string_pretty(&value)?)
        }
        _ => {
            let mut out = graph_text(&g, Some(&f));
            let z = symdyn::graph::cycle_vector_from_walk(&g, &[0, 2, 1])?;
            writeln!(out, "walk 1 -> 3 -> 2 -> 1: {}", z.render(&g))?;
            let incoming: Vec<String> =
                g.edges().iter().zip(&f).filter(|(e, _)| e.1 == 0).map(|(_, w)| w.to_string()).collect();
            let outgoing: Vec<String> =
                g.edges().iter().zip(&f).filter(|(e, _)| e.0 == 0).map(|(_, w)| w.to_string()).collect();
            writeln!(out, "balance at vertex 1: {} = {}", incoming.join(" + "), outgoing.join(" + "))?;
            out
        }
    };
    Ok((body, stats_row))
}

fn graph(a: GraphArgs) -> Result<()> {
    let format = format_or(&a.common, Format::Dot, &[Format::Dot, Format::Csv, Format::Json, Format::Text])?;
    if matches!(a.source.example.as_deref(), Some("four-vertex" | "paper-4vertex")) {
        let (body, stats) = four_vertex_report(format)?;
        if let Some(path) = &a.stats {
            fs::write(path, stats)?;
        }
        return emit(&a.common.out, body.as_bytes());
    }
    let sources = word_sources(&a.source, &a.common)?;
    let source = sources.into_iter().next().ok_or_else(|| anyhow!("no word source"))?;
    let len = a.length.min(a.common.prefix_cap);
    let g = build_rauzy_graph(&source.word, a.order, len)?;
    let stats = stats_csv(&[g.stats()]);
    if g.provisional {
        eprintln!("warning: graph of order {} is provisional: factor sets may not have stabilized", a.order);
    }
    let body = match format {
        Format::Csv => stats.clone(),
        Format::Json => {
            let basis = cycle_space(&g.graph);
            let value = json!({
                "order": g.order,
                "prefix_len": g.prefix_len,
                "provisional": g.provisional,
                "stats": g.stats(),
                "vertices": (0..g.graph.vertex_count()).map(|v| g.graph.vertex_label(v)).collect::<Vec<_>>(),
                "edges": g.graph.edges().iter().enumerate().map(|(e, &(s, t))| json!({
                    "word": g.graph.edge_label(e),
                    "from": g.graph.vertex_label(s),
                    "to": g.graph.vertex_label(t),
                    "weight": g.weights[e],
                })).collect::<Vec<_>>(),
                "cycles": basis.cycles.iter().map(|c| c.render(&g.graph)).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&value)?)
        }
        Format::Text => graph_text(&g.graph, Some(&g.weights)),
        _ => g.to_dot(true),
    };
    if let Some(path) = &a.stats {
        fs::write(path, &stats)?;
    }
    emit(&a.common.out, body.as_bytes())
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let format = format_or(&a.common, Format::Text, &[Format::Text, Format::Json])?;
    for name in &a.only {
        if !CHECK_NAMES.contains(&name.as_str()) {
            bail!(UsageError(format!("unknown check {name:?}; known checks: {}", CHECK_NAMES.join(", "))));
        }
    }
    if a.common.tol.is_nan() || a.common.tol <= 0.0 {
        bail!(UsageError("--tol must be positive".into()));
    }
    let mut config = VerifyConfig {
        tol: a.common.tol,
        prefix_cap: a.common.prefix_cap,
        only: a.only.clone(),
        samples: a.samples,
        ..VerifyConfig::default()
    };
    if !a.common.seeds.is_empty() {
        config.seeds = a.common.seeds.clone();
    }
    let report = run_verification(&config)?;
    let json = report.to_json(a.timings);
    match (format, &a.common.out) {
        (Format::Json, out) => emit(out, json.as_bytes())?,
        (_, Some(path)) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            print!("{}", report.summary());
        }
        (_, None) => print!("{}", report.summary()),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
