//! `graphent`: counts, entropy estimates, sandwich bounds and identity
//! verification for directed-graph path classes.
//!
//! Exit codes: 0 on success with all verifications passing, 1 when a
//! verification fails, 2 on usage or input errors. Diagnostics go to stderr,
//! data to stdout or `--out`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use graphent_core::af;
use graphent_core::count::{self, PathClass};
use graphent_core::entropy;
use graphent_core::families::{self, GraphSource};
use graphent_core::graph::{self, materialize_with_cap, GraphWindow, VertexId, DEFAULT_DEGREE_CAP};
use graphent_core::report;

#[derive(Parser)]
#[command(name = "graphent", version, about = "entropy invariants of directed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact path-class counts at a vertex.
    Counts(CountsArgs),
    /// Growth-rate estimate of one entropy quantity.
    Entropy(EntropyArgs),
    /// Lower/upper entropy bounds and the exactness flag.
    Sandwich(SandwichArgs),
    /// Run the identity checks end to end.
    Verify(VerifyArgs),
    /// Matrix-unit representation checks of the path-pair calculus.
    Af(AfArgs),
    /// Spectral entropy of the root component for growing windows.
    Subgraphs(SubgraphsArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in family: salama_2_8, salama_pp (with --p) or salama (with --r, --l).
    #[arg(long, conflicts_with_all = ["graph", "family_spec"])]
    family: Option<String>,
    /// Parameter p of salama_pp.
    #[arg(long)]
    p: Option<u64>,
    /// Ray multiplicities, e.g. "const:8" or "list:12,3" (family salama).
    #[arg(long)]
    r: Option<String>,
    /// Return-chain lengths, e.g. "affine:3,1" (family salama).
    #[arg(long)]
    l: Option<String>,
    /// Self-loop at the root vertex (family salama).
    #[arg(long, default_value_t = false)]
    base_loop: bool,
    /// Finite graph from an edge-list file (`src dst [multiplicity]` lines).
    #[arg(long, conflicts_with = "family_spec")]
    graph: Option<PathBuf>,
    /// Family specification JSON file.
    #[arg(long)]
    family_spec: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Vertex label or numeric id.
    #[arg(long)]
    vertex: String,
    /// Path class: through, source, source-star, range, range-star, loop.
    #[arg(long)]
    class: String,
    #[arg(long)]
    nmax: usize,
    /// Window radius (defaults to nmax; must be at least nmax).
    #[arg(long)]
    radius: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    vertex: String,
    /// Quantity: loop, block, coblock, through, source-star, range-star.
    #[arg(long, default_value = "loop")]
    quantity: String,
    #[arg(long)]
    nmax: usize,
    /// Explicit estimation stride (auto-detected when omitted).
    #[arg(long)]
    stride: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SandwichArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    vertex: String,
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    vertex: String,
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 0.1)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AfArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    vertex: String,
    /// Truncation level of the generator set.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SubgraphsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    vertex: String,
    /// Comma-separated increasing window radii, e.g. 5,9,13.
    #[arg(long, value_delimiter = ',')]
    radii: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

enum Failure {
    /// Usage or input problem (exit 2).
    Input(String),
    /// A verification failed (exit 1); the report was already written.
    Verification,
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Counts(args) => run_counts(args),
        Command::Entropy(args) => run_entropy(args),
        Command::Sandwich(args) => run_sandwich(args),
        Command::Verify(args) => run_verify(args),
        Command::Af(args) => run_af(args),
        Command::Subgraphs(args) => run_subgraphs(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("graphent: {msg}");
            ExitCode::from(2)
        }
    }
}

fn degree_cap() -> usize {
    match std::env::var("GRAPHENT_MAX_DEGREE") {
        Ok(v) => v.parse().unwrap_or(DEFAULT_DEGREE_CAP),
        Err(_) => DEFAULT_DEGREE_CAP,
    }
}

fn resolve_source(args: &SourceArgs) -> Result<(GraphSource, String), Failure> {
    if let Some(path) = &args.family_spec {
        let (source, desc) = families::load_family(path)?;
        return Ok((source, format!("{} ({})", desc.name, desc.params)));
    }
    if let Some(path) = &args.graph {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let g = graph::io::parse_edge_list(&text)?;
        return Ok((GraphSource::Finite(g), format!("finite graph {}", path.display())));
    }
    let Some(name) = &args.family else {
        return Err(Failure::Input(
            "no graph source: pass --family, --graph or --family-spec".into(),
        ));
    };
    match name.as_str() {
        "salama_2_8" => {
            let (o, d) = families::salama_2_8();
            Ok((GraphSource::Salama(o), format!("{} ({})", d.name, d.params)))
        }
        "salama_pp" => {
            let p = args
                .p
                .ok_or_else(|| Failure::Input("salama_pp requires --p".into()))?;
            let (o, d) = families::salama_pp(p)?;
            Ok((GraphSource::Salama(o), format!("{} ({})", d.name, d.params)))
        }
        "salama" => {
            let r = families::SeqSpec::parse(
                args.r.as_deref().ok_or_else(|| Failure::Input("salama requires --r".into()))?,
            )?;
            let l = families::SeqSpec::parse(
                args.l.as_deref().ok_or_else(|| Failure::Input("salama requires --l".into()))?,
            )?;
            let params = families::SalamaParams { r, l, base_loop: args.base_loop };
            let display = format!(
                "salama (r={}, l={}, base_loop={})",
                params.r.display(),
                params.l.display(),
                params.base_loop
            );
            let o = families::salama(params)?;
            Ok((GraphSource::Salama(o), display))
        }
        other => Err(Failure::Input(format!("unknown family {other:?}"))),
    }
}

fn known_entropies(args: &SourceArgs) -> Option<families::KnownEntropies> {
    match args.family.as_deref() {
        Some("salama_2_8") => families::salama_2_8().1.known_entropies,
        Some("salama_pp") => families::salama_pp(args.p?).ok()?.1.known_entropies,
        _ => None,
    }
}

/// Resolve the distinguished vertex: a label known to the graph or window,
/// else a numeric id.
fn resolve_vertex(label: &str, window: &GraphWindow) -> Result<VertexId, Failure> {
    if let Some(v) = window.graph().find_by_label(label) {
        return Ok(v);
    }
    if let Ok(n) = label.parse::<u64>() {
        let v = VertexId(n);
        if window.graph().contains_vertex(v) {
            return Ok(v);
        }
    }
    Err(Failure::Input(format!("vertex {label:?} not found in the window")))
}

/// Pre-window vertex resolution: numeric ids only (labels need the window).
fn resolve_base(label: &str, source: &GraphSource) -> Result<VertexId, Failure> {
    match source {
        GraphSource::Finite(g) => {
            if let Some(v) = g.find_by_label(label) {
                return Ok(v);
            }
            if let Ok(n) = label.parse::<u64>() {
                let v = VertexId(n);
                if g.contains_vertex(v) {
                    return Ok(v);
                }
            }
            Err(Failure::Input(format!("vertex {label:?} not found")))
        }
        GraphSource::Salama(o) => {
            use graphent_core::graph::GraphOracle;
            if label == "0" || label == "root" {
                return Ok(o.root());
            }
            label
                .parse::<u64>()
                .map(VertexId)
                .map_err(|_| Failure::Input(format!("vertex {label:?}: use a numeric id or 0")))
        }
    }
}

fn build_window(source: &GraphSource, base: VertexId, radius: usize) -> Result<GraphWindow, Failure> {
    Ok(materialize_with_cap(source.as_oracle(), &[base], radius, degree_cap())?)
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn envelope(command: String, source: String, window_radius: Option<usize>, data: serde_json::Value) -> String {
    let doc = json!({
        "tool": "graphent",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "source": source,
        "window_radius": window_radius,
        "data": data,
    });
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

fn csv_header(command: &str, source: &str, window_radius: Option<usize>) -> String {
    let mut out = format!("# graphent {}\n# {command}\n# source: {source}\n", env!("CARGO_PKG_VERSION"));
    if let Some(r) = window_radius {
        out.push_str(&format!("# window_radius: {r}\n"));
    }
    out
}

fn run_counts(args: CountsArgs) -> Result<(), Failure> {
    let (source, source_desc) = resolve_source(&args.source)?;
    let class = PathClass::parse(&args.class)
        .ok_or_else(|| Failure::Input(format!("unknown class {:?}", args.class)))?;
    let radius = args.radius.unwrap_or(args.nmax).max(args.nmax);
    let base = resolve_base(&args.vertex, &source)?;
    let window = build_window(&source, base, radius)?;
    let v = resolve_vertex(&args.vertex, &window)?;
    let series = count::count_class(&window, v, class, args.nmax)?;

    let echo = format!(
        "counts --vertex {} --class {} --nmax {}",
        args.vertex, args.class, args.nmax
    );
    let text = match args.output.format.as_str() {
        "csv" => format!(
            "{}{}",
            csv_header(&echo, &source_desc, Some(window.radius())),
            report::count_series_csv(&series)
        ),
        _ => {
            let data = report::CountSeriesJson::new(&series, window.graph().display_vertex(v));
            envelope(echo, source_desc, Some(window.radius()), serde_json::to_value(data).unwrap())
        }
    };
    emit(&args.output, &text)
}

fn run_entropy(args: EntropyArgs) -> Result<(), Failure> {
    let (source, source_desc) = resolve_source(&args.source)?;
    let base = resolve_base(&args.vertex, &source)?;
    let window = build_window(&source, base, args.nmax)?;
    let v = resolve_vertex(&args.vertex, &window)?;

    let known = known_entropies(&args.source);
    let (quantity, estimate, provenance): (String, entropy::EntropyEstimate, Option<String>) =
        match args.quantity.as_str() {
            "loop" => (
                "loop entropy".into(),
                entropy::loop_entropy(&window, v, args.nmax)?,
                known.as_ref().map(|k| format!("reference h_l = {:.6}: {}", k.h_l, k.provenance)),
            ),
            "block" => (
                "block entropy".into(),
                entropy::block_entropy(&window, v, args.nmax)?,
                known.as_ref().map(|k| format!("reference h_b = {:.6}: {}", k.h_b, k.provenance)),
            ),
            "coblock" => (
                "co-block entropy".into(),
                entropy::coblock_entropy(&window, v, args.nmax)?,
                known.as_ref().map(|k| format!("reference h_b(t) = {:.6}: {}", k.h_b_t, k.provenance)),
            ),
            "through" => (
                "through growth".into(),
                entropy::through_growth(&window, v, args.nmax)?,
                None,
            ),
            "source-star" | "range-star" => {
                let class = PathClass::parse(&args.quantity).unwrap();
                let series = count::count_class(&window, v, class, args.nmax)?;
                let ri = if let Some(s) = args.stride {
                    let est = entropy::growth_rate(&series.counts, Some(s), 0.25)?;
                    entropy::RadiusInverse {
                        quantity: format!("log R^-1 ({} series)", class.name()),
                        estimate: est,
                    }
                } else {
                    entropy::radius_inverse(&series, None)?
                };
                (ri.quantity, ri.estimate, None)
            }
            other => return Err(Failure::Input(format!("unknown quantity {other:?}"))),
        };

    // explicit stride re-estimates the class series accordingly
    let estimate = match (args.stride, args.quantity.as_str()) {
        (Some(s), "loop" | "block" | "coblock" | "through") => {
            let class = match args.quantity.as_str() {
                "loop" => PathClass::Loop,
                "block" => PathClass::Source,
                "coblock" => PathClass::Range,
                _ => PathClass::Through,
            };
            let series = count::count_class(&window, v, class, args.nmax)?;
            entropy::growth_rate(&series.counts, Some(s), 0.25)?
        }
        _ => estimate,
    };

    let echo = format!(
        "entropy --vertex {} --quantity {} --nmax {}{}",
        args.vertex,
        args.quantity,
        args.nmax,
        args.stride.map(|s| format!(" --stride {s}")).unwrap_or_default()
    );
    let text = match args.output.format.as_str() {
        "csv" => format!(
            "{}{}",
            csv_header(&echo, &source_desc, Some(window.radius())),
            report::estimate_raw_csv(&estimate)
        ),
        _ => {
            let data = report::EstimateJson::new(quantity, &estimate, provenance);
            envelope(echo, source_desc, Some(window.radius()), serde_json::to_value(data).unwrap())
        }
    };
    emit(&args.output, &text)
}

fn run_sandwich(args: SandwichArgs) -> Result<(), Failure> {
    if args.tol <= 0.0 {
        return Err(Failure::Input("tolerance must be positive".into()));
    }
    let (source, source_desc) = resolve_source(&args.source)?;
    let base = resolve_base(&args.vertex, &source)?;
    let window = build_window(&source, base, args.nmax)?;
    let v = resolve_vertex(&args.vertex, &window)?;
    let rep = entropy::sandwich_on_window(&window, v, args.nmax, args.tol)?;

    let provenance = known_entropies(&args.source).map(|k| {
        format!(
            "reference: h_l = {:.6}, h_b = {:.6}, h_b(t) = {:.6}; {}",
            k.h_l, k.h_b, k.h_b_t, k.provenance
        )
    });
    let echo = format!(
        "sandwich --vertex {} --nmax {} --tol {}",
        args.vertex, args.nmax, args.tol
    );
    let data = report::SandwichJson::new(&rep, window.graph().display_vertex(v), provenance);
    let text = envelope(echo, source_desc, Some(window.radius()), serde_json::to_value(data).unwrap());
    emit(&args.output, &text)
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.tol <= 0.0 {
        return Err(Failure::Input("tolerance must be positive".into()));
    }
    let (source, source_desc) = resolve_source(&args.source)?;
    let base = resolve_base(&args.vertex, &source)?;
    let window = build_window(&source, base, args.nmax)?;
    let v = resolve_vertex(&args.vertex, &window)?;
    let n = args.nmax;

    let mut checks: Vec<serde_json::Value> = Vec::new();
    let mut all = true;
    let mut push = |name: &str, passed: bool, detail: serde_json::Value, all: &mut bool| {
        *all &= passed;
        checks.push(json!({ "check": name, "passed": passed, "detail": detail }));
    };

    let conv = count::convolution_check(&window, v, n)?;
    push(
        "first-visit factorization",
        conv.passed,
        json!({ "n_max": n, "failures": conv.failures.len() }),
        &mut all,
    );

    let loops = count::count_class(&window, v, PathClass::Loop, n)?;
    let first = count::first_return_counts(&window, v, n)?;
    let renewal = count::renewal_identity_holds(&loops, &first);
    push("renewal identity", renewal, json!({ "n_max": n }), &mut all);

    let p32 = entropy::prop32_check(&window, v, n, args.tol)?;
    push(
        "block entropy maximum identity",
        p32.passed,
        json!({ "direct_gap": report::round_sig(p32.direct.gap), "transposed_gap": report::round_sig(p32.transposed.gap) }),
        &mut all,
    );

    let p35b = entropy::prop35b_check(&window, v, n, args.tol)?;
    push(
        "through growth equals max(h_b, h_b_t)",
        p35b.passed,
        json!({ "gap": report::round_sig(p35b.check.gap) }),
        &mut all,
    );

    if let Some(g) = source.as_finite() {
        if g.is_irreducible() {
            let p35a = entropy::prop35a_check(g, v, n, args.tol)?;
            push(
                "finite irreducible coherence",
                p35a.passed,
                json!({ "max_pairwise_gap": report::round_sig(p35a.max_pairwise_gap) }),
                &mut all,
            );
        }
    }

    // transpose duality of the count classes on the window
    let dual_n = n.min(10);
    let transposed = window.transposed();
    let mut dual_ok = true;
    for (a, b) in [
        (PathClass::Source, PathClass::Range),
        (PathClass::SourceStar, PathClass::RangeStar),
    ] {
        let lhs = count::count_class(&transposed, v, a, dual_n)?;
        let rhs = count::count_class(&window, v, b, dual_n)?;
        dual_ok &= lhs.counts == rhs.counts;
        let lhs = count::count_class(&transposed, v, b, dual_n)?;
        let rhs = count::count_class(&window, v, a, dual_n)?;
        dual_ok &= lhs.counts == rhs.counts;
    }
    push("transpose duality", dual_ok, json!({ "n_max": dual_n }), &mut all);

    let echo = format!("verify --vertex {} --nmax {} --tol {}", args.vertex, n, args.tol);
    let text = envelope(
        echo,
        source_desc,
        Some(window.radius()),
        json!({ "all_passed": all, "checks": checks }),
    );
    emit(&args.output, &text)?;
    if all {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_af(args: AfArgs) -> Result<(), Failure> {
    let (source, source_desc) = resolve_source(&args.source)?;
    let base = resolve_base(&args.vertex, &source)?;
    // representation checks need loops up to twice the truncation level
    let window = build_window(&source, base, 2 * args.n)?;
    let v = resolve_vertex(&args.vertex, &window)?;

    let hom = af::verify_homomorphism(&window, v, args.n)?;
    let dims = af::dimension_report(&window, v, args.n)?;
    let (independence, not_applicable) = match af::verify_independence(&window, v, args.n) {
        Ok(rep) => (json!({ "rank": rep.rank, "omega_size": rep.omega_size, "independent": rep.independent }), false),
        Err(af::AfError::HypothesisViolated(msg)) => (json!({ "not_applicable": msg }), true),
        Err(e) => return Err(e.into()),
    };
    let independent_ok = not_applicable
        || independence
            .get("independent")
            .and_then(|b| b.as_bool())
            .unwrap_or(false);
    let all = hom.passed && independent_ok;

    let echo = format!("af --vertex {} --n {}", args.vertex, args.n);
    let text = envelope(
        echo,
        source_desc,
        Some(window.radius()),
        json!({
            "all_passed": all,
            "homomorphism": { "passed": hom.passed, "omega_size": hom.omega_size, "products_checked": hom.products_checked, "violations": hom.violations },
            "independence": independence,
            "dimensions": serde_json::to_value(&dims).unwrap(),
        }),
    );
    emit(&args.output, &text)?;
    if all {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_subgraphs(args: SubgraphsArgs) -> Result<(), Failure> {
    if args.radii.is_empty() {
        return Err(Failure::Input("pass at least one radius".into()));
    }
    if args.radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Input("radii must be strictly increasing".into()));
    }
    let (source, source_desc) = resolve_source(&args.source)?;
    let base = resolve_base(&args.vertex, &source)?;
    let entries = entropy::subgraph_supremum(source.as_oracle(), base, &args.radii)?;
    let monotone = entries.windows(2).all(|w| w[1].value >= w[0].value - 1e-12);

    let echo = format!(
        "subgraphs --vertex {} --radii {}",
        args.vertex,
        args.radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
    );
    let rows: Vec<serde_json::Value> = entries
        .iter()
        .map(|e| {
            json!({
                "radius": e.radius,
                "scc_vertices": e.scc_vertices,
                "scc_edges": e.scc_edges,
                "value_nats": report::round_sig(e.value),
                "value_bits": report::round_sig(e.value / std::f64::consts::LN_2),
            })
        })
        .collect();
    let text = envelope(
        echo,
        source_desc,
        None,
        json!({ "monotone": monotone, "entries": rows }),
    );
    emit(&args.output, &text)
}
