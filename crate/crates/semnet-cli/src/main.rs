//! Batch front end: load/reason/analyze/algebra/walk/export subcommands
//! over N-Triples files, with reproducible outputs (atomic writes plus a
//! JSON manifest of the invocation and input content hashes next to
//! every artifact).
//!
//! Exit codes: 0 success, 1 usage error, 2 data/constraint error,
//! 3 inconsistency detected under `--fail-on-inconsistency`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use semnet::algebra;
use semnet::nal;
use semnet::netkit;
use semnet::ntriples::{parse_ntriples, serialize_ntriples};
use semnet::owl;
use semnet::rdfs;
use semnet::walker;
use semnet::{Term, Triple, TripleStore};

const EXIT_USAGE: i32 = 1;
const EXIT_DATA: i32 = 2;
const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl std::fmt::Display) -> CliError {
        CliError {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "semnet",
    version,
    about = "Triple-store reasoning and network-analysis pipelines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Ntriples,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Rdfs,
    Owl,
    Nal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Sp,
    Geodesics,
    Closeness,
    Betweenness,
    Stationary,
    Pagerank,
    Spread,
    AssortScalar,
    AssortNominal,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and merge N-Triples inputs into one canonical document.
    Load {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "ntriples")]
        format: Format,
    },
    /// Materialize entailments (RDFS or OWL subset) or saturate NAL
    /// judgments.
    Reason {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// NAL evidential horizon.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// NAL rules (comma-separated); default deduction,induction.
        #[arg(long)]
        rules: Option<String>,
        /// NAL saturation rounds.
        #[arg(long, default_value_t = 16)]
        max_rounds: usize,
        #[arg(long)]
        fail_on_inconsistency: bool,
    },
    /// Single-relational network metrics over one predicate slice.
    Analyze {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, required = true)]
        predicate: Vec<String>,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        /// Source vertex URI (sp).
        #[arg(long)]
        source: Option<String>,
        /// Target vertex URI (sp).
        #[arg(long)]
        target: Option<String>,
        /// Seed vertex for spreading activation, as `uri=energy`
        /// (repeatable).
        #[arg(long)]
        seed_vertex: Vec<String>,
        /// Predicate linking vertices to metadata values (assortativity).
        #[arg(long)]
        value_predicate: Option<String>,
        #[arg(long)]
        include_literals: bool,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate a path-algebra expression over the relation tensor.
    Algebra {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        include_literals: bool,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run grammar-based random walkers (with --grammar) or geodesic
    /// walkers (with --query and --source).
    Walk {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        walkers: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Explicit start vertex URIs (repeatable).
        #[arg(long)]
        start: Vec<String>,
        /// Destination query for geodesic walkers.
        #[arg(long)]
        query: Option<String>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long, default_value_t = 100)]
        max_depth: usize,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Re-serialize a store (canonical N-Triples, JSON, or CSV).
    Export {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "ntriples")]
        format: Format,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 by default; our contract reserves 2 for data
            // errors, so usage problems are remapped to 1.
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            std::process::exit(err.code);
        }
    }
}

fn load_store(inputs: &[PathBuf]) -> Result<(TripleStore, Vec<(PathBuf, String)>), CliError> {
    let mut store = TripleStore::new();
    let mut hashes = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        hashes.push((path.clone(), sha256_hex(text.as_bytes())));
        let triples = parse_ntriples(&text)
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        for t in triples {
            store.insert(t);
        }
    }
    Ok((store, hashes))
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Write-temp-then-rename so readers never observe partial artifacts.
fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, content).map_err(|e| CliError::data(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Record enough to reproduce the artifact exactly: full argv plus a
/// content hash of every input.
fn write_manifest(output: &Path, hashes: &[(PathBuf, String)]) -> Result<(), CliError> {
    let manifest = serde_json::json!({
        "argv": std::env::args().collect::<Vec<String>>(),
        "inputs": hashes
            .iter()
            .map(|(p, h)| serde_json::json!({"path": p.display().to_string(), "sha256": h}))
            .collect::<Vec<_>>(),
        "output": output.display().to_string(),
    });
    let path = output.with_file_name(format!(
        "{}.manifest.json",
        output
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    ));
    write_atomic(&path, &format!("{:#}\n", manifest))
}

fn parse_uri(s: &str) -> Result<Term, CliError> {
    Term::uri(s).map_err(CliError::data)
}

fn pretty(value: &serde_json::Value) -> String {
    format!("{value:#}\n")
}

/// Round to four digits, then render shortest (0.45, not 0.4500).
fn format_tv(f: f64, c: f64) -> String {
    let r = |x: f64| (x * 1e4).round() / 1e4;
    format!("⟨{}, {}⟩", r(f), r(c))
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Load {
            input,
            output,
            format,
        } => {
            let (store, hashes) = load_store(&input)?;
            let content = match format {
                Format::Ntriples => serialize_ntriples(&store),
                Format::Json => pretty(&store_to_json(&store)),
                Format::Csv => store_to_csv(&store),
            };
            write_atomic(&output, &content)?;
            write_manifest(&output, &hashes)?;
            Ok(0)
        }
        Command::Reason {
            input,
            mode,
            output,
            format,
            k,
            rules,
            max_rounds,
            fail_on_inconsistency,
        } => {
            let (store, hashes) = load_store(&input)?;
            let code = run_reason(
                store,
                mode,
                &output,
                format,
                k,
                rules.as_deref(),
                max_rounds,
                fail_on_inconsistency,
            )?;
            write_manifest(&output, &hashes)?;
            Ok(code)
        }
        Command::Analyze {
            input,
            metric,
            predicate,
            alpha,
            tol,
            delta,
            steps,
            max_iter,
            source,
            target,
            seed_vertex,
            value_predicate,
            include_literals,
            output,
            format,
        } => {
            if format == Format::Ntriples {
                return Err(CliError::usage("analyze outputs are csv or json"));
            }
            if predicate.len() != 1 {
                return Err(CliError::usage("analyze expects exactly one --predicate"));
            }
            let (store, hashes) = load_store(&input)?;
            let pred = parse_uri(&predicate[0])?;
            let graph = netkit::graph_from_store(&store, &pred, include_literals);
            let content = run_metric(
                &store,
                &graph,
                metric,
                MetricParams {
                    alpha,
                    tol,
                    delta,
                    steps,
                    max_iter,
                    source,
                    target,
                    seed_vertex,
                    value_predicate,
                },
                format,
            )?;
            write_atomic(&output, &content)?;
            write_manifest(&output, &hashes)?;
            Ok(0)
        }
        Command::Algebra {
            input,
            expr,
            include_literals,
            output,
            format,
        } => {
            if format == Format::Ntriples {
                return Err(CliError::usage("algebra outputs are csv or json"));
            }
            let (store, hashes) = load_store(&input)?;
            let parsed = algebra::parse_path_expr(&expr).map_err(CliError::data)?;
            let mut predicates = Vec::new();
            collect_slices(&parsed, &mut predicates);
            let tensor = algebra::tensor_from_store(&store, &predicates, include_literals);
            let matrix = algebra::eval_path_expr(&parsed, &tensor).map_err(CliError::data)?;
            let content = match format {
                Format::Csv => algebra::matrix_to_csv(&tensor, &matrix),
                _ => pretty(&algebra::matrix_to_json(&tensor, &matrix)),
            };
            write_atomic(&output, &content)?;
            write_manifest(&output, &hashes)?;
            Ok(0)
        }
        Command::Walk {
            input,
            grammar,
            walkers,
            steps,
            seed,
            start,
            query,
            source,
            max_depth,
            output,
            format,
        } => {
            if format == Format::Ntriples {
                return Err(CliError::usage("walk outputs are csv or json"));
            }
            let (store, hashes) = load_store(&input)?;
            let content = match (&grammar, &query) {
                (Some(grammar_path), None) => {
                    let seed = seed
                        .ok_or_else(|| CliError::usage("--seed is required for walker runs"))?;
                    let text = std::fs::read_to_string(grammar_path)
                        .map_err(|e| CliError::data(format!("{}: {e}", grammar_path.display())))?;
                    let grammar = walker::Grammar::from_json(&text).map_err(CliError::data)?;
                    let starts: Vec<Term> = start
                        .iter()
                        .map(|s| parse_uri(s))
                        .collect::<Result<_, _>>()?;
                    let starts_opt = if starts.is_empty() {
                        None
                    } else {
                        Some(starts.as_slice())
                    };
                    let counts = walker::run_random_walkers(
                        &store, &grammar, walkers, steps, seed, starts_opt,
                    )
                    .map_err(CliError::data)?;
                    match format {
                        Format::Csv => walker::counts_to_csv(&counts),
                        _ => pretty(&walker::counts_to_json(&counts)),
                    }
                }
                (None, Some(query_text)) => {
                    let source = source
                        .ok_or_else(|| CliError::usage("--source is required with --query"))?;
                    let q = walker::parse_walker_query(query_text).map_err(CliError::data)?;
                    let depths =
                        walker::run_geodesic_walkers(&store, &q, &parse_uri(&source)?, max_depth);
                    depths_output(&depths, format)
                }
                _ => {
                    return Err(CliError::usage(
                        "walk needs exactly one of --grammar or --query",
                    ))
                }
            };
            write_atomic(&output, &content)?;
            write_manifest(&output, &hashes)?;
            Ok(0)
        }
        Command::Export {
            input,
            output,
            format,
        } => {
            let (store, hashes) = load_store(&input)?;
            let content = match format {
                Format::Ntriples => serialize_ntriples(&store),
                Format::Json => pretty(&store_to_json(&store)),
                Format::Csv => store_to_csv(&store),
            };
            write_atomic(&output, &content)?;
            write_manifest(&output, &hashes)?;
            Ok(0)
        }
    }
}

fn store_to_json(store: &TripleStore) -> serde_json::Value {
    serde_json::Value::Array(
        store
            .iter()
            .map(|t| {
                serde_json::json!({
                    "s": t.s.to_ntriples(),
                    "p": t.p.to_ntriples(),
                    "o": t.o.to_ntriples(),
                })
            })
            .collect(),
    )
}

fn store_to_csv(store: &TripleStore) -> String {
    let mut out = String::from("s,p,o\n");
    for t in store.iter() {
        let _ = writeln!(
            out,
            "{},{},{}",
            t.s.to_ntriples(),
            t.p.to_ntriples(),
            t.o.to_ntriples()
        );
    }
    out
}

fn collect_slices(expr: &algebra::PathExpr, out: &mut Vec<Term>) {
    match expr {
        algebra::PathExpr::Slice(p) => {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        algebra::PathExpr::Transpose(e) | algebra::PathExpr::Not(e) => collect_slices(e, out),
        algebra::PathExpr::Product(a, b) | algebra::PathExpr::Hadamard(a, b) => {
            collect_slices(a, out);
            collect_slices(b, out);
        }
        algebra::PathExpr::Ones | algebra::PathExpr::Id => {}
    }
}

fn depths_output(depths: &BTreeMap<Term, usize>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("term,depth\n");
            for (t, d) in depths {
                let _ = writeln!(out, "{},{d}", t.to_ntriples());
            }
            out
        }
        _ => pretty(&serde_json::Value::Array(
            depths
                .iter()
                .map(|(t, d)| serde_json::json!({"term": t.to_ntriples(), "depth": d}))
                .collect(),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_reason(
    mut store: TripleStore,
    mode: Mode,
    output: &Path,
    format: Format,
    k: u32,
    rules: Option<&str>,
    max_rounds: usize,
    fail_on_inconsistency: bool,
) -> Result<i32, CliError> {
    match mode {
        Mode::Rdfs => {
            let input_len = store.len();
            let entailments = rdfs::materialize_rdfs(&mut store).map_err(CliError::data)?;
            let content = match format {
                Format::Ntriples => serialize_ntriples(&store),
                _ => pretty(&serde_json::json!({
                    "mode": "rdfs",
                    "input_triples": input_len,
                    "total_triples": store.len(),
                    "entailments": entailments.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                })),
            };
            write_atomic(output, &content)?;
            Ok(0)
        }
        Mode::Owl => {
            let input_len = store.len();
            let outcome = owl::materialize_owl(&mut store).map_err(CliError::data)?;
            let content = match format {
                Format::Ntriples => serialize_ntriples(&store),
                _ => pretty(&serde_json::json!({
                    "mode": "owl",
                    "input_triples": input_len,
                    "total_triples": store.len(),
                    "entailments": outcome
                        .entailments
                        .iter()
                        .map(|e| e.to_json())
                        .collect::<Vec<_>>(),
                    "inconsistencies": outcome
                        .inconsistencies
                        .iter()
                        .map(|i| i.to_json())
                        .collect::<Vec<_>>(),
                    "same_as_classes": outcome
                        .partition
                        .classes()
                        .iter()
                        .map(|class| class.iter().map(Term::to_ntriples).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })),
            };
            write_atomic(output, &content)?;
            if fail_on_inconsistency && !outcome.inconsistencies.is_empty() {
                eprintln!(
                    "error: {} inconsistency(ies) detected",
                    outcome.inconsistencies.len()
                );
                return Ok(EXIT_INCONSISTENT);
            }
            Ok(0)
        }
        Mode::Nal => {
            let triples: Vec<Triple> = store.iter().cloned().collect();
            let (judgments, products) = nal::decode_judgments(&triples).map_err(CliError::data)?;
            let rules = parse_rules(rules)?;
            let saturated =
                nal::saturate(&judgments, &rules, k, max_rounds).map_err(CliError::data)?;
            let content = match format {
                Format::Ntriples => {
                    let mut out_store = TripleStore::new();
                    for j in &saturated {
                        for t in nal::encode_judgment(j) {
                            out_store.insert(t);
                        }
                    }
                    for pj in &products {
                        for t in nal::encode_product_judgment(pj) {
                            out_store.insert(t);
                        }
                    }
                    serialize_ntriples(&out_store)
                }
                _ => pretty(&serde_json::json!({
                    "mode": "nal",
                    "k": k,
                    "rules": rules.iter().map(|r| r.name()).collect::<Vec<_>>(),
                    "judgments": saturated
                        .iter()
                        .map(|j| serde_json::json!({
                            "subject": j.subject.to_ntriples(),
                            "predicate": j.predicate_term.to_ntriples(),
                            "frequency": j.tv.f,
                            "confidence": j.tv.c,
                            "tv": format_tv(j.tv.f, j.tv.c),
                            "pointer": j.pointer.to_ntriples(),
                        }))
                        .collect::<Vec<_>>(),
                    "product_judgments": products.len(),
                })),
            };
            write_atomic(output, &content)?;
            Ok(0)
        }
    }
}

fn parse_rules(spec: Option<&str>) -> Result<Vec<nal::SyllogismRule>, CliError> {
    let Some(spec) = spec else {
        return Ok(vec![
            nal::SyllogismRule::Deduction,
            nal::SyllogismRule::Induction,
        ]);
    };
    spec.split(',')
        .map(|name| match name.trim() {
            "deduction" => Ok(nal::SyllogismRule::Deduction),
            "induction" => Ok(nal::SyllogismRule::Induction),
            "abduction" => Ok(nal::SyllogismRule::Abduction),
            "exemplification" => Ok(nal::SyllogismRule::Exemplification),
            other => Err(CliError::usage(format!("unknown NAL rule {other:?}"))),
        })
        .collect()
}

struct MetricParams {
    alpha: f64,
    tol: f64,
    delta: Option<f64>,
    steps: usize,
    max_iter: usize,
    source: Option<String>,
    target: Option<String>,
    seed_vertex: Vec<String>,
    value_predicate: Option<String>,
}

fn vertex_index(graph: &netkit::Graph, uri: &str) -> Result<usize, CliError> {
    let term = parse_uri(uri)?;
    graph
        .index_of(&term)
        .ok_or_else(|| CliError::data(format!("vertex {uri} not in graph")))
}

/// Vertex metadata via a linking predicate; the first (sorted) object
/// wins when several are asserted.
fn vertex_metadata(
    store: &TripleStore,
    graph: &netkit::Graph,
    predicate: &Term,
) -> BTreeMap<usize, Term> {
    use semnet::{PatternSlot, TriplePattern};
    let mut out = BTreeMap::new();
    for i in 0..graph.n() {
        let matches = store.match_triples(&TriplePattern::new(
            PatternSlot::Term(graph.term(i).clone()),
            PatternSlot::Term(predicate.clone()),
            PatternSlot::var("v"),
        ));
        if let Some(t) = matches.first() {
            out.insert(i, t.o.clone());
        }
    }
    out
}

fn run_metric(
    store: &TripleStore,
    graph: &netkit::Graph,
    metric: Metric,
    params: MetricParams,
    format: Format,
) -> Result<String, CliError> {
    let rank_output = |rank: &netkit::RankVector| match format {
        Format::Csv => netkit::rank_to_csv(graph, rank),
        _ => pretty(&netkit::rank_to_json(graph, rank)),
    };
    match metric {
        Metric::Sp => {
            let source = params
                .source
                .ok_or_else(|| CliError::usage("sp requires --source"))?;
            let target = params
                .target
                .ok_or_else(|| CliError::usage("sp requires --target"))?;
            let (i, j) = (vertex_index(graph, &source)?, vertex_index(graph, &target)?);
            let length = netkit::shortest_path_length(graph, i, j).map_err(CliError::data)?;
            Ok(pretty(&serde_json::json!({
                "source": source,
                "target": target,
                "length": length,
            })))
        }
        Metric::Geodesics => {
            let summary = netkit::geodesic_summary(graph).map_err(CliError::data)?;
            Ok(match format {
                Format::Csv => netkit::geodesic_to_csv(graph, &summary),
                _ => pretty(&netkit::geodesic_to_json(graph, &summary)),
            })
        }
        Metric::Closeness => Ok(rank_output(&netkit::closeness(graph).map_err(CliError::data)?)),
        Metric::Betweenness => {
            Ok(rank_output(&netkit::betweenness(graph).map_err(CliError::data)?))
        }
        Metric::Stationary => Ok(rank_output(
            &netkit::stationary_distribution(graph, params.tol, params.max_iter)
                .map_err(CliError::data)?,
        )),
        Metric::Pagerank => Ok(rank_output(
            &netkit::pagerank(graph, params.alpha, params.tol, params.max_iter)
                .map_err(CliError::data)?,
        )),
        Metric::Spread => {
            let delta = params
                .delta
                .ok_or_else(|| CliError::usage("spread requires --delta"))?;
            if params.seed_vertex.is_empty() {
                return Err(CliError::usage("spread requires at least one --seed-vertex"));
            }
            let mut seeds = BTreeMap::new();
            for spec in &params.seed_vertex {
                let (uri, energy) = spec
                    .split_once('=')
                    .ok_or_else(|| CliError::usage("--seed-vertex expects uri=energy"))?;
                let energy: f64 = energy
                    .parse()
                    .map_err(|e| CliError::usage(format!("bad seed energy {energy:?}: {e}")))?;
                seeds.insert(vertex_index(graph, uri)?, energy);
            }
            Ok(rank_output(
                &netkit::spreading_activation(graph, &seeds, params.steps, delta)
                    .map_err(CliError::data)?,
            ))
        }
        Metric::AssortScalar | Metric::AssortNominal => {
            let vp = params
                .value_predicate
                .ok_or_else(|| CliError::usage("assortativity requires --value-predicate"))?;
            let metadata = vertex_metadata(store, graph, &parse_uri(&vp)?);
            let r = match metric {
                Metric::AssortScalar => {
                    let mut values = BTreeMap::new();
                    for (i, term) in &metadata {
                        let lexical = match term {
                            Term::Literal { lexical, .. } => lexical.clone(),
                            other => other.to_ntriples(),
                        };
                        let v: f64 = lexical.parse().map_err(|e| {
                            CliError::data(format!("non-numeric value {lexical:?}: {e}"))
                        })?;
                        values.insert(*i, v);
                    }
                    netkit::assortativity_scalar(graph, &values).map_err(CliError::data)?
                }
                _ => {
                    let labels: BTreeMap<usize, String> = metadata
                        .iter()
                        .map(|(i, term)| {
                            let label = match term {
                                Term::Literal { lexical, .. } => lexical.clone(),
                                other => other.to_ntriples(),
                            };
                            (*i, label)
                        })
                        .collect();
                    netkit::assortativity_nominal(graph, &labels).map_err(CliError::data)?
                }
            };
            Ok(pretty(&serde_json::json!({ "assortativity": r })))
        }
    }
}
