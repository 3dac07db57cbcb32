//! `xormagic`: verify, search, construct and analyse XOR-magic graphs.
//!
//! Exit codes: 0 affirmative, 10 negative with a certificate (not magic,
//! infeasible, refuted), 20 inconclusive (budget exhausted), 2 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use xormagic::algebra::{analyze, NecessaryCondition};
use xormagic::catalog;
use xormagic::cert::Certificate;
use xormagic::degrees::{parse_rules, reachable_degrees, DegreeFactBase};
use xormagic::families::parse_family;
use xormagic::graph::GraphJson;
use xormagic::labeling::{
    build_power_n_graph, cartesian_with_labeling, complement_transport, strong_with_labeling,
    verify, LabelingJson,
};
use xormagic::milp::{build_model, render_lp, ModelSpec, Variant};
use xormagic::search::{certify, solve, Budget, SearchProblem, SearchStatus};
use xormagic::{Graph, Labeling, Mode, Parity};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 10;
const EXIT_INCONCLUSIVE: u8 = 20;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "xormagic",
    version,
    about = "Open and closed XOR-magic graphs over (Z2)^n"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate (graph + labeling + mode).
    Verify(VerifyArgs),
    /// Exhaustive search for a d-regular XOR-magic graph under a fixed labeling.
    Search(SearchArgs),
    /// Write a MILP model in CPLEX LP format.
    ExportMilp(ExportArgs),
    /// Determinant, GF(2) rank and Smith normal form of an adjacency matrix.
    Algebra(AlgebraArgs),
    /// Build graphs from bases, products and complements.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Embedded, self-checking fixtures.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Degrees reachable from the known base cases.
    Degrees(DegreesArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file, or `catalog:ID`.
    #[arg(long)]
    cert: String,
    /// Check this neighbourhood instead of the one recorded in the certificate.
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    mode: Mode,
    /// Only accept connected graphs.
    #[arg(long)]
    connected: bool,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    budget_secs: Option<f64>,
    /// Budget in search nodes.
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Disable the zero-vertex symmetry-breaking rule.
    #[arg(long)]
    no_symmetry: bool,
    /// Disable randomized restarts.
    #[arg(long)]
    no_restarts: bool,
    /// Labeling file (`{"n": .., "labels": [..]}`) or certificate; default canonical.
    #[arg(long)]
    labeling: Option<PathBuf>,
    /// Write the certificate of a feasible result here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantName {
    Model1,
    Model2,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    mode: Mode,
    #[arg(long, value_enum)]
    variant: VariantName,
    /// Chunk length for model2.
    #[arg(long)]
    t: Option<u32>,
    /// Emit both orientations of every edge variable plus symmetry rows.
    #[arg(long)]
    literal: bool,
    /// Labeling file or certificate; default canonical.
    #[arg(long)]
    labeling: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Family expression, e.g. `circulant:16:1,6,8` or `complement(mobius:8)`.
    #[arg(long)]
    family: Option<String>,
    /// Graph JSON file or certificate.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Catalog entry id.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Args)]
struct AlgebraArgs {
    #[command(flatten)]
    source: GraphSource,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// XOR-magic graph of power n with the given parity.
    Power {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cartesian or strong product of two certificates with concatenated labels.
    Product {
        #[arg(long, value_enum)]
        kind: ProductKind,
        /// Certificate file or `catalog:ID`.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Neighbourhood of the result; inferred from the factors when absent.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complement with the same labeling and the other neighbourhood.
    Complement {
        #[arg(long)]
        cert: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph of a family expression (graph JSON, no labeling).
    Family {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Cartesian,
    Strong,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List entries with their self-check verdicts.
    List,
    /// Write certificates of entries into a directory as `<id>.json`.
    Export {
        /// Entry id; every entry when absent.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DegreesArgs {
    /// Target power (order 2^n).
    #[arg(long)]
    n: u32,
    #[arg(long)]
    parity: Parity,
    /// Comma-separated subset of cartesian,strong,complement, or `all`.
    #[arg(long, default_value = "all")]
    rules: String,
    /// Print the derivation of every degree.
    #[arg(long)]
    trace: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Verify(a) => cmd_verify(cli.json, a),
        Command::Search(a) => cmd_search(cli.json, a),
        Command::ExportMilp(a) => cmd_export(cli.json, a),
        Command::Algebra(a) => cmd_algebra(cli.json, a),
        Command::Construct(c) => cmd_construct(cli.json, c),
        Command::Catalog(c) => cmd_catalog(cli.json, c),
        Command::Degrees(a) => cmd_degrees(cli.json, a),
    }
}

fn emit(json: bool, value: &Value, text: impl FnOnce() -> String) {
    if json {
        println!("{value}");
    } else {
        println!("{}", text());
    }
}

/// Loads a certificate from a file or from `catalog:ID`.
fn load_cert(source: &str) -> Result<Certificate> {
    if let Some(id) = source.strip_prefix("catalog:") {
        return Ok(catalog::load(id)?.certificate());
    }
    let text = fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    Certificate::parse(&text).with_context(|| format!("parsing certificate {source}"))
}

fn load_labeling(path: &Path) -> Result<Labeling> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let json: LabelingJson = match value.get("labeling") {
        Some(inner) => serde_json::from_value(inner.clone()),
        None => serde_json::from_value(value),
    }
    .with_context(|| format!("{} is neither a labeling nor a certificate", path.display()))?;
    Ok(Labeling::from_json(&json)?)
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let json: GraphJson = match value.get("graph") {
        Some(inner) => serde_json::from_value(inner.clone()),
        None => serde_json::from_value(value),
    }
    .with_context(|| format!("{} is neither a graph nor a certificate", path.display()))?;
    Ok(Graph::from_json(&json)?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_verify(json: bool, a: &VerifyArgs) -> Result<u8> {
    let cert = load_cert(&a.cert)?;
    let (g, l) = cert
        .decode()
        .with_context(|| format!("decoding {}", a.cert))?;
    let mode = a.mode.unwrap_or(cert.mode);
    let verdict = verify(&g, &l, mode);
    let value = json!({
        "verdict": verdict.code(),
        "detail": verdict.to_string(),
        "mode": mode.to_string(),
        "order": g.order(),
        "degree": g.regularity(),
        "connected": g.is_connected(),
    });
    emit(json, &value, || {
        let degree = g
            .regularity()
            .map_or("irregular".to_string(), |d| format!("{d}-regular"));
        format!("{verdict} ({mode}, order {}, {degree})", g.order())
    });
    Ok(if verdict.is_magic() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_search(json: bool, a: &SearchArgs) -> Result<u8> {
    let mut p = SearchProblem::new(a.n, a.d, a.mode)?
        .connected(a.connected)
        .seed(a.seed)
        .workers(a.workers)
        .symmetry_breaking(!a.no_symmetry)
        .restarts(!a.no_restarts)
        .budget(Budget {
            time: a.budget_secs.map(std::time::Duration::from_secs_f64),
            nodes: a.node_limit,
        });
    if let Some(path) = &a.labeling {
        p = p.with_labeling(load_labeling(path)?)?;
    }
    let out = solve(&p);
    let certified = match &out.status {
        SearchStatus::Feasible { .. } => {
            if !certify(&p, &out) {
                bail!("internal error: search result failed independent verification");
            }
            true
        }
        _ => false,
    };
    if let (Some(path), Some(g)) = (&a.out, out.status.graph()) {
        Certificate::new(g, &p.labeling, p.mode).save(path)?;
    }
    let value = json!({
        "status": out.status.name(),
        "n": a.n,
        "d": a.d,
        "mode": a.mode.to_string(),
        "require_connected": a.connected,
        "connected": match &out.status { SearchStatus::Feasible { connected, .. } => Some(*connected), _ => None },
        "certified": certified,
        "nodes": out.stats.nodes,
        "connectivity_prunes": out.stats.connectivity_prunes,
        "restarts": out.stats.restarts,
        "elapsed_secs": out.stats.elapsed.as_secs_f64(),
        "certificate": a.out.as_ref().filter(|_| certified).map(|p| p.display().to_string()),
    });
    emit(json, &value, || {
        format!(
            "{} ({} nodes, {} restarts, {:.3} s){}",
            out.status,
            out.stats.nodes,
            out.stats.restarts,
            out.stats.elapsed.as_secs_f64(),
            if certified { ", certified" } else { "" }
        )
    });
    Ok(match out.status {
        SearchStatus::Feasible { .. } => EXIT_OK,
        SearchStatus::Infeasible => EXIT_NEGATIVE,
        SearchStatus::BudgetExhausted => EXIT_INCONCLUSIVE,
    })
}

fn cmd_export(json: bool, a: &ExportArgs) -> Result<u8> {
    let variant = match (a.variant, a.t) {
        (VariantName::Model1, None) => Variant::Model1,
        (VariantName::Model1, Some(_)) => bail!("--t applies to model2 only"),
        (VariantName::Model2, Some(t)) => Variant::Model2 { t },
        (VariantName::Model2, None) => bail!("model2 needs --t"),
    };
    let labeling = match &a.labeling {
        Some(path) => load_labeling(path)?,
        None => Labeling::canonical(a.n)?,
    };
    let spec = ModelSpec::new(a.n, a.d, a.mode, variant).literal(a.literal);
    let model = build_model(&spec, &labeling)?;
    let text = render_lp(&model);
    match &a.out {
        Some(path) => write_text(path, &text)?,
        None if !json => print!("{text}"),
        None => {}
    }
    if json || a.out.is_some() {
        let c = model.census();
        let value = json!({
            "variant": variant.to_string(),
            "base": model.base,
            "rows": c.rows(),
            "symmetry_rows": c.symmetry,
            "degree_rows": c.degree,
            "parity_rows": c.parity,
            "encoded_rows": c.encoded,
            "binaries": c.binaries,
            "integers": c.integers,
            "bounded": c.bounded,
            "out": a.out.as_ref().map(|p| p.display().to_string()),
        });
        emit(json, &value, || {
            format!(
                "{variant}: {} rows ({} degree, {} parity, {} encoded, {} symmetry), {} binaries, {} integers",
                c.rows(), c.degree, c.parity, c.encoded, c.symmetry, c.binaries, c.integers
            )
        });
    }
    Ok(EXIT_OK)
}

fn cmd_algebra(json: bool, a: &AlgebraArgs) -> Result<u8> {
    let s = &a.source;
    let g = if let Some(spec) = &s.family {
        parse_family(spec)?
    } else if let Some(path) = &s.graph {
        load_graph(path)?
    } else {
        catalog::load(s.catalog.as_deref().expect("clap enforces one source"))?.graph
    };
    let report = analyze(&g);
    let value = serde_json::to_value(&report)?;
    emit(json, &value, || {
        let diag: Vec<String> = report
            .snf_diagonal
            .iter()
            .map(ToString::to_string)
            .collect();
        format!(
            "order {}\ndet {}\ndet mod 2 {}\ngf2 rank {}\nsnf diagonal [{}]\nnecessary condition (open) {}\nsnf prediction {}",
            report.order,
            report.det,
            report.det_mod2,
            report.gf2_rank,
            diag.join(", "),
            report.necessary_condition_open,
            report.snf_prediction
        )
    });
    Ok(match report.necessary_condition_open {
        NecessaryCondition::Fail => EXIT_NEGATIVE,
        NecessaryCondition::Pass => EXIT_OK,
    })
}

fn finish_construct(
    json: bool,
    g: &Graph,
    l: &Labeling,
    mode: Mode,
    out: Option<&PathBuf>,
) -> Result<u8> {
    let cert = Certificate::new(g, l, mode);
    if let Some(path) = out {
        cert.save(path)?;
    }
    let verdict = verify(g, l, mode);
    let value = json!({
        "order": g.order(),
        "degree": g.regularity(),
        "mode": mode.to_string(),
        "verdict": verdict.code(),
        "out": out.map(|p| p.display().to_string()),
    });
    if out.is_none() && !json {
        println!("{}", cert.to_json_string());
    } else {
        emit(json, &value, || {
            let degree = g
                .regularity()
                .map_or("irregular".to_string(), |d| format!("{d}-regular"));
            format!("order {}, {degree}, {mode}: {verdict}", g.order())
        });
    }
    Ok(if verdict.is_magic() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_construct(json: bool, c: &ConstructCommand) -> Result<u8> {
    match c {
        ConstructCommand::Power { n, parity, out } => {
            let (g, l) = build_power_n_graph(*n, *parity)?;
            finish_construct(json, &g, &l, parity.mode(), out.as_ref())
        }
        ConstructCommand::Product {
            kind,
            left,
            right,
            mode,
            out,
        } => {
            let (a, b) = (load_cert(left)?, load_cert(right)?);
            let ((g, lg), (h, lh)) = (a.decode()?, b.decode()?);
            let (p, l) = match kind {
                ProductKind::Cartesian => cartesian_with_labeling(&g, &lg, &h, &lh)?,
                ProductKind::Strong => strong_with_labeling(&g, &lg, &h, &lh)?,
            };
            // Cartesian: equal modes give a closed product, mixed modes an open one;
            // strong products of closed graphs stay closed.
            let inferred = match kind {
                ProductKind::Cartesian if a.mode == b.mode => Mode::Closed,
                ProductKind::Cartesian => Mode::Open,
                ProductKind::Strong => Mode::Closed,
            };
            finish_construct(json, &p, &l, mode.unwrap_or(inferred), out.as_ref())
        }
        ConstructCommand::Complement { cert, out } => {
            let c = load_cert(cert)?;
            let (g, l) = c.decode()?;
            let (h, lh) = complement_transport(&g, &l)?;
            let mode = match c.mode {
                Mode::Open => Mode::Closed,
                Mode::Closed => Mode::Open,
            };
            finish_construct(json, &h, &lh, mode, out.as_ref())
        }
        ConstructCommand::Family { spec, out } => {
            let g = parse_family(spec)?;
            let text = serde_json::to_string(&g.to_json())?;
            match out {
                Some(path) => write_text(path, &format!("{text}\n"))?,
                None => println!("{text}"),
            }
            if out.is_some() || json {
                let value = json!({
                    "order": g.order(),
                    "degree": g.regularity(),
                    "edges": g.edge_count(),
                    "connected": g.is_connected(),
                });
                emit(json, &value, || {
                    format!(
                        "order {}, {} edges, degree {:?}",
                        g.order(),
                        g.edge_count(),
                        g.regularity()
                    )
                });
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_catalog(json: bool, c: &CatalogCommand) -> Result<u8> {
    match c {
        CatalogCommand::List => {
            let entries = catalog::list()?;
            let value: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "id": e.id,
                        "order": e.graph.order(),
                        "degree": e.degree,
                        "mode": e.mode.to_string(),
                        "verdict": e.verdict.code(),
                        "provenance": e.provenance,
                    })
                })
                .collect();
            emit(json, &Value::Array(value), || {
                entries
                    .iter()
                    .map(|e| {
                        let d = e.degree.map_or("-".to_string(), |d| d.to_string());
                        format!(
                            "{:<22} order {:>4}  degree {:>4}  {:<6}  {}",
                            e.id,
                            e.graph.order(),
                            d,
                            e.mode,
                            e.verdict.code()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(EXIT_OK)
        }
        CatalogCommand::Export { id, out } => {
            fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
            let entries = match id {
                Some(id) => vec![catalog::load(id)?],
                None => catalog::list()?,
            };
            let mut written = Vec::new();
            for e in &entries {
                let path = out.join(format!("{}.json", e.id));
                e.certificate().save(&path)?;
                written.push(path.display().to_string());
            }
            emit(json, &json!({ "written": written }), || written.join("\n"));
            Ok(EXIT_OK)
        }
    }
}

fn cmd_degrees(json: bool, a: &DegreesArgs) -> Result<u8> {
    let rules = parse_rules(&a.rules)?;
    let reach = reachable_degrees(&DegreeFactBase::published(), a.n, a.parity, &rules)?;
    let degrees: Vec<usize> = reach.keys().copied().collect();
    let value = json!({
        "n": a.n,
        "parity": a.parity.to_string(),
        "rules": rules.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "degrees": degrees,
        "derivations": if a.trace {
            reach.iter().map(|(d, t)| Ok((d.to_string(), serde_json::to_value(t)?))).collect::<Result<serde_json::Map<_, _>>>()?.into()
        } else {
            Value::Null
        },
    });
    emit(json, &value, || {
        if a.trace {
            reach
                .iter()
                .map(|(d, t)| format!("{d}: {t}"))
                .collect::<Vec<_>>()
                .join("\n")
        } else {
            degrees
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        }
    });
    Ok(EXIT_OK)
}
