use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use clique_census::audit::{
    audit, bound_degenerate, check_binom_sum_inequality, refined_exponents, AuditConfig, Check,
};
use clique_census::constructions::lower_bound_constant;
use clique_census::numeric::parse_rational;
use clique_census::sparsity::{
    check_local_sparsity, lemma_sparsity_params, SparsityError, SparsityMode, SparsityParams,
    Verdict, DEFAULT_EXHAUSTIVE_LIMIT,
};
use clique_census::topo::{
    has_minor, has_subdivision, TopoError, DEFAULT_MINOR_LIMIT, DEFAULT_SUBDIVISION_LIMIT,
};
use clique_census::tree::DEFAULT_NODE_CAP;
use clique_census::{census, count_cliques, enumerate_cliques, ConstructionSpec, Graph};

const THREADS_ENV: &str = "CLIQUE_CENSUS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "clique-census",
    version,
    about = "Clique counting and bound audits for sparse graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Total number of cliques, the empty clique included.
    Count(Common),
    /// Number of cliques of each size.
    Census(Common),
    /// Every clique, one per line.
    Enumerate(Common),
    /// Emit a construction as an edge list.
    Generate(Common),
    /// Search for a K_t-subdivision.
    CheckSubdivision(Common),
    /// Search for a K_t-minor.
    CheckMinor(Common),
    /// Check (beta, N)-local sparsity.
    SparseCheck(SparseArgs),
    /// Audit the clique-count bound for graphs without a K_t-subdivision.
    Audit(AuditArgs),
    /// Evaluate closed-form bounds and constants.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exhaustive,
    Peeling,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Edge-list file (`.col` is read as DIMACS, `-` is stdin).
    #[arg(long, conflicts_with = "construct")]
    input: Option<PathBuf>,
    /// Construction, inline (`family:key=value,...`) or a JSON file.
    #[arg(long)]
    construct: Option<String>,
    #[arg(long)]
    t: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
    exhaustive_limit: usize,
    /// Seed for random constructions; overrides a seed in the spec.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (falls back to CLIQUE_CENSUS_THREADS).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SparseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Degree fraction beta, e.g. `9/10` or `0.9`.
    #[arg(long, requires = "big_n")]
    beta: Option<String>,
    /// Size threshold N.
    #[arg(long = "big-n")]
    big_n: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
}

#[derive(Debug, Clone, Args, Serialize)]
struct AuditArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Assert freeness of K_t-subdivisions when the graph is too large for the oracle.
    #[arg(long)]
    assume_subdivision_free: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Refined exponents for (alpha, beta); needs --beta and --t.
    #[arg(long, requires_all = ["beta", "t"])]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Lower-bound exponent for K_{2,...,2} with this many parts.
    #[arg(long)]
    parts: Option<u32>,
    /// Binomial chain at `m,k` (k may be a fraction).
    #[arg(long)]
    binom: Option<String>,
    /// Degenerate-graph bound at `d,n`.
    #[arg(long)]
    degenerate: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Capacity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Count(c)
        | Command::Census(c)
        | Command::Enumerate(c)
        | Command::Generate(c)
        | Command::CheckSubdivision(c)
        | Command::CheckMinor(c) => c,
        Command::SparseCheck(a) => &a.common,
        Command::Audit(a) => &a.common,
        Command::Bounds(a) => &a.common,
    };
    let result = configure_threads(common)
        .and_then(|()| run(&cli.command))
        .and_then(|(text, ok)| {
            emit(common.output.as_deref(), &text)?;
            Ok(ok)
        });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            let (Failure::Usage(msg) | Failure::Capacity(msg)) = &failure;
            eprintln!("error: {msg}");
            ExitCode::from(failure.code())
        }
    }
}

fn configure_threads(common: &Common) -> Result<(), Failure> {
    let threads = match common.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| {
                Failure::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    Ok(())
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Count(c) => run_count(c),
        Command::Census(c) => run_census(c),
        Command::Enumerate(c) => run_enumerate(c),
        Command::Generate(c) => run_generate(c),
        Command::CheckSubdivision(c) => run_check_subdivision(c),
        Command::CheckMinor(c) => run_check_minor(c),
        Command::SparseCheck(a) => run_sparse_check(a),
        Command::Audit(a) => run_audit(a),
        Command::Bounds(a) => run_bounds(a),
    }
}

fn command_name(command: &str, config: &impl Serialize) -> Value {
    let mut value = serde_json::to_value(config).expect("config serializes");
    if let Value::Object(map) = &mut value {
        map.insert("command".into(), Value::String(command.into()));
        map.remove("output");
    }
    value
}

fn json_report(command: &str, config: &impl Serialize, body: Value) -> String {
    let mut report = json!({ "config": command_name(command, config) });
    if let (Value::Object(map), Value::Object(body)) = (&mut report, body) {
        map.extend(body);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

fn construction(common: &Common) -> Result<Option<ConstructionSpec>, Failure> {
    let Some(raw) = &common.construct else {
        return Ok(None);
    };
    let mut spec = if Path::new(raw).is_file() {
        let text = std::fs::read_to_string(raw)
            .map_err(|e| Failure::Usage(format!("cannot read construction {raw}: {e}")))?;
        ConstructionSpec::from_json(&text)
    } else {
        raw.parse()
    }
    .map_err(|e| Failure::Usage(format!("construction `{raw}`: {e}")))?;
    if common.seed.is_some() {
        spec.seed = common.seed;
    }
    Ok(Some(spec))
}

fn load_graph(common: &Common) -> Result<Graph, Failure> {
    if let Some(spec) = construction(common)? {
        return spec
            .generate()
            .map_err(|e| Failure::Usage(format!("construction `{spec}`: {e}")));
    }
    let Some(path) = &common.input else {
        return Err(Failure::Usage(
            "one of --input or --construct is required".into(),
        ));
    };
    let text = if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        text
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    let parsed = if path.extension().is_some_and(|e| e == "col") {
        Graph::parse_dimacs(&text)
    } else {
        Graph::parse_edge_list(&text)
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn require_t(common: &Common, command: &str) -> Result<u32, Failure> {
    match common.t {
        Some(t) if t >= 1 => Ok(t),
        Some(_) => Err(Failure::Usage(format!("{command}: --t must be at least 1"))),
        None => Err(Failure::Usage(format!("{command} requires --t"))),
    }
}

fn run_count(c: &Common) -> Outcome {
    let g = load_graph(c)?;
    let count = count_cliques(&g);
    let text = match c.format {
        Format::Text => format!("{count}\n"),
        Format::Json => json_report(
            "count",
            c,
            json!({ "n": g.n(), "edges": g.edge_count(), "clique_count": count.to_string() }),
        ),
    };
    Ok((text, true))
}

fn run_census(c: &Common) -> Outcome {
    let g = load_graph(c)?;
    let result = census(&g);
    let text = match c.format {
        Format::Text => {
            let mut out = String::new();
            for (size, count) in result.counts.iter().enumerate() {
                writeln!(out, "{size}\t{count}").expect("writing to a string");
            }
            writeln!(out, "total\t{}", result.total).expect("writing to a string");
            out
        }
        Format::Json => json_report(
            "census",
            c,
            json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "census": result,
                "total": result.total.to_string(),
            }),
        ),
    };
    Ok((text, true))
}

fn run_enumerate(c: &Common) -> Outcome {
    let g = load_graph(c)?;
    let text = match c.format {
        Format::Text => {
            let mut out = String::new();
            for clique in enumerate_cliques(&g) {
                let line: Vec<String> = clique.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let cliques: Vec<_> = enumerate_cliques(&g).collect();
            json_report("enumerate", c, json!({ "n": g.n(), "cliques": cliques }))
        }
    };
    Ok((text, true))
}

fn run_generate(c: &Common) -> Outcome {
    let Some(spec) = construction(c)? else {
        return Err(Failure::Usage("generate requires --construct".into()));
    };
    let g = spec
        .generate()
        .map_err(|e| Failure::Usage(format!("construction `{spec}`: {e}")))?;
    let text = match c.format {
        Format::Text => g.to_edge_list(),
        Format::Json => json_report(
            "generate",
            c,
            json!({
                "construction": spec,
                "n": g.n(),
                "edges": g.edge_count(),
                "predicted_clique_count": spec.predicted_clique_count().map(|x| x.to_string()),
                "edge_list": g.to_edge_list(),
            }),
        ),
    };
    Ok((text, true))
}

fn topo_failure(e: TopoError) -> Failure {
    match e {
        TopoError::TooLarge { .. } => Failure::Capacity(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn run_check_subdivision(c: &Common) -> Outcome {
    let t = require_t(c, "check-subdivision")?;
    let g = load_graph(c)?;
    let limit = c.oracle_limit.unwrap_or(DEFAULT_SUBDIVISION_LIMIT);
    let witness = has_subdivision(&g, t as usize, limit).map_err(topo_failure)?;
    let text = match (c.format, &witness) {
        (Format::Text, None) => "none\n".to_string(),
        (Format::Text, Some(w)) => {
            let mut out = format!("branch {}\n", join(w.branch_vertices.iter()));
            for p in &w.paths {
                writeln!(out, "{} {}: {}", p.pair[0], p.pair[1], join(p.path.iter()))
                    .expect("writing to a string");
            }
            out
        }
        (Format::Json, _) => json_report(
            "check-subdivision",
            c,
            json!({
                "result": if witness.is_some() { "found" } else { "none" },
                "witness": witness,
            }),
        ),
    };
    Ok((text, true))
}

fn run_check_minor(c: &Common) -> Outcome {
    let t = require_t(c, "check-minor")?;
    let g = load_graph(c)?;
    let limit = c.oracle_limit.unwrap_or(DEFAULT_MINOR_LIMIT);
    let witness = has_minor(&g, t as usize, limit).map_err(topo_failure)?;
    let text = match (c.format, &witness) {
        (Format::Text, None) => "none\n".to_string(),
        (Format::Text, Some(w)) => w
            .branch_sets
            .iter()
            .map(|set| format!("{}\n", join(set.iter())))
            .collect(),
        (Format::Json, _) => json_report(
            "check-minor",
            c,
            json!({
                "result": if witness.is_some() { "found" } else { "none" },
                "witness": witness,
            }),
        ),
    };
    Ok((text, true))
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn rational_arg(name: &str, raw: &str) -> Result<BigRational, Failure> {
    parse_rational(raw)
        .ok_or_else(|| Failure::Usage(format!("--{name}: `{raw}` is not a rational number")))
}

fn run_sparse_check(a: &SparseArgs) -> Outcome {
    let c = &a.common;
    let g = load_graph(c)?;
    let params = match (&a.beta, a.big_n, c.t) {
        (Some(beta), Some(n), _) => SparsityParams::new(rational_arg("beta", beta)?, n)
            .map_err(|e| Failure::Usage(e.to_string()))?,
        (None, None, Some(t)) if t >= 1 => lemma_sparsity_params(g.n() as u64, t as u64)
            .map_err(|e| Failure::Usage(e.to_string()))?,
        _ => {
            return Err(Failure::Usage(
                "sparse-check requires --beta and --big-n, or --t".into(),
            ))
        }
    };
    let mode = match a.mode {
        ModeArg::Exhaustive => SparsityMode::Exhaustive,
        ModeArg::Peeling => SparsityMode::Peeling,
    };
    let cert =
        check_local_sparsity(&g, &params, mode, c.exhaustive_limit).map_err(|e| match e {
            SparsityError::Oversized { .. } => Failure::Capacity(e.to_string()),
            SparsityError::InvalidParams(_) => Failure::Usage(e.to_string()),
        })?;
    let ok = cert.verdict != Verdict::Violated;
    let text = match c.format {
        Format::Text => {
            let verdict = serde_json::to_value(cert.verdict).expect("verdict serializes");
            let mut out = format!("{}\n", verdict.as_str().unwrap_or_default());
            if let Some(w) = &cert.witness {
                writeln!(out, "witness {}", join(w.iter())).expect("writing to a string");
            }
            out
        }
        Format::Json => json_report("sparse-check", a, json!({ "certificate": cert })),
    };
    Ok((text, ok))
}

fn run_audit(a: &AuditArgs) -> Outcome {
    let c = &a.common;
    let t = require_t(c, "audit")?;
    let g = load_graph(c)?;
    let mut cfg = AuditConfig::new(t);
    cfg.assume_subdivision_free = a.assume_subdivision_free;
    cfg.node_cap = c.node_cap;
    cfg.exhaustive_limit = c.exhaustive_limit;
    if let Some(limit) = c.oracle_limit {
        cfg.oracle_limit = limit;
    }
    let report = audit(&g, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = match c.format {
        Format::Text => {
            let mut out = format!(
                "n = {}, edges = {}, t = {}, cliques = {}\n",
                report.n, report.edges, t, report.clique_count
            );
            for check in &report.checks {
                out.push_str(&check_line(check));
            }
            for note in &report.notes {
                writeln!(out, "note: {note}").expect("writing to a string");
            }
            writeln!(
                out,
                "{}",
                if report.all_hold {
                    "all checks hold"
                } else {
                    "some checks FAILED"
                }
            )
            .expect("writing to a string");
            out
        }
        Format::Json => {
            let body = serde_json::to_value(&report).expect("report serializes");
            json_report("audit", a, json!({ "report": body }))
        }
    };
    Ok((text, report.all_hold))
}

fn check_line(check: &Check) -> String {
    let relation = serde_json::to_value(check.relation).expect("relation serializes");
    format!(
        "[{}] {}: {} {} {}\n",
        if check.holds { "ok" } else { "FAIL" },
        check.name,
        check.lhs,
        relation.as_str().unwrap_or_default(),
        check.rhs
    )
}

fn pair_arg(name: &str, raw: &str) -> Result<(String, String), Failure> {
    raw.split_once(',')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| {
            Failure::Usage(format!(
                "--{name} expects two comma-separated values, got `{raw}`"
            ))
        })
}

fn int_arg(name: &str, raw: &str) -> Result<u64, Failure> {
    raw.parse()
        .map_err(|_| Failure::Usage(format!("--{name}: `{raw}` is not a non-negative integer")))
}

fn run_bounds(a: &BoundsArgs) -> Outcome {
    let c = &a.common;
    let mut body = serde_json::Map::new();
    let mut checks: Vec<Check> = Vec::new();
    if c.input.is_some() || c.construct.is_some() {
        let g = load_graph(c)?;
        let d = g.degeneracy().d;
        let count = count_cliques(&g);
        let bound =
            bound_degenerate(d as u64, g.n() as u64).map_err(|e| Failure::Usage(e.to_string()))?;
        body.insert(
            "graph".into(),
            json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "degeneracy": d,
                "clique_count": count.to_string(),
                "degenerate_bound": bound.to_string(),
            }),
        );
        checks.push(Check::compare(
            "degenerate_bound",
            "a d-degenerate graph has at most 2^d (n - d + 1) cliques",
            count.into(),
            clique_census::audit::Relation::Le,
            bound.into(),
        ));
    }
    if let Some(raw) = &a.degenerate {
        let (d, n) = pair_arg("degenerate", raw)?;
        let (d, n) = (int_arg("degenerate", &d)?, int_arg("degenerate", &n)?);
        let bound = bound_degenerate(d, n).map_err(|e| Failure::Usage(e.to_string()))?;
        body.insert(
            "degenerate".into(),
            json!({ "d": d, "n": n, "bound": bound.to_string() }),
        );
    }
    if let Some(raw) = &a.binom {
        let (m, k) = pair_arg("binom", raw)?;
        let m = int_arg("binom", &m)?;
        let k = rational_arg("binom", &k)?;
        checks.push(check_binom_sum_inequality(m, &k).map_err(|e| Failure::Usage(e.to_string()))?);
    }
    if let Some(alpha) = &a.alpha {
        let t = require_t(c, "bounds --alpha")?;
        let beta = a.beta.as_deref().expect("clap enforces --beta");
        let report = refined_exponents(
            &rational_arg("alpha", alpha)?,
            &rational_arg("beta", beta)?,
            t,
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        body.insert(
            "refined".into(),
            serde_json::to_value(report).expect("report serializes"),
        );
    }
    if let Some(k) = a.parts {
        let report = lower_bound_constant(k).map_err(|e| Failure::Usage(e.to_string()))?;
        body.insert(
            "lower_bound".into(),
            serde_json::to_value(report).expect("report serializes"),
        );
    }
    if body.is_empty() && checks.is_empty() {
        return Err(Failure::Usage(
            "bounds needs a graph, --degenerate, --binom, --alpha/--beta/--t or --parts".into(),
        ));
    }
    let ok = checks.iter().all(|c| c.holds);
    let text = match c.format {
        Format::Text => {
            let mut out = String::new();
            for (key, value) in &body {
                writeln!(out, "{key}: {value}").expect("writing to a string");
            }
            for check in &checks {
                out.push_str(&check_line(check));
            }
            out
        }
        Format::Json => {
            body.insert(
                "checks".into(),
                serde_json::to_value(&checks).expect("checks serialize"),
            );
            json_report("bounds", a, Value::Object(body))
        }
    };
    Ok((text, ok))
}
