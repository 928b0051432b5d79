mod algorithms;
mod experiments;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use stable_graphs::harness::{
    estimate_k_average_sensitivity, exact_k_average_sensitivity, SamplingPlan, SensitivityRecord,
    EXACT_TUPLE_CAPACITY,
};
use stable_graphs::local_oracle::{mean_query_complexity, OracleKind};
use stable_graphs::{generate, parse_edge_list, Family, Graph};

use algorithms::{members, Alg};
use experiments::Experiment;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error(transparent)]
    Library(#[from] stable_graphs::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Library(stable_graphs::Error::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "stable-graphs", version, about = "Run low-sensitivity graph algorithms and measure their stability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Run one algorithm and print its solution as JSON.
    Run(RunArgs),
    /// Measure average sensitivity and print one record.
    Sensitivity(SensitivityArgs),
    /// Per-edge mean query counts of the local matching oracle, as CSV.
    OracleStats(OracleArgs),
    /// Run a named experiment, writing CSV rows and printing a JSON summary.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct SeedArg {
    #[arg(long, env = "STABLE_GRAPHS_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Path,
    Cycle,
    Complete,
    Star,
    PrimAdversarial,
    ErdosRenyi,
    RandomRegular,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    family: FamilyName,
    /// Comma-separated `key=value` pairs: `n`, plus `p` or `d` where needed.
    #[arg(long)]
    params: String,
    #[command(flatten)]
    seed: SeedArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    alg: Alg,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SensitivityArgs {
    #[arg(long)]
    alg: Alg,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    edge_draws: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    seed: SeedArg,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report `wall_time_ms` as 0 so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleAlg {
    Greedy,
    Thresholded,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = OracleAlg::Greedy)]
    alg: OracleAlg,
    #[arg(long)]
    graph: PathBuf,
    /// Priority draws.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// Degree cap for the thresholded oracle.
    #[arg(long)]
    x: Option<f64>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    name: Experiment,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated sizes; each experiment has its own default.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_edge_list(&text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn parse_params(text: &str) -> CliResult<Vec<(String, String)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn param<T: std::str::FromStr>(params: &[(String, String)], key: &str) -> CliResult<T> {
    let raw = params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| CliError::Usage(format!("missing parameter `{key}`")))?;
    raw.parse()
        .map_err(|_| CliError::Usage(format!("cannot parse `{key}={raw}`")))
}

fn generate_cmd(args: GenerateArgs) -> CliResult<()> {
    let params = parse_params(&args.params)?;
    let n = param(&params, "n")?;
    let seed = args.seed.seed;
    let family = match args.family {
        FamilyName::Path => Family::Path(n),
        FamilyName::Cycle => Family::Cycle(n),
        FamilyName::Complete => Family::Complete(n),
        FamilyName::Star => Family::Star(n),
        FamilyName::PrimAdversarial => Family::PrimAdversarial(n),
        FamilyName::ErdosRenyi => Family::ErdosRenyi { n, p: param(&params, "p")?, seed },
        FamilyName::RandomRegular => Family::RandomRegular { n, d: param(&params, "d")?, seed },
    };
    let text = generate(&family)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .to_edge_list();
    match args.out {
        Some(path) => write_file(&path, text.as_bytes()),
        None => emit(&text),
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::File {
            path: "<stdout>".into(),
            message: e.to_string(),
        })
}

fn eps_for(alg: Alg, eps: Option<f64>) -> f64 {
    eps.unwrap_or_else(|| alg.default_eps())
}

fn run_cmd(args: RunArgs) -> CliResult<()> {
    let g = read_graph(&args.graph)?;
    let eps = eps_for(args.alg, args.eps);
    let seed = args.seed.seed;
    let solution = args.alg.handle(eps).run(&g, seed)?;
    let out = json!({
        "schema": 1,
        "algorithm": args.alg.name(),
        "parameters": if args.alg.uses_eps() { json!({ "eps": eps }) } else { json!({}) },
        "seed": seed,
        "graph": g.content_hash(),
        "n": g.n(),
        "m": g.m(),
        "kind": solution.kind(),
        "solution": members(&solution),
        "size": solution.len(),
        "checks": args.alg.checks(&g, &solution)?,
    });
    emit(&format!("{}\n", serde_json::to_string_pretty(&out).expect("json value")))
}

pub fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn sensitivity_cmd(args: SensitivityArgs) -> CliResult<()> {
    let g = read_graph(&args.graph)?;
    let alg = args.alg.handle(eps_for(args.alg, args.eps));
    let seed = args.seed.seed;
    let start = Instant::now();
    let exact = alg.is_deterministic()
        && g.m() > 0
        && (g.m() as f64).powi(args.k as i32) <= EXACT_TUPLE_CAPACITY as f64;
    let pool = pool(args.jobs)?;
    let mut record = if exact {
        let value = exact_k_average_sensitivity(&alg, &g, args.k)?;
        SensitivityRecord::exact(alg.name(), &g, args.k, value, seed, 0)
    } else {
        let plan = SamplingPlan::new(args.edge_draws, args.samples, seed).with_k(args.k);
        let est = pool.install(|| estimate_k_average_sensitivity(&alg, &g, &plan))?;
        SensitivityRecord::new(alg.name(), &g, &est, seed, 0)
    };
    if !args.no_timing {
        record.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    let text = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&record).expect("record")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(&record).expect("record");
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
    };
    emit(&text)
}

fn oracle_cmd(args: OracleArgs) -> CliResult<()> {
    let g = read_graph(&args.graph)?;
    let kind = match (args.alg, args.x) {
        (OracleAlg::Greedy, _) => OracleKind::Greedy,
        (OracleAlg::Thresholded, Some(x)) => OracleKind::Thresholded { x },
        (OracleAlg::Thresholded, None) => {
            return Err(CliError::Usage("--alg thresholded needs --x".into()))
        }
    };
    let stats = mean_query_complexity(&g, kind, args.seeds, args.seed.seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "v", "mean_queries"]).expect("header");
    for (e, mean) in &stats.per_edge_mean {
        w.write_record([e.u().to_string(), e.v().to_string(), format!("{mean}")])
            .expect("row");
    }
    let bytes = w.into_inner().expect("flush");
    eprintln!(
        "mean {:.4} (standard error {:.4}) over {} queries",
        stats.mean, stats.std_err, stats.samples
    );
    match args.out {
        Some(path) => write_file(&path, &bytes),
        None => emit(&String::from_utf8(bytes).expect("utf8")),
    }
}

fn experiment_cmd(args: ExperimentArgs) -> CliResult<()> {
    let pool = pool(args.jobs)?;
    let summary = pool.install(|| args.name.run(args.sizes.as_deref(), args.seed.seed, &args.out))?;
    emit(&format!("{}\n", serde_json::to_string_pretty(&summary).expect("summary")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Run(a) => run_cmd(a),
        Command::Sensitivity(a) => sensitivity_cmd(a),
        Command::OracleStats(a) => oracle_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
