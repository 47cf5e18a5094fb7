use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use qukernel::cartan::LieType;
use qukernel::genuine::TableLabels;
use qukernel::suites::{parse_suites, run, OracleMode, Report, RunConfig, Suite, DEFAULT_SAMPLES, DEFAULT_SEED};

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "qukernel", version, about = "Verify quasi-Frobenius-Lusztig kernels and their building blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites for one Cartan type and grid order.
    Verify(VerifyArgs),
    /// Decide genuineness through one-dimensional modules.
    Genuine(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Cartan type: A, B, C, D, E, F or G.
    #[arg(long = "type")]
    lie_type: Option<String>,
    /// Rank.
    #[arg(long)]
    m: Option<usize>,
    /// Grid order n (q is a primitive n²-th root of unity).
    #[arg(long)]
    n: Option<u64>,
    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Samples used wherever a grid is too large to enumerate.
    #[arg(long)]
    samples: Option<usize>,
    /// How B and C tables meet Cartan data: bourbaki or swap-bc.
    #[arg(long)]
    table_labels: Option<String>,
    /// Report path; defaults to $QUKERNEL_REPORT_DIR/<case>.json, else stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write zero runtimes so equal configurations give identical reports.
    #[arg(long)]
    stable: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated suites: half, majid, double, presentation, cohomology, genuine, all.
    #[arg(long)]
    suite: Option<String>,
    /// closed-form-only or cross-check.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "type")]
    lie_type: Option<String>,
    m: Option<usize>,
    n: Option<u64>,
    suite: Option<String>,
    oracle: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
    table_labels: Option<String>,
    output: Option<PathBuf>,
}

struct Plan {
    cfg: RunConfig,
    output: Option<PathBuf>,
    stable: bool,
}

fn usage(msg: impl std::fmt::Display) -> String {
    format!("usage error: {msg}")
}

fn build_plan(common: &CommonArgs, suite: Option<String>, oracle: Option<String>, genuine_only: bool) -> Result<Plan, String> {
    let file: FileConfig = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let lie_type: LieType = common
        .lie_type
        .clone()
        .or(file.lie_type)
        .ok_or_else(|| usage("--type is required"))?
        .parse()
        .map_err(usage)?;
    let m = common.m.or(file.m).ok_or_else(|| usage("--m is required"))?;
    let n = common.n.or(file.n).ok_or_else(|| usage("--n is required"))?;
    let suites = if genuine_only {
        vec![Suite::Genuine]
    } else {
        parse_suites(&suite.or(file.suite).unwrap_or_else(|| "all".into())).map_err(usage)?
    };
    let oracle: OracleMode = oracle.or(file.oracle).unwrap_or_else(|| "cross-check".into()).parse().map_err(usage)?;
    let table_labels = match common.table_labels.clone().or(file.table_labels).as_deref() {
        None | Some("bourbaki") => TableLabels::Bourbaki,
        Some("swap-bc") => TableLabels::SwapBC,
        Some(other) => return Err(usage(format!("unknown table labels {other:?}"))),
    };
    let mut cfg = RunConfig::new(lie_type, m, n, suites);
    cfg.oracle = oracle;
    cfg.samples = common.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    cfg.seed = common.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    cfg.table_labels = table_labels;
    Ok(Plan { cfg, output: common.output.clone().or(file.output), stable: common.stable })
}

fn report_path(plan: &Plan) -> Option<PathBuf> {
    if let Some(p) = &plan.output {
        return Some(p.clone());
    }
    let dir = std::env::var_os("QUKERNEL_REPORT_DIR")?;
    let c = &plan.cfg;
    let suites: Vec<&str> = c.suites.iter().map(|s| s.name()).collect();
    let name = format!("{}{}-n{}-{}.json", c.lie_type, c.m, c.n, suites.join("+"));
    Some(Path::new(&dir).join(name))
}

fn summarize(report: &Report) {
    for r in &report.results {
        eprintln!("{:<13} {}", format!("{:?}", r.status).to_lowercase(), r.id);
    }
}

fn execute(plan: Plan) -> ExitCode {
    if let Err(e) = plan.cfg.validate() {
        eprintln!("refused: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let mut report = match run(&plan.cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("refused: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if plan.stable {
        report = report.without_timings();
    }
    let json = report.to_json();
    match report_path(&plan) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(parent) {
                    eprintln!("cannot create {}: {e}", parent.display());
                    return ExitCode::from(1);
                }
            }
            if let Err(e) = std::fs::write(&path, json + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            summarize(&report);
            eprintln!("report written to {}", path.display());
        }
        None => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let plan = match cli.command {
        Command::Verify(a) => build_plan(&a.common, a.suite, a.oracle, false),
        Command::Genuine(a) => build_plan(&a, None, None, true),
    };
    match plan {
        Ok(p) => execute(p),
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
