//! The command-line surface: scenario validation, run orchestration,
//! metric recomputation, multi-seed sweeps and distance-series export.
//! Exit codes: 0 success, 1 usage or parse error, 2 runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::clustering::ClusterMode;
use crate::metrics::{self, compute_metrics};
use crate::scenario::Scenario;
use crate::sim::Simulation;
use crate::sweep;
use crate::time::{SimDuration, SimTime};
use crate::NodeId;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "manet-sim",
    about = "Deterministic simulator for on-demand routing in clustered mobile ad-hoc networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a scenario and emit trace, metrics and plot data.
    Run(RunArgs),
    /// Parse and validate a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Recompute metrics from an existing trace file.
    Metrics {
        /// Trace file produced by `run --out-trace`.
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out_metrics: Option<PathBuf>,
        /// Emit structured JSON instead of the key=value block.
        #[arg(long)]
        json: bool,
    },
    /// Run one scenario under several seeds and aggregate the results.
    Sweep(SweepArgs),
    /// Export node distances to a reference node as plot data.
    Distances {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        ref_node: u16,
        /// Sampling step in seconds.
        #[arg(long, default_value_t = 1.0)]
        sample_dt: f64,
        #[arg(long)]
        out_distances: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Stop the run at this time instead of the scenario's sim_end.
    #[arg(long)]
    until: Option<f64>,
    /// Override the scenario's cluster mode (off|overlay|forwarding).
    #[arg(long)]
    cluster_mode: Option<ClusterMode>,
    #[arg(long)]
    out_trace: Option<PathBuf>,
    /// Metrics destination; stdout when omitted.
    #[arg(long)]
    out_metrics: Option<PathBuf>,
    #[arg(long)]
    out_distances: Option<PathBuf>,
    /// Reference node for --out-distances; defaults to the scenario's
    /// distance sampling reference.
    #[arg(long)]
    ref_node: Option<u16>,
    /// Sampling step in seconds for --out-distances.
    #[arg(long, default_value_t = 1.0)]
    sample_dt: f64,
    /// Emit metrics as structured JSON instead of the key=value block.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Comma-separated seeds; `a..b` spans inclusive ranges (e.g. 1..10,42).
    #[arg(long)]
    seeds: String,
    #[arg(long)]
    until: Option<f64>,
    #[arg(long)]
    cluster_mode: Option<ClusterMode>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    Scenario::load(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_output(p, contents),
        None => {
            print!("{contents}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

/// Parses `1,5,7..9` into `[1, 5, 7, 8, 9]`.
fn parse_seed_list(text: &str) -> Result<Vec<u64>, String> {
    let mut seeds = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range `{part}`"))?;
            let b: u64 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range `{part}`"))?;
            if a > b {
                return Err(format!("empty seed range `{part}`"));
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(part.parse().map_err(|_| format!("bad seed `{part}`"))?);
        }
    }
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(seeds)
}

fn apply_overrides(
    scenario: &mut Scenario,
    seed: Option<u64>,
    until: Option<f64>,
    cluster_mode: Option<ClusterMode>,
) -> Result<(), CliError> {
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if let Some(until) = until {
        if !(until > 0.0 && until.is_finite()) {
            return Err(CliError::Usage("--until must be a positive time".into()));
        }
        scenario.sim_end = SimTime::from_secs_f64(until);
    }
    if let Some(mode) = cluster_mode {
        scenario.cluster_mode = mode;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            println!(
                "ok: scenario `{}` with {} nodes, {} flows, sim_end {}",
                s.name,
                s.nodes.len(),
                s.flows.len(),
                s.sim_end
            );
            Ok(())
        }
        Command::Run(args) => run_command(args),
        Command::Metrics {
            trace,
            out_metrics,
            json,
        } => {
            let text = std::fs::read_to_string(&trace)
                .map_err(|e| CliError::Usage(format!("{}: {e}", trace.display())))?;
            let report = metrics::compute_metrics_from_text(&text)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let rendered = if json {
                report.to_json()
            } else {
                report.to_text()
            };
            emit(out_metrics.as_ref(), &rendered)
        }
        Command::Sweep(args) => {
            let mut scenario = load_scenario(&args.scenario)?;
            apply_overrides(&mut scenario, None, args.until, args.cluster_mode)?;
            let seeds = parse_seed_list(&args.seeds).map_err(CliError::Usage)?;
            let report =
                sweep::sweep(&scenario, &seeds).map_err(|e| CliError::Runtime(e.to_string()))?;
            let rendered = if args.json {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                report.to_text()
            };
            emit(args.out.as_ref(), &rendered)
        }
        Command::Distances {
            scenario,
            ref_node,
            sample_dt,
            out_distances,
        } => {
            let s = load_scenario(&scenario)?;
            if !(sample_dt > 0.0 && sample_dt.is_finite()) {
                return Err(CliError::Usage("--sample-dt must be positive".into()));
            }
            let series = metrics::distance_series(
                &s,
                NodeId(ref_node),
                SimDuration::from_secs_f64(sample_dt),
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            emit(
                out_distances.as_ref(),
                &metrics::distance_series_csv(&series),
            )
        }
    }
}

fn run_command(args: RunArgs) -> Result<(), CliError> {
    let mut scenario = load_scenario(&args.scenario)?;
    apply_overrides(&mut scenario, args.seed, args.until, args.cluster_mode)?;
    let mut sim = Simulation::new(&scenario).map_err(|e| CliError::Usage(e.to_string()))?;
    sim.run_to_end();

    if let Some(path) = &args.out_trace {
        write_output(path, &sim.trace().to_text())?;
    }
    if let Some(path) = &args.out_distances {
        let reference = args
            .ref_node
            .map(NodeId)
            .or(scenario.distances.map(|d| d.ref_node))
            .ok_or_else(|| {
                CliError::Usage("--out-distances needs --ref-node (scenario has none)".into())
            })?;
        if !(args.sample_dt > 0.0 && args.sample_dt.is_finite()) {
            return Err(CliError::Usage("--sample-dt must be positive".into()));
        }
        let series = metrics::distance_series(
            &scenario,
            reference,
            SimDuration::from_secs_f64(args.sample_dt),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        write_output(path, &metrics::distance_series_csv(&series))?;
    }

    let report = compute_metrics(sim.trace().records());
    let rendered = if args.json {
        report.to_json()
    } else {
        report.to_text()
    };
    emit(args.out_metrics.as_ref(), &rendered)
}
