//! Command-line front end: `gen-net`, `run`, `sweep` and `stats`.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on invalid input.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use self::config::{ExperimentConfig, ScalarKind};
use self::output::{manifest_path, write_atomic, write_grid_csv, write_trajectory_csv, RunSummary, SweepManifest};
use crate::error::Error;
use crate::netgen::{compute_stats, generate, load_edgelist, save_edgelist, Graph};
use crate::scalar::Scalar;
use crate::sim::run_from;
use crate::sweep::run_sweep;
use crate::Exact;

pub const OUTPUT_DIR_ENV: &str = "SFCOOP_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "sfcoop", version, about = "Prisoner's Dilemma with external investment on scale-free networks")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV, default_value = ".")]
    pub output_dir: PathBuf,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a network, write its edge list and print its statistics.
    GenNet(GenNetArgs),
    /// Simulate one realisation and write its trajectory and summary.
    Run(RunArgs),
    /// Run a (theta × threshold) grid and write one CSV row per cell.
    Sweep(SweepArgs),
    /// Print statistics of an edge-list file.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
pub struct GenNetArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge-list destination [default: <output-dir>/<model>-n<n>-seed<seed>.edges].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub settings: ExperimentConfig,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: ExperimentConfig,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Re-run the configuration recorded in a sweep manifest.
    #[arg(long, conflicts_with = "config")]
    pub manifest: Option<PathBuf>,
    /// Grid CSV destination [default: <output-dir>/sweep-<mechanism>.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub settings: ExperimentConfig,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Io(_)) { 1 } else { 2 };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 1, message: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn io_context(path: &Path) -> impl FnOnce(Error) -> CliError + '_ {
    move |e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    }
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{rendered}") } else { write!(stderr, "{rendered}") };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::GenNet(args) => cmd_gen_net(cli, args, stdout, stderr),
        Command::Run(args) => {
            let cfg = merged(&args.config, &args.settings)?;
            match cfg.scalar_kind() {
                ScalarKind::F64 => cmd_run::<f64>(cli, &cfg, stdout, stderr),
                ScalarKind::F32 => cmd_run::<f32>(cli, &cfg, stdout, stderr),
                ScalarKind::Exact => cmd_run::<Exact>(cli, &cfg, stdout, stderr),
            }
        }
        Command::Sweep(args) => {
            let base = match &args.manifest {
                Some(path) => {
                    let text =
                        fs::read_to_string(path).map_err(|e| CliError::from(Error::Io(e))).map_err(|mut e| {
                            e.message = format!("{}: {}", path.display(), e.message);
                            e
                        })?;
                    let manifest: SweepManifest = serde_json::from_str(&text)
                        .map_err(|e| CliError { code: 2, message: format!("{}: {e}", path.display()) })?;
                    manifest.config
                }
                None => merged(&args.config, &ExperimentConfig::default())?,
            };
            let cfg = args.settings.clone().over(base);
            match cfg.scalar_kind() {
                ScalarKind::F64 => cmd_sweep::<f64>(cli, args, &cfg, stdout, stderr),
                ScalarKind::F32 => cmd_sweep::<f32>(cli, args, &cfg, stdout, stderr),
                ScalarKind::Exact => cmd_sweep::<Exact>(cli, args, &cfg, stdout, stderr),
            }
        }
        Command::Stats(args) => {
            let g = load_edgelist(&args.graph).map_err(io_context(&args.graph))?;
            print_json(stdout, &compute_stats(&g))
        }
    }
}

fn merged(config: &Option<PathBuf>, flags: &ExperimentConfig) -> CliResult<ExperimentConfig> {
    let base = match config {
        Some(path) => ExperimentConfig::load(path).map_err(io_context(path))?,
        None => ExperimentConfig::default(),
    };
    Ok(flags.clone().over(base))
}

fn print_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).expect("serialisable");
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn ensure_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError { code: 1, message: format!("{}: {e}", dir.display()) })
}

fn cmd_gen_net(cli: &Cli, args: &GenNetArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let cfg = merged(&args.config, &args.settings)?;
    let params = cfg.gen_params()?;
    let g = generate(&params)?;
    let path = match &args.out {
        Some(p) => p.clone(),
        None => {
            ensure_dir(&cli.output_dir)?;
            cli.output_dir.join(format!("{}-n{}-seed{}.edges", params.model.name(), params.n, params.seed))
        }
    };
    save_edgelist(&g, &path).map_err(io_context(&path))?;
    if cli.verbose {
        writeln!(stderr, "wrote {} ({} nodes, {} edges)", path.display(), g.node_count(), g.edge_count())?;
    }
    #[derive(serde::Serialize)]
    struct Report<'a> {
        edge_list: &'a Path,
        params: &'a crate::GenParams,
        stats: crate::GraphStats,
    }
    print_json(stdout, &Report { edge_list: &path, params: &params, stats: compute_stats(&g) })
}

fn run_graph(cfg: &ExperimentConfig) -> CliResult<Graph> {
    match &cfg.graph_file {
        Some(path) => Ok(load_edgelist(path).map_err(io_context(path))?),
        None => Ok(generate(&cfg.gen_params()?)?),
    }
}

fn cmd_run<S: Scalar>(cli: &Cli, cfg: &ExperimentConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let sim = cfg.sim_config::<S>()?;
    let g = run_graph(cfg)?;
    let initial = cfg.initial_state(g.node_count(), sim.strategy_seed)?;
    let result = run_from(&g, &sim, initial)?;

    ensure_dir(&cli.output_dir)?;
    let mut trajectory = Vec::new();
    write_trajectory_csv(&result, sim.mechanism.theta, &mut trajectory)?;
    let summary = RunSummary::new(&result, g.node_count(), sim.tail_window);
    let traj_path = cli.output_dir.join("trajectory.csv");
    let summary_path = cli.output_dir.join("summary.json");
    write_atomic(&traj_path, &trajectory).map_err(io_context(&traj_path))?;
    let mut json = serde_json::to_vec_pretty(&summary).expect("serialisable");
    json.push(b'\n');
    write_atomic(&summary_path, &json).map_err(io_context(&summary_path))?;
    if cli.verbose {
        writeln!(stderr, "wrote {} and {}", traj_path.display(), summary_path.display())?;
    }
    print_json(stdout, &summary)
}

fn cmd_sweep<S: Scalar>(
    cli: &Cli,
    args: &SweepArgs,
    cfg: &ExperimentConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult {
    if cfg.graph_file.is_some() {
        return Err(CliError { code: 2, message: "sweeps generate their own networks; remove `graph_file`".into() });
    }
    let spec = cfg.sweep_spec::<S>()?;
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError { code: 2, message: "--workers must be at least 1".into() });
    }
    let out = match &args.out {
        Some(p) => p.clone(),
        None => {
            ensure_dir(&cli.output_dir)?;
            cli.output_dir.join(format!("sweep-{}.csv", spec.mechanism.name()))
        }
    };
    if cli.verbose {
        writeln!(
            stderr,
            "sweeping {} cells × {} runs on {workers} worker(s)",
            spec.cells().len(),
            spec.samples_per_cell()
        )?;
    }

    let started = Instant::now();
    let grid = run_sweep(&spec, Some(workers))?;
    let wall_time_seconds = started.elapsed().as_secs_f64();

    let mut csv = Vec::new();
    write_grid_csv(&grid, &mut csv)?;
    write_atomic(&out, &csv).map_err(io_context(&out))?;

    let manifest = SweepManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        csv: out.clone(),
        config: cfg.clone(),
        master_seed: spec.master_seed,
        seed_rule: "graph g: derive(master, GRAPH_STREAM, g); realisation (g, r): \
                    derive(derive(master, STRATEGY_STREAM, g), STRATEGY_STREAM, r); \
                    derive = SplitMix64 chain, streams = ChaCha8"
            .into(),
        graph_seeds: (0..spec.graph_count).map(|g| spec.graph_params(g).seed).collect(),
        cells: grid.cells.len(),
        samples_per_cell: spec.samples_per_cell(),
        workers,
        wall_time_seconds,
    };
    let manifest_file = manifest_path(&out);
    let mut json = serde_json::to_vec_pretty(&manifest).expect("serialisable");
    json.push(b'\n');
    write_atomic(&manifest_file, &json).map_err(io_context(&manifest_file))?;
    if cli.verbose {
        writeln!(stderr, "wrote {} and {} in {wall_time_seconds:.1}s", out.display(), manifest_file.display())?;
    }
    print_json(stdout, &manifest)
}
