//! `restoreplan` command line: each pipeline stage is a subcommand that reads
//! the previous stage's files and writes its own into the output directory.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use restoreplan_core::io::InputError;
use restoreplan_core::{NetworkError, RoutingError, ScenarioError, ScheduleError, Stage1Error};

pub use config::Config;
pub use manifest::RunManifest;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O or other failure
  2  usage error
  3  input could not be parsed or failed validation
  4  no damaged nodes (every corridor misses the feeder)
  5  stage-1 objective unbounded for the chosen c
  6  a damaged node is unreachable from every depot
  7  too many nodes for the exact router
  8  a plan or chart failed validation
  9  travel speed is not positive";

#[derive(Debug, Parser)]
#[command(name = "restoreplan", version, about = "Two-stage crew allocation and routing for storm restoration", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for every random draw (default: config `seed`, else 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory receiving artifacts and manifest.json.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest road and feeder files into network.json.
    BuildNetwork(BuildNetworkArgs),
    /// Sample failure scenarios into scenarios.json.
    GenScenarios(GenScenariosArgs),
    /// Allocate crews, then route every scenario.
    Solve(SolveArgs),
    /// Simulate routes into Gantt charts.
    Schedule(ScheduleArgs),
    /// Draw an SVG from a Gantt CSV or an allocation file.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct BuildNetworkArgs {
    /// Road nodes CSV (`node_id,lat,lon`).
    #[arg(long, requires = "road_edges", conflicts_with = "road_json")]
    pub road_nodes: Option<PathBuf>,
    /// Road edges CSV (`u,v,length_m`).
    #[arg(long)]
    pub road_edges: Option<PathBuf>,
    /// Road network JSON (`{"nodes": [...], "edges": [...]}`).
    #[arg(long, required_unless_present = "road_nodes")]
    pub road_json: Option<PathBuf>,
    /// Feeder buses CSV (`bus_id,x,y,downstream_load_kw,kind`).
    #[arg(long)]
    pub power: PathBuf,
    /// Feeder connectivity CSV (`from_bus,to_bus`).
    #[arg(long)]
    pub power_edges: Option<PathBuf>,
    /// Depot road-node ids, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub depots: Vec<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub offset_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub offset_y: Option<f64>,
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenScenariosArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Tornado tracks CSV (`ef,start_lat,start_lon,end_lat,end_lon,width_m`).
    #[arg(long)]
    pub events: PathBuf,
    /// Number of scenarios (default: config).
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub scenarios: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Route files written by `solve`.
    #[arg(long, num_args = 1.., required = true)]
    pub routes: Vec<PathBuf>,
    #[arg(long)]
    pub scenarios: PathBuf,
    /// Crew travel speed in km/h; `inf` makes travel instantaneous (default: config).
    #[arg(long)]
    pub speed: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, conflicts_with = "allocation", required_unless_present = "allocation")]
    pub gantt: Option<PathBuf>,
    #[arg(long)]
    pub allocation: Option<PathBuf>,
    /// Output name inside the output directory (default: `render_<input stem>.svg`).
    #[arg(long)]
    pub output: Option<String>,
}

/// A plan or chart that was produced but did not pass its checks.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ValidationFailed(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Input = 3,
    NoDamagedNodes = 4,
    Unbounded = 5,
    Unreachable = 6,
    TooManyNodes = 7,
    Invalid = 8,
    Speed = 9,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Maps an error to its exit class by the first recognised cause.
pub fn classify(err: &anyhow::Error) -> ExitClass {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<ScenarioError>() {
            return match e {
                ScenarioError::NoDamagedNodes => ExitClass::NoDamagedNodes,
                _ => ExitClass::Input,
            };
        }
        if let Some(e) = cause.downcast_ref::<Stage1Error>() {
            return match e {
                Stage1Error::UnboundedObjective { .. } => ExitClass::Unbounded,
                _ => ExitClass::Input,
            };
        }
        if let Some(e) = cause.downcast_ref::<RoutingError>() {
            return match e {
                RoutingError::NodeUnreachable { .. } | RoutingError::NoFeasibleRoute { .. } | RoutingError::UnreachableArc { .. } => {
                    ExitClass::Unreachable
                }
                RoutingError::TooManyNodes { .. } => ExitClass::TooManyNodes,
                _ => ExitClass::Input,
            };
        }
        if let Some(e) = cause.downcast_ref::<ScheduleError>() {
            return match e {
                ScheduleError::NonPositiveSpeed(_) => ExitClass::Speed,
                ScheduleError::InvalidPlan(_) => ExitClass::Invalid,
                _ => ExitClass::Input,
            };
        }
        if cause.is::<ValidationFailed>() {
            return ExitClass::Invalid;
        }
        if let Some(e) = cause.downcast_ref::<InputError>() {
            return match e {
                InputError::Io { .. } => ExitClass::Failure,
                _ => ExitClass::Input,
            };
        }
        if cause.is::<NetworkError>() || cause.is::<config::ConfigError>() || cause.is::<serde_json::Error>() {
            return ExitClass::Input;
        }
    }
    ExitClass::Failure
}

/// Runs one parsed invocation inside a pool of `--jobs` threads.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.global.jobs {
        anyhow::ensure!(jobs > 0, "--jobs must be at least 1");
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build()?;
    pool.install(|| commands::dispatch(&cli.global, &cli.command))
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitClass::Usage.code() } else { ExitClass::Success.code() };
        }
    };
    match run(cli) {
        Ok(()) => ExitClass::Success.code(),
        Err(err) => {
            eprintln!("error: {err:#}");
            classify(&err).code()
        }
    }
}
