//! Configuration-driven experiments behind the `scramble` binary.

pub mod config;
pub mod experiments;
pub mod report;
pub mod svg;
pub mod table1;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::ChainError;
use crate::estimators::EstimateError;
use crate::graphs::GraphError;
use crate::oracle::OracleError;
use config::{ExperimentConfig, ExperimentKind, GraphFamily, GraphSpec};

pub use experiments::run_experiment;
pub use table1::reproduce_table1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(
        "{count} saturation time(s) censored at the horizon; increase schedule.horizon_factor so every curve crosses its threshold"
    )]
    Censored { count: usize },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Graph(_) => 2,
            CliError::Censored { .. } | CliError::Estimate(EstimateError::Censored { .. }) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Minutes on a laptop.
    Desk,
    /// Larger families and more trajectories.
    Extended,
}

#[derive(Debug, Parser)]
#[command(
    name = "scramble",
    version,
    about = "OTOC and entanglement saturation in random circuits on graphs"
)]
pub struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Profile::Desk)]
    pub profile: Profile,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate, inspect or save a graph.
    Graph(GraphArgs),
    /// OTOC saturation time for one pair (or a scaling suite config).
    Otoc(ExperimentArgs),
    /// Entanglement lower bound across a cut.
    Entbound(ExperimentArgs),
    /// Chain versus exact-circuit checks on a small graph.
    OracleVerify(ExperimentArgs),
    /// All families side by side.
    Table1,
    /// Poisson versus random-edge schedules.
    ScheduleCompare(ExperimentArgs),
    /// Run whatever experiment the config names.
    Run(ExperimentArgs),
    /// Print the default config for an experiment kind.
    DefaultConfig {
        #[arg(value_enum)]
        kind: KindArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Otoc,
    EntBound,
    OracleVerify,
    ScalingSuite,
    ScheduleCompare,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Otoc => ExperimentKind::Otoc,
            KindArg::EntBound => ExperimentKind::EntBound,
            KindArg::OracleVerify => ExperimentKind::OracleVerify,
            KindArg::ScalingSuite => ExperimentKind::ScalingSuite,
            KindArg::ScheduleCompare => ExperimentKind::ScheduleCompare,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    BinaryTree,
    ZaryTree,
    Lattice,
    Dumbbell,
    Complete,
    Star,
}

#[derive(Debug, Clone, Args)]
pub struct GraphFlags {
    #[arg(long, value_enum, conflicts_with = "graph_file")]
    pub family: Option<FamilyArg>,
    #[arg(long, requires = "family")]
    pub depth: Option<u32>,
    #[arg(long, requires = "family")]
    pub z: Option<usize>,
    /// Lattice side lengths, comma separated.
    #[arg(long, requires = "family", value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, requires = "family")]
    pub m: Option<usize>,
    #[arg(long, requires = "family")]
    pub n: Option<usize>,
    /// Edge-list file (`V` on the first line, then `u v` per edge).
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
}

impl GraphFlags {
    fn spec(&self) -> Option<GraphSpec> {
        if let Some(path) = &self.graph_file {
            return Some(GraphSpec {
                path: Some(path.to_string_lossy().into_owned()),
                ..GraphSpec::family(GraphFamily::EdgeList)
            });
        }
        let family = match self.family? {
            FamilyArg::BinaryTree => GraphFamily::BinaryTree,
            FamilyArg::ZaryTree => GraphFamily::ZaryTree,
            FamilyArg::Lattice => GraphFamily::Lattice,
            FamilyArg::Dumbbell => GraphFamily::Dumbbell,
            FamilyArg::Complete => GraphFamily::Complete,
            FamilyArg::Star => GraphFamily::Star,
        };
        Some(GraphSpec {
            family,
            depth: self.depth,
            z: self.z,
            dims: self.dims.clone(),
            m: self.m,
            n: self.n,
            path: None,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub graph: GraphFlags,
    /// Write the edge list here (relative paths resolve under `--out`).
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub graph: GraphFlags,
    #[arg(long)]
    pub num_traj: Option<u64>,
    #[arg(long)]
    pub local_dim: Option<u32>,
    /// Absolute horizon in time units.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Skip SVG output.
    #[arg(long)]
    pub no_plots: bool,
}

fn experiment_config(cli: &Cli, kinds: &[ExperimentKind], args: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let mut cfg = ExperimentConfig::default_for(kinds[0]);
            if cli.profile == Profile::Extended {
                cfg.num_traj *= 10;
            }
            cfg
        }
    };
    if !kinds.is_empty() && !kinds.contains(&cfg.kind) {
        return Err(CliError::config(
            "kind",
            format!("`{}` cannot be run by this subcommand", cfg.kind.name()),
        ));
    }
    if let Some(spec) = args.graph.spec() {
        if cfg.kind == ExperimentKind::ScalingSuite {
            return Err(CliError::config("graph", "graph flags cannot override a scaling suite"));
        }
        cfg.graph = spec;
        cfg.cut = None;
    }
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.to_string_lossy().into_owned();
    }
    if let Some(n) = args.num_traj {
        cfg.num_traj = n;
    }
    if let Some(d) = args.local_dim {
        cfg.local_dim = d;
    }
    if let Some(h) = args.horizon {
        cfg.schedule.horizon = Some(h);
        cfg.schedule.horizon_factor = None;
    }
    if args.no_plots {
        cfg.plots = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn graph_command(cli: &Cli, args: &GraphArgs) -> Result<(), CliError> {
    let spec = args
        .graph
        .spec()
        .ok_or_else(|| CliError::config("--family", "give --family (with its size flags) or --graph-file"))?;
    let g = spec.build()?;
    let (x, y) = g.farthest_pair();
    let cut = spec.default_cut(&g);
    let summary = serde_json::json!({
        "family": spec.family,
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "diameter": g.diameter(),
        "max_degree": g.max_degree(),
        "connected": g.is_connected(),
        "farthest_pair": [x, y],
        "default_cut": cut.as_ref().map(|c| serde_json::json!({
            "size_a": c.size_a(),
            "size_b": c.size_b(),
            "crossing_edges": g.cut_size(c).ok(),
        })),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    if let Some(save) = &args.save {
        let path = match &cli.out {
            Some(dir) if save.is_relative() => {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                dir.join(save)
            }
            _ => save.clone(),
        };
        std::fs::write(&path, g.to_edge_list()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    use ExperimentKind as K;
    let (kinds, args): (&[K], &ExperimentArgs) = match &cli.command {
        Command::Graph(args) => return graph_command(cli, args),
        Command::DefaultConfig { kind } => {
            print!("{}", ExperimentConfig::default_for((*kind).into()).to_toml());
            return Ok(());
        }
        Command::Table1 => {
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out/table1"));
            let report = reproduce_table1(cli.profile, cli.seed.unwrap_or(1), &out)?;
            let md = std::fs::read_to_string(out.join("table1.md")).unwrap_or_default();
            print!("{md}");
            eprintln!(
                "wrote {} in {:.1}s",
                out.join("report.json").display(),
                report.wall_clock_seconds
            );
            return Ok(());
        }
        Command::Otoc(a) => (&[K::Otoc, K::ScalingSuite], a),
        Command::Entbound(a) => (&[K::EntBound], a),
        Command::OracleVerify(a) => (&[K::OracleVerify], a),
        Command::ScheduleCompare(a) => (&[K::ScheduleCompare], a),
        Command::Run(a) => {
            if cli.config.is_none() {
                return Err(CliError::config("--config", "`run` needs a config file"));
            }
            (&[], a)
        }
    };
    let cfg = experiment_config(cli, kinds, args)?;
    let report = run_experiment(&cfg)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report.results).expect("results serialize")
    );
    eprintln!(
        "wrote {} in {:.1}s",
        PathBuf::from(&cfg.output_dir).join("report.json").display(),
        report.wall_clock_seconds
    );
    Ok(())
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: could not start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from([
            "scramble",
            "otoc",
            "--seed",
            "9",
            "--out",
            "o",
            "--family",
            "lattice",
            "--dims",
            "3,3",
            "--num-traj",
            "5",
        ])
        .unwrap();
        let Command::Otoc(args) = &cli.command else { panic!() };
        let cfg = experiment_config(&cli, &[ExperimentKind::Otoc], args).unwrap();
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.output_dir, "o");
        assert_eq!(cfg.graph.dims, Some(vec![3, 3]));
        assert_eq!(cfg.num_traj, 5);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::config("a", "b").exit_code(), 2);
        assert_eq!(CliError::Censored { count: 1 }.exit_code(), 3);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
    }
}
