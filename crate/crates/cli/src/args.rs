use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "logsphere",
    version,
    about = "Logarithmic energies on the sphere, lattice energies and the order-n constant"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the log energy of n points and record the result.
    Minimize(MinimizeArgs),
    /// Minimize over a range of n.
    Sweep(SweepArgs),
    /// Renormalized energy of a Bravais lattice, or the exact constants.
    Lattice(LatticeArgs),
    /// Fit the order-n constant from an energies.csv table.
    Fit(FitArgs),
    /// Run the identity suites.
    Selftest(SelftestArgs),
    /// Re-run a saved run configuration (a RunConfig JSON file, or a
    /// config_<n>.json whose `run` field is used).
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Spiral,
    Random,
}

#[derive(Clone, Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub grad_tol: f64,
    #[arg(long, value_enum, default_value_t = InitArg::Spiral)]
    pub init: InitArg,
    /// Start the first restart from the points stored in a config_<n>.json.
    #[arg(long, conflicts_with = "init")]
    pub init_from: Option<PathBuf>,
    /// First trial step of the line search (default 1/n).
    #[arg(long)]
    pub step0: Option<f64>,
    /// Curvature pairs for L-BFGS directions; 0 is steepest descent.
    #[arg(long, default_value_t = 0)]
    pub lbfgs_memory: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct MinimizeArgs {
    /// Number of points.
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    /// First n.
    #[arg(long)]
    pub from: usize,
    /// Last n (inclusive).
    #[arg(long)]
    pub to: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Clone, Debug, Args)]
#[command(group(ArgGroup::new("lattice_input").required(true).multiple(false)))]
pub struct LatticeArgs {
    /// Triangular lattice of density 1.
    #[arg(long, group = "lattice_input")]
    pub triangular: bool,
    /// Square lattice of density 1.
    #[arg(long, group = "lattice_input")]
    pub square: bool,
    /// Basis vectors u = (u1, u2), v = (v1, v2).
    #[arg(long, num_args = 4, value_names = ["U1", "U2", "V1", "V2"], allow_negative_numbers = true, group = "lattice_input")]
    pub basis: Option<Vec<f64>>,
    /// Modular parameter τ = RE + i IM (IM > 0) at density 1.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, group = "lattice_input")]
    pub tau: Option<Vec<f64>>,
    /// Print the exact constants instead of a lattice table.
    #[arg(long, group = "lattice_input")]
    pub constants: bool,
    /// Density m of the last table row (default: the lattice's own density,
    /// or 1 for --triangular, --square and --tau).
    #[arg(long)]
    pub density: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Plain,
    Power,
}

#[derive(Clone, Debug, Args)]
pub struct FitArgs {
    /// Sweep table (energies.csv).
    pub csv: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Power)]
    pub model: ModelArg,
    /// Report path (default: fit_report.json next to the table).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, Args)]
pub struct ReplayArgs {
    pub config: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
