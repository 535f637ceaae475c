use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::defaults;

#[derive(Debug, Parser)]
#[command(name = "symrig", version, about = "Markov partitions, conjugacies and regularity moduli of circle endomorphisms")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Write the report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Emit a single JSON document instead of CSV
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on word length, also used as the conjugacy refinement cap
    #[arg(long, global = true, value_name = "N")]
    pub depth_cap: Option<usize>,
    /// Cap on the number of cylinders of a full-level enumeration
    #[arg(long, global = true, value_name = "N")]
    pub cell_cap: Option<usize>,
    /// Cap on tail-sum interval evaluations (overrides SYMRIG_WORK_CAP)
    #[arg(long, global = true, value_name = "N")]
    pub work_cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a map spec and list every violated condition
    Validate {
        #[arg(long)]
        map: PathBuf,
    },
    /// Cylinders of one level of the Markov partition
    Partition {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        level: usize,
        /// Also check tiling, boundary sharing and the Markov property
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = defaults::MARKOV_TOL)]
        tol: f64,
    },
    /// Evaluate the conjugacy between two maps on a grid, or tabulate it on
    /// partition endpoints
    Conjugacy {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = defaults::GRID)]
        grid: usize,
        #[arg(long, default_value_t = defaults::CONJUGACY_TOL)]
        tol: f64,
        /// Emit the endpoint table of this level instead of grid enclosures
        #[arg(long)]
        level: Option<usize>,
    },
    #[command(subcommand)]
    Analyze(Analyze),
    #[command(subcommand)]
    Repro(Repro),
}

/// A homeomorphism given by a spec file or as the conjugacy between two maps.
#[derive(Debug, Clone, Args)]
pub struct HomeoSource {
    /// Homeomorphism spec file
    #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present = "from")]
    pub homeo: Option<PathBuf>,
    #[arg(long, requires = "to")]
    pub from: Option<PathBuf>,
    #[arg(long, requires = "from")]
    pub to: Option<PathBuf>,
    /// Enclosure width for conjugacy evaluations
    #[arg(long, default_value_t = defaults::CONJUGACY_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Quasisymmetry ratios (H(x+t)-H(x))/(H(x)-H(x-t))
    Qs {
        #[command(flatten)]
        source: HomeoSource,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Scales, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Sampled symmetry modulus over a ladder of scales
    Symmetry {
        #[command(flatten)]
        source: HomeoSource,
        #[arg(long, default_value_t = defaults::GRID)]
        grid: usize,
        /// Strictly decreasing scales, comma separated; default 2^-j, j=1..20
        #[arg(long, value_delimiter = ',')]
        scales: Vec<f64>,
    },
    /// Inverse-iterate ratios of a map for n = 1..N
    Uqs {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: usize,
    },
    /// Lebesgue-measure deviation on dyadic intervals
    Measure {
        #[arg(long)]
        map: PathBuf,
        /// Intervals [j/2^L, (j+1)/2^L]
        #[arg(long, default_value_t = defaults::MEASURE_LEVEL)]
        level: u32,
    },
    /// Dilatation extremes of the conjugacy on cylinders, levels 1..=N
    Phi {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = defaults::PHI_LEVEL)]
        level: usize,
        /// Emit per-cell maxima at this coarse level instead of the level sweep
        #[arg(long)]
        cells: Option<usize>,
    },
    /// Tail sums over block itineraries avoiding a word
    Tailsum {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = defaults::TAIL_K_MAX)]
        k_max: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Repro {
    /// Inverse-iterate ratios of the one-cut piecewise-linear map
    FalphaUqs {
        #[arg(long, default_value_t = defaults::FALPHA_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = defaults::FALPHA_T)]
        t: f64,
        #[arg(long, default_value_t = defaults::FALPHA_N)]
        n: usize,
    },
    /// Dilatation growth and asymmetry of the conjugacy from the one-cut map
    /// to the doubling map
    RigidityDemo {
        #[arg(long, default_value_t = defaults::FALPHA_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = defaults::RIGIDITY_N)]
        n: usize,
    },
    /// Every acceptance criterion, one row each
    All {
        #[arg(long, default_value_t = defaults::PROPERTY_SEED)]
        seed: u64,
    },
}
