use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use momentspace::numeric::Mode;
use momentspace::principal::Side;

#[derive(Debug, Parser)]
#[command(name = "momentspace", version, about = "Geometry and asymptotics of the power-moment space on [0,1]")]
pub struct Cli {
    /// Arithmetic: exact rationals or binary64. Defaults to exact for
    /// convert, classify, range and `rate jk`, float otherwise.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Seed for sampling and experiments.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the output here instead of stdout (a directory for `experiment`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Upper,
    Lower,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Upper => Side::Upper,
            SideArg::Lower => Side::Lower,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PointArg {
    /// Moments c_1,…,c_n, comma-separated (`1/2` or `0.5`).
    #[arg(long)]
    pub moments: Option<String>,
    /// Canonical moments p_1,…,p_n, comma-separated.
    #[arg(long)]
    pub canonical: Option<String>,
}

#[derive(Debug, Args)]
pub struct MomentsArg {
    /// Moments c_1,…,c_n, comma-separated (`1/2` or `0.5`).
    #[arg(long)]
    pub moments: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map moments to canonical moments or back.
    Convert(PointArg),
    /// Interior, boundary or outside.
    Classify(MomentsArg),
    /// Range [c⁻, c⁺] of the next moment.
    Range(MomentsArg),
    /// Principal representation attaining c⁺ or c⁻.
    Principal {
        #[command(flatten)]
        moments: MomentsArg,
        #[arg(long, value_enum, default_value = "upper")]
        side: SideArg,
    },
    /// Uniform draws from the moment space.
    Sample {
        /// Dimension of the moment space.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Length of the reported prefix; defaults to `n`.
        #[arg(long)]
        k: Option<usize>,
        /// Report canonical moments instead of moments.
        #[arg(long)]
        canonical: bool,
    },
    /// Rate functions and variational quantities.
    #[command(subcommand)]
    Rate(RateCommand),
    /// Run an experiment from a JSON config.
    Experiment {
        #[arg(long)]
        id: Option<String>,
        /// JSON config with a `schema_version` field; defaults are used when absent.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RateCommand {
    /// Large-deviation rate of the first k moments.
    Ik(PointArg),
    /// Quadratic moderate-deviation rate ½ xᵀ Σ⁻¹ x.
    Jk {
        /// Deviation vector, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Reversed Kullback information of ν/P or of g·ν.
    Kullback {
        /// Coefficients of P, lowest degree first.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "density")]
        polynomial: Option<String>,
        /// Density g with respect to the arcsine law, an expression in x.
        #[arg(long, allow_hyphen_values = true)]
        density: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Maximize the concave dual objective.
    Dual {
        #[command(flatten)]
        moments: MomentsArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Width r_{k+1} of the next-moment range.
    Range {
        #[arg(long, conflicts_with = "polynomial")]
        moments: Option<String>,
        /// Also compare with the dual prediction exp(−inf I − k ln 4).
        #[arg(long)]
        check: bool,
        /// Coefficients of P for the measure ν/P.
        #[arg(long, allow_hyphen_values = true, requires = "order")]
        polynomial: Option<String>,
        /// Number of moments of ν/P.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Weak limit of the exponentially tilted moment laws.
    Tilt {
        /// Tilt function f₀, an expression in x.
        #[arg(long, allow_hyphen_values = true)]
        f0: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}
