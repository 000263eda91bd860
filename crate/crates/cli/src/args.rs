use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "saha",
    version,
    about = "Thermodynamics and wave curves of a Saha-ionizing gas"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Named gas preset, looked up in $SAHA_PRESET_DIR before the built-ins.
    #[arg(long, global = true, default_value = "hydrogen")]
    pub gas: String,
    /// JSON file with any of `a2`, `kappa`, `Ti`; overrides the preset.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub a2: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long = "Ti", global = true)]
    pub ti: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub model: Model,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Exact,
    Htl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One equilibrium state from (p, T), (rho, T) or (alpha, T).
    #[command(allow_negative_numbers = true)]
    State(StateArgs),
    /// Zeros of the inflection function on a temperature sweep.
    #[command(allow_negative_numbers = true)]
    Inflection(InflectionArgs),
    /// Thermodynamic part of the Hugoniot locus, optionally with a shock solve.
    #[command(allow_negative_numbers = true)]
    Hugoniot(HugoniotArgs),
    /// Isentropes with the velocity along both acoustic integral curves.
    #[command(allow_negative_numbers = true)]
    Isentrope(IsentropeArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("partner").required(true).args(["p", "rho", "alpha"])))]
pub struct StateArgs {
    #[arg(long = "T")]
    pub t: f64,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct InflectionArgs {
    #[arg(long)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("anchor").required(true).args(["alpha0", "p0"])))]
pub struct HugoniotArgs {
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long = "T0")]
    pub t0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub u0: f64,
    /// Downstream velocity; adds the kinetic residual and the shock state.
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Lower end of the traced range in α (exact model).
    #[arg(long)]
    pub alpha_min: Option<f64>,
    /// Upper end of the traced range in α (exact model).
    #[arg(long)]
    pub alpha_max: Option<f64>,
    /// Temperature range of the trace (HTL model).
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("level").required(true).args(["eta0", "alpha0"])))]
pub struct IsentropeArgs {
    /// Entropy level; repeat for several curves.
    #[arg(long)]
    pub eta0: Vec<f64>,
    #[arg(long, requires = "t0")]
    pub alpha0: Option<f64>,
    #[arg(long = "T0")]
    pub t0: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}
