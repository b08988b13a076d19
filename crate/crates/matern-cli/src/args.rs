//! Command-line grammar. Frequencies are in radians per time unit throughout.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "matern", version, about = "Simulate, estimate and fit Matérn processes")]
pub struct Cli {
    /// Worker threads for per-id parallelism (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw realizations and write them as id,t,re,im CSV.
    Simulate(SimulateArgs),
    /// Spectral estimates of every series in a CSV file.
    Spectrum(SpectrumArgs),
    /// Whittle or de-biased Whittle fits per series.
    Fit(FitArgs),
    /// Dispersion curve and diffusivity of a trajectory ensemble.
    Dispersion(DispersionArgs),
    /// Covariance error of the fast generator against the exact model.
    Audit(AuditArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Matern,
    /// Oscillatory Matérn (nonzero --omega).
    Omp,
    Fbm,
    Whitenoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    Cholesky,
    Fast,
}

/// `auto` or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OversampleArg {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for OversampleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Self::Fixed(k)),
            _ => Err(format!("expected 'auto' or an integer >= 1, got '{s}'")),
        }
    }
}

impl std::fmt::Display for OversampleArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Fixed(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Matern)]
    pub model: ModelKind,
    /// Standard deviation of the stationary process.
    #[arg(long, conflicts_with = "amplitude")]
    pub sigma: Option<f64>,
    /// Spectral amplitude A.
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Damping rate, per time unit.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Oscillation frequency, rad per time unit.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Defaults to fast for stationary models and Cholesky for fbm.
    #[arg(long, value_enum)]
    pub method: Option<SimMethod>,
    /// Green's function mass allowed beyond the fast-method cutoff.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value = "auto")]
    pub oversample: OversampleArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Retry a numerically indefinite Cholesky factorization with diagonal jitter.
    #[arg(long)]
    pub jitter: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaperKind {
    None,
    Slepian,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = TaperKind::Slepian)]
    pub taper: TaperKind,
    /// Time-bandwidth product of the Slepian tapers.
    #[arg(long, default_value_t = 10.0)]
    pub nw: f64,
    #[arg(long, default_value_t = 1)]
    pub ntapers: usize,
    /// Adaptive multitaper weights.
    #[arg(long)]
    pub adaptive: bool,
    /// Average the estimates across ids.
    #[arg(long)]
    pub average: bool,
    /// Subtract each series' mean first.
    #[arg(long)]
    pub demean: bool,
    /// Model for a theory column, e.g. "sigma=1,alpha=1.5,lambda=0.1,omega=0".
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitMethodArg {
    Whittle,
    Debiased,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FitMethodArg::Debiased)]
    pub method: FitMethodArg,
    /// Taper for the estimate; de-biased fits default to a Slepian taper.
    #[arg(long, value_enum)]
    pub taper: Option<TaperKind>,
    #[arg(long, default_value_t = 4.0)]
    pub nw: f64,
    /// Fit only |ω| up to this frequency, rad per time unit.
    #[arg(long)]
    pub max_freq: Option<f64>,
    #[arg(long)]
    pub include_zero: bool,
    /// Also fit the oscillation frequency.
    #[arg(long)]
    pub fit_spin: bool,
    /// Starting grid points per shape parameter.
    #[arg(long, default_value_t = 3)]
    pub seed_grid: usize,
    #[arg(long)]
    pub no_demean: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Velocity,
    Position,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SeriesKind::Velocity)]
    pub kind: SeriesKind,
    /// Samples between reported points.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Regression window "t0,t1" for the diffusivity.
    #[arg(long)]
    pub window: Option<String>,
    /// Periodic domain width "wx" or "wx,wy" for unwrapping positions.
    #[arg(long)]
    pub domain_width: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value = "auto")]
    pub oversample: OversampleArg,
    /// Largest acceptable relative error.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    /// Also write the report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
