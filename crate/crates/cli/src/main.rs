//! `emission`: survival-probability experiments for a two-level atom coupled
//! to finitely many field modes.
//!
//! Exit codes: 0 ok, 2 usage error, 3 construction error, 4 verification failure.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "emission",
    version,
    about = "Spontaneous emission into finitely many modes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Atom coupled to a single mode.
    TwoLevel(TwoLevelArgs),
    /// Atom coupled to N modes with identical energy and coupling.
    IdenticalModes(IdenticalModesArgs),
    /// Build a star model realizing a spectral profile.
    Inverse(InverseArgs),
    /// Flat-profile survival traces for several M.
    Figure1(Figure1Args),
}

/// Sampling and output flags shared by the time-series subcommands.
#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// End of the time window, in display units.
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write an SVG chart of the trace and its closed form.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Display time per unit of dimensionless time.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

#[derive(Debug, Args)]
pub struct TwoLevelArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0: f64,
    /// Mode energy; defaults to resonance with the atom.
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Phase of the coupling, in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_phase: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct IdenticalModesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_phase: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// SpectralProfile JSON file, or `-` for stdin.
    #[arg(long, conflicts_with_all = ["flat", "seed"])]
    pub profile: Option<PathBuf>,
    /// Use the flat profile with equal weights.
    #[arg(long, requires = "m", conflicts_with = "seed")]
    pub flat: bool,
    /// Half width M; the spectrum has 2M+1 levels.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0: f64,
    /// Seed for a random symmetric profile (with --m).
    #[arg(long, requires = "m")]
    pub seed: Option<u64>,
    /// Round-trip tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// StarModel JSON output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Round-trip report JSON; stderr when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also write the profile that was inverted.
    #[arg(long)]
    pub profile_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Comma-separated half widths M.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,20")]
    pub m_list: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0: f64,
    /// Number of revival periods per trace.
    #[arg(long, default_value_t = 2.0)]
    pub periods: f64,
    /// End of every trace in display units; overrides --periods.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 20001)]
    pub samples: usize,
    /// Level defining "measurably non-zero" survival.
    #[arg(long, default_value_t = emission_core::analysis::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::TwoLevel(a) => commands::two_level(&a),
        Command::IdenticalModes(a) => commands::identical_modes(&a),
        Command::Inverse(a) => commands::inverse(&a),
        Command::Figure1(a) => commands::figure1(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("emission: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
