//! Command-line front end: generate curves and pairs, run verifications,
//! and emit CSV/JSON reports and plot-ready projected data.
//!
//! Exit codes: 0 success, 1 I/O or malformed input file, 2 geometry or
//! precondition violation, 3 verification failed (residuals above
//! tolerance; not a program error).

// negated comparisons like !(b > a) double as NaN-rejecting guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod inputs;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mannheim",
    about = "Frenet data, Mannheim pairs and generalized-Mannheim pipelines for curves in the 3-sphere",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frenet frames and curvatures of a curve (zoo spec, profile
    /// expressions or sampled CSV)
    Frenet(FrenetArgs),
    /// Integrate a curve from prescribed curvature/torsion expressions
    Synthesize(SynthesizeArgs),
    /// Construct or verify Mannheim pairs
    Pair {
        #[command(subcommand)]
        action: PairCmd,
    },
    /// Binormal-integral pipeline to an E4 curve with curvature checks
    Gm4(Gm4Args),
    /// Example curve families
    Zoo {
        #[command(subcommand)]
        action: ZooCmd,
    },
    /// Stereographic projection to R3 for plotting
    Project(ProjectArgs),
}

#[derive(Args)]
struct CurveSource {
    /// Input file: zoo spec (.json) or sampled curve CSV with header
    /// t,x1,x2,x3,x4 (.csv)
    input: Option<PathBuf>,
    /// Zoo family by name (see `zoo list`)
    #[arg(long)]
    zoo: Option<String>,
    /// Zoo family parameter override, repeatable: --param c=2.0
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Evaluation domain S0:S1 (defaults: file spec's domain, 0:1, or one
    /// period for example34)
    #[arg(long, value_name = "S0:S1", allow_hyphen_values = true)]
    domain: Option<String>,
}

#[derive(Args)]
struct FrenetArgs {
    #[command(flatten)]
    source: CurveSource,
    /// Samples per unit arc length
    #[arg(long, default_value_t = 512.0)]
    grid: f64,
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Curvature profile expression in s, e.g. "1.0 + 0.3*sin(2*s)"
    #[arg(long, allow_hyphen_values = true)]
    kappa: String,
    /// Torsion profile expression in s
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// Arc-length domain S0:S1
    #[arg(long, value_name = "S0:S1", default_value = "0:1", allow_hyphen_values = true)]
    domain: String,
    #[arg(long, default_value_t = 512.0)]
    grid: f64,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PairCmd {
    /// Generate a verified pair from a torsion profile and angle
    Generate(PairGenerateArgs),
    /// Verify two frame-field files as a candidate pair
    Verify(PairVerifyArgs),
}

#[derive(Args)]
struct PairGenerateArgs {
    /// Angle between corresponding position vectors, radians
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Torsion profile of the partner curve, expression in sigma (or s)
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    #[arg(long, value_name = "S0:S1", default_value = "0:1", allow_hyphen_values = true)]
    domain: String,
    /// Verification samples per unit arc length
    #[arg(long, default_value_t = 512.0)]
    grid: f64,
    /// Residual tolerance deciding the exit code
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the constructed curve's frames here
    #[arg(long)]
    out_alpha: Option<PathBuf>,
    /// Also write the partner curve's frames here
    #[arg(long)]
    out_beta: Option<PathBuf>,
    /// Format of the frame files
    #[arg(long, default_value = "json", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Args)]
struct PairVerifyArgs {
    /// Frame field of the Mannheim curve (csv or json)
    #[arg(long)]
    alpha: PathBuf,
    /// Frame field of the partner curve (csv or json)
    #[arg(long)]
    beta: PathBuf,
    /// Angle between corresponding position vectors, radians
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Report JSON path (stdout summary either way)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Gm4Args {
    /// Curvature profile of the source curve, expression in s
    #[arg(long, allow_hyphen_values = true)]
    kappa: String,
    /// Torsion profile of the source curve, expression in s
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// Integral scaling constant (nonzero; sign must match tau)
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, value_name = "S0:S1", default_value = "0:1", allow_hyphen_values = true)]
    domain: String,
    #[arg(long, default_value_t = 512.0)]
    grid: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Report JSON path; a CSV of (t, s, gamma, k1, k2, k3) is written next
    /// to it with the extension swapped to .csv
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ZooCmd {
    /// List the available families and their parameters
    List,
}

#[derive(Args)]
struct ProjectArgs {
    #[command(flatten)]
    source: CurveSource,
    /// Projection pole on S3 (X,Y,Z,W)
    #[arg(long, value_name = "X,Y,Z,W", default_value = "0,0,0,1", allow_hyphen_values = true)]
    pole: String,
    /// Sample points per unit arc length (endpoints included)
    #[arg(long, default_value_t = 512.0)]
    grid: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI failure classes, mapped onto the exit-code contract.
pub enum CliError {
    /// unreadable/unwritable files or malformed input files
    Io(String),
    /// geometry or precondition violations
    Geometry(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Geometry(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Geometry(m) => m,
        }
    }
}

impl From<mannheim_s3::GeomError> for CliError {
    fn from(e: mannheim_s3::GeomError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Command outcome: success or verification failure (exit 3).
pub enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Frenet(args) => commands::cmd_frenet(args),
        Cmd::Synthesize(args) => commands::cmd_synthesize(args),
        Cmd::Pair { action } => match action {
            PairCmd::Generate(args) => commands::cmd_pair_generate(args),
            PairCmd::Verify(args) => commands::cmd_pair_verify(args),
        },
        Cmd::Gm4(args) => commands::cmd_gm4(args),
        Cmd::Zoo { action } => match action {
            ZooCmd::List => commands::cmd_zoo_list(),
        },
        Cmd::Project(args) => commands::cmd_project(args),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("mannheim: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
