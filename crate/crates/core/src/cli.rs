//! The `spinframe` command line: `frames`, `verify` and `tube`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 input
//! error, 4 Frenet singularity.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::curve::{load_curve_spec, sample_curve, SampledCurve};
use crate::frames::FrameKind;
use crate::integrate::PropagationConfig;
use crate::io::{describe_curve, write_atomic, DocumentFormat, FrameFieldDocument, FrameFieldHeader};
use crate::mesh::sweep_tube;
use crate::pipeline::{compute_frame_field, FrameMethod, PipelineError};
use crate::verify::{
    check_double_cover, cross_check_frames, is_regular, CheckRecord, ToleranceConfig, VerifyError,
    VerifyOptions, CLOSURE_TOL,
};

/// Environment variable that replaces the default integration and theorem
/// tolerance of `verify`.
pub const TOL_ENV: &str = "SPINFRAME_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "spinframe", version, about = "Frenet and Bishop frames along space curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a frame field and write it as CSV or JSON.
    Frames(FramesArgs),
    /// Cross-check every frame pipeline and write a JSON report.
    Verify(VerifyArgs),
    /// Sweep a circle along the curve and write an OBJ mesh.
    Tube(TubeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Frenet,
    Bishop1,
    Bishop2,
}

impl From<FrameArg> for FrameKind {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Frenet => FrameKind::Frenet,
            FrameArg::Bishop1 => FrameKind::Bishop1,
            FrameArg::Bishop2 => FrameKind::Bishop2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Vector,
    Spinor,
    ClosedForm,
}

impl From<MethodArg> for FrameMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Vector => FrameMethod::Vector,
            MethodArg::Spinor => FrameMethod::Spinor,
            MethodArg::ClosedForm => FrameMethod::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    /// JSON.
    StructuredText,
}

#[derive(Debug, Args)]
pub struct FramesArgs {
    /// Curve spec (JSON).
    #[arg(long)]
    pub curve: PathBuf,
    #[arg(long, value_enum, default_value = "bishop1")]
    pub frame: FrameArg,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: MethodArg,
    /// Arc-length step; overrides the sample count of the curve spec.
    #[arg(long, value_parser = positive_real)]
    pub step: Option<f64>,
    /// Initial Bishop angle in radians (ignored for Frenet).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite_real)]
    pub theta0: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Leave the timestamp out of the header so output is reproducible.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub curve: PathBuf,
    /// Tolerance for integration and theorem checks.
    #[arg(long, value_parser = positive_real)]
    pub tol: Option<f64>,
    /// Report path; printed to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Only run type-1 Bishop checks.
    #[arg(long)]
    pub skip_frenet: bool,
    #[arg(long, value_parser = positive_real)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TubeArgs {
    #[arg(long)]
    pub curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: f64,
    #[arg(long, default_value_t = 16)]
    pub segments: usize,
    #[arg(long, value_enum, default_value = "bishop1")]
    pub frame: FrameArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite_real)]
    pub theta0: f64,
    #[arg(long, value_parser = positive_real)]
    pub step: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn finite_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn positive_real(s: &str) -> Result<f64, String> {
    match finite_real(s)? {
        v if v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` must be positive")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Singular(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => EXIT_VERIFY_FAILED,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Singular(_) => EXIT_SINGULAR,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e.singular_sample() {
            Some((index, kappa)) => {
                CliError::Singular(format!("Frenet frame undefined at sample {index} (curvature {kappa:.3e})"))
            }
            None => CliError::Input(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Messages go to stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Frames(a) => cmd_frames(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Tube(a) => cmd_tube(&a),
    };
    match result {
        Ok(message) => {
            eprintln!("{message}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_curve(path: &Path, step: Option<f64>) -> Result<(String, SampledCurve), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = load_curve_spec(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Some(step) = step {
        spec = spec.with_step(step).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let curve = sample_curve(&spec).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((describe_curve(&spec), curve))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    write_atomic(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Default tolerances, with the integration and theorem tolerance replaced
/// by [`TOL_ENV`] when it is set.
pub fn default_tolerances() -> Result<ToleranceConfig, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(v) => positive_real(v.trim())
            .map(ToleranceConfig::with_tol)
            .map_err(|e| CliError::Usage(format!("{TOL_ENV}: {e}"))),
        Err(_) => Ok(ToleranceConfig::default()),
    }
}

pub fn cmd_frames(args: &FramesArgs) -> Result<String, CliError> {
    let (description, curve) = load_curve(&args.curve, args.step)?;
    let kind = FrameKind::from(args.frame);
    let method = FrameMethod::from(args.method);
    let field = compute_frame_field(&curve, kind, method, args.theta0, &PropagationConfig::default())?;
    let header = FrameFieldHeader {
        curve: description,
        frame: kind,
        method,
        step: curve.step(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: (!args.no_timestamp)
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    };
    let doc = FrameFieldDocument::new(header, &curve, &field);
    let format = match args.format {
        FormatArg::Csv => DocumentFormat::Csv,
        FormatArg::StructuredText => DocumentFormat::StructuredText,
    };
    write_output(&args.out, &doc.render(format))?;
    Ok(format!(
        "wrote {} {} frames ({}) to {}",
        doc.rows.len(),
        kind.name(),
        method.name(),
        args.out.display()
    ))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<String, CliError> {
    let (_, curve) = load_curve(&args.curve, args.step)?;
    let tolerances = match args.tol {
        Some(tol) => ToleranceConfig::with_tol(tol),
        None => default_tolerances()?,
    };
    let options = VerifyOptions {
        tolerances,
        skip_frenet: args.skip_frenet,
        ..VerifyOptions::default()
    };
    let mut report = cross_check_frames(&curve, &options)?;

    let kind = if is_regular(&curve) && !args.skip_frenet {
        FrameKind::Frenet
    } else {
        FrameKind::Bishop1
    };
    let name = format!("double_cover.{}", kind.name());
    if curve.is_closed(CLOSURE_TOL) {
        match check_double_cover(&curve, kind, &options.config, tolerances.ode_tol) {
            Ok(dc) => {
                let note = format!(
                    "{}; {} sign corrections while lifting",
                    dc.record.note.clone().unwrap_or_default(),
                    dc.lift_flips
                );
                report.push(dc.record.with_note(note));
            }
            Err(VerifyError::FrameNotPeriodic(gap)) => report.push(CheckRecord::skipped(
                name,
                tolerances.ode_tol,
                format!("frame does not close (gap {gap:.3e})"),
            )),
            Err(e) => return Err(e.into()),
        }
    } else {
        report.push(CheckRecord::skipped(name, tolerances.ode_tol, "curve is not closed"));
    }

    let json = report.to_json();
    match &args.report {
        Some(path) => write_output(path, &json)?,
        None => println!("{json}"),
    }
    let summary = format!(
        "{} checks, {} failed, {} skipped",
        report.checks.len(),
        report.failed_count(),
        report.skipped_count()
    );
    if report.passed() {
        Ok(format!("verification passed: {summary}"))
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::VerificationFailed(format!("{summary} ({})", names.join(", "))))
    }
}

pub fn cmd_tube(args: &TubeArgs) -> Result<String, CliError> {
    if !(args.radius > 0.0 && args.radius.is_finite()) {
        return Err(CliError::Usage(format!("--radius must be positive, got {}", args.radius)));
    }
    if args.segments < 3 {
        return Err(CliError::Usage(format!("--segments must be at least 3, got {}", args.segments)));
    }
    let (_, curve) = load_curve(&args.curve, args.step)?;
    let method = if is_regular(&curve) {
        FrameMethod::ClosedForm
    } else {
        FrameMethod::Vector
    };
    let field = compute_frame_field(&curve, args.frame.into(), method, args.theta0, &PropagationConfig::default())?;
    let tangents: Vec<_> = (0..curve.len()).map(|i| curve.tangent(i)).collect();
    let mesh = sweep_tube(&curve.position, &tangents, &field.path, args.radius, args.segments)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(&args.out, &mesh.to_obj())?;
    Ok(format!(
        "wrote {} vertices and {} faces to {}",
        mesh.vertices.len(),
        mesh.faces.len(),
        args.out.display()
    ))
}
