//! Argument parsing, dispatch, output, and exit-code mapping.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or input error,
//! 2 resource budget exhausted, 3 internal invariant violation. Errors go
//! to stderr as `error[<kind>]: <message>`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use locuskit_core::exact::{Integer, QuadExt, Rational};
use locuskit_core::scenario::Formulation;
use num_traits::Zero;
use locuskit_core::trace::BBox;

use crate::pipeline::{
    self, CheckPoint, LocusSource, PipelineError, PlotOptions, PlotSource,
};
use crate::report::{LocusOutcome, PipelineReport};
use crate::svg;
use crate::sysparse;

#[derive(Debug, Parser)]
#[command(
    name = "locuskit",
    version,
    about = "Derive implicit locus equations by elimination, then factor, certify isolated points, classify branches, and plot"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the locus polynomial and print its canonical text.
    Derive(DeriveArgs),
    /// Derive, factor, certify isolated points, classify, and report.
    Analyze(AnalyzeArgs),
    /// Trace the curve (isolated points included) and write an SVG figure.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    /// Distance variables constrained by squared equations only.
    Reduced,
    /// Every metric spelled out as its own equation.
    Full,
}

impl From<FormulationArg> for Formulation {
    fn from(f: FormulationArg) -> Formulation {
        match f {
            FormulationArg::Reduced => Formulation::Reduced,
            FormulationArg::Full => Formulation::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

/// Where the polynomial system comes from; exactly one source is required.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in scenario; `euler` states R = k*rho over the unit base A=(0,0), B=(1,0).
    #[arg(long, value_name = "NAME", conflicts_with = "system", requires = "k")]
    pub scenario: Option<String>,
    /// Exact ratio for the scenario: `2`, `19/10`, or `2.1`.
    #[arg(long, value_name = "RATIO", requires = "scenario", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// System file: `vars:` and `eliminate:` headers, then one polynomial per line.
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
    /// Scenario equation set to eliminate from.
    #[arg(long, value_enum, default_value_t = FormulationArg::Reduced, requires = "scenario")]
    pub formulation: FormulationArg,
    /// Saturate away degenerate (mover on the base line) components first.
    #[arg(long, requires = "scenario")]
    pub saturate: bool,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Stdout format; `text` prints just the locus polynomial.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Also write the full JSON report to this file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Exact membership probe: two coordinates, each `RAT` or `RAT:sqrtN`
    /// (meaning RAT * sqrt(N)). Repeatable.
    #[arg(
        long = "check-point",
        value_names = ["X", "Y"],
        num_args = 2,
        action = clap::ArgAction::Append,
        allow_hyphen_values = true
    )]
    pub check_point: Vec<String>,
    /// Seed for classification subsampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stdout format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Also write the full JSON report to this file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Trace a raw polynomial in x and y instead of deriving a locus.
    #[arg(long, value_name = "POLY", conflicts_with_all = ["scenario", "system"])]
    pub poly: Option<String>,
    /// Color branches by the radius condition their samples satisfy
    /// (scenario sources only).
    #[arg(long)]
    pub classify: bool,
    /// Viewport corners as rationals: x0 y0 x1 y1.
    #[arg(long, num_args = 4, value_names = ["X0", "Y0", "X1", "Y1"], allow_hyphen_values = true)]
    pub bbox: Option<Vec<String>>,
    /// Grid cells per axis (minimum 16).
    #[arg(long, default_value_t = 256, value_name = "N")]
    pub resolution: u32,
    /// Output SVG file.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Also dump traced vertices as `x,y,label` CSV lines.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

/// Parses argv and runs the requested pipeline; returns the process exit
/// code instead of exiting so tests can drive it.
pub fn run_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, PipelineError> {
    let config = pipeline::groebner_config_from_env()?;
    match cli.command {
        Command::Derive(args) => {
            let source = to_source(&args.source)?;
            let report = pipeline::run_derive(&source, &config)?;
            emit(&report, args.format, args.out.as_deref(), derive_text)?;
            Ok(0)
        }
        Command::Analyze(args) => {
            let source = to_source(&args.source)?;
            let points = parse_check_points(&args.check_point)?;
            let run = pipeline::run_analyze(&source, &points, args.seed, &config)?;
            emit(&run.report, args.format, args.out.as_deref(), PipelineReport::to_text)?;
            Ok(run.exit_code)
        }
        Command::Plot(args) => {
            let source = match &args.poly {
                Some(text) => PlotSource::Poly(text.clone()),
                None => PlotSource::Locus(to_source(&args.source)?),
            };
            let bbox = match &args.bbox {
                Some(corners) => parse_bbox(corners)?,
                None => BBox::default(),
            };
            let opts =
                PlotOptions { bbox, resolution: args.resolution, classify: args.classify };
            let out = pipeline::run_plot(&source, &opts, &config)?;
            for w in &out.trace.warnings {
                eprintln!("warning: {w}");
            }
            svg::write_svg(&out.trace, &svg::Style::default(), &args.out)
                .map_err(|e| write_error(&args.out, &e))?;
            if let Some(csv_path) = &args.csv {
                std::fs::write(csv_path, svg::dump_csv(&out.trace))
                    .map_err(|e| write_error(csv_path, &e))?;
            }
            Ok(0)
        }
    }
}

fn write_error(path: &Path, e: &std::io::Error) -> PipelineError {
    PipelineError::Usage(format!("cannot write `{}`: {e}", path.display()))
}

fn to_source(args: &SourceArgs) -> Result<LocusSource, PipelineError> {
    match (&args.scenario, &args.system) {
        (Some(name), None) => {
            if name != "euler" {
                return Err(PipelineError::Usage(format!(
                    "unknown scenario `{name}`; available: euler"
                )));
            }
            let k_text = args.k.as_deref().expect("clap enforces --k with --scenario");
            let k = sysparse::parse_rational(k_text).ok_or_else(|| {
                PipelineError::Usage(format!(
                    "invalid ratio `{k_text}`: expected an exact value like `2`, `19/10`, or `2.1`"
                ))
            })?;
            Ok(LocusSource::Scenario {
                k,
                formulation: args.formulation.into(),
                saturate: args.saturate,
            })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                PipelineError::Usage(format!("cannot read `{}`: {e}", path.display()))
            })?;
            Ok(LocusSource::System { path: path.display().to_string(), text })
        }
        _ => Err(PipelineError::Usage(
            "exactly one of --scenario or --system (or --poly for plot) is required".into(),
        )),
    }
}

/// `RAT` or `RAT:sqrtN`, the latter meaning `RAT * sqrt(N)`.
fn parse_coordinate(token: &str) -> Result<QuadExt, PipelineError> {
    let bad = || {
        PipelineError::Usage(format!(
            "malformed coordinate `{token}`: expected RATIONAL or RATIONAL:sqrtN"
        ))
    };
    match token.split_once(':') {
        None => {
            let r = sysparse::parse_rational(token).ok_or_else(bad)?;
            Ok(QuadExt::from_rational(r))
        }
        Some((coeff, radical)) => {
            let r = sysparse::parse_rational(coeff).ok_or_else(bad)?;
            let n: u64 = radical
                .strip_prefix("sqrt")
                .and_then(|digits| digits.parse().ok())
                .ok_or_else(bad)?;
            QuadExt::new(Rational::zero(), r, Integer::from(n))
                .map_err(|e| PipelineError::Usage(e.to_string()))
        }
    }
}

fn parse_check_points(tokens: &[String]) -> Result<Vec<CheckPoint>, PipelineError> {
    // clap's num_args = 2 guarantees whole pairs
    tokens
        .chunks(2)
        .map(|pair| {
            Ok(CheckPoint {
                x: parse_coordinate(&pair[0])?,
                y: parse_coordinate(&pair[1])?,
                x_text: pair[0].clone(),
                y_text: pair[1].clone(),
            })
        })
        .collect()
}

fn parse_bbox(corners: &[String]) -> Result<BBox, PipelineError> {
    let vals: Vec<Rational> = corners
        .iter()
        .map(|s| {
            sysparse::parse_rational(s)
                .ok_or_else(|| PipelineError::Usage(format!("invalid bbox coordinate `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    BBox::new(vals[0].clone(), vals[1].clone(), vals[2].clone(), vals[3].clone())
        .map_err(|e| PipelineError::Usage(e.to_string()))
}

fn derive_text(report: &PipelineReport) -> String {
    match report.outcome {
        LocusOutcome::Curve => format!("{}\n", report.locus.as_deref().unwrap_or_default()),
        LocusOutcome::EmptyLocus => "empty locus\n".to_owned(),
        LocusOutcome::WholePlane => "whole plane\n".to_owned(),
    }
}

fn emit(
    report: &PipelineReport,
    format: FormatArg,
    out: Option<&Path>,
    text: impl Fn(&PipelineReport) -> String,
) -> Result<(), PipelineError> {
    let body = match format {
        FormatArg::Text => text(report),
        FormatArg::Json => format!("{}\n", report.to_json()),
    };
    print!("{body}");
    if let Some(path) = out {
        std::fs::write(path, format!("{}\n", report.to_json()))
            .map_err(|e| write_error(path, &e))?;
    }
    Ok(())
}
