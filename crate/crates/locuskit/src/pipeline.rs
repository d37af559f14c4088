//! Stage orchestration shared by the CLI subcommands.
//!
//! Each pipeline (derive, analyze, plot) is one pass: scenario or parsed
//! system, elimination, locus normalization, then the stages the subcommand
//! asked for. Results land in a [`PipelineReport`] or a trace ready for
//! rendering; per-stage wall times are collected in milliseconds.

use std::collections::BTreeMap;
use std::time::Instant;

use locuskit_core::exact::{QuadExt, Rational};
use locuskit_core::factorize::factor_bivariate;
use locuskit_core::groebner::{
    eliminate, locus_polynomial, saturate, GroebnerConfig, GroebnerError,
};
use locuskit_core::multipoly::{PolyError, Polynomial, VarContext};
use locuskit_core::realsolve::acnodes;
use locuskit_core::scenario::{
    classify_sample, euler_nondegeneracy, euler_system, BranchLabel, Formulation, ScenarioError,
};
use locuskit_core::trace::{trace_with_isolated, BBox, TraceError, TraceResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{
    CriticalPointReport, FactorReport, InputEcho, LocusOutcome, MembershipReport, PipelineReport,
};
use crate::sysparse::{self, ParseError};

/// Relative tolerance for matching a sampled radius ratio to a branch label.
pub const CLASSIFY_TOL: f64 = 1e-6;
/// Grid resolution for classification sampling (coarser than plotting; the
/// samples only need to cover every branch, not render it).
const SAMPLE_RESOLUTION: u32 = 128;
/// Cap on classified samples per factor; larger traces are subsampled with
/// the seeded generator.
const SAMPLE_CAP: usize = 2000;
/// Environment variable overriding the Groebner S-pair budget.
pub const BUDGET_ENV: &str = "LOCUSKIT_BUDGET_PAIRS";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    /// Bad flags, unreadable input, or an ill-posed request. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// A resource budget was exhausted before completion. Exit code 2.
    #[error("{0}")]
    Budget(String),
    /// An internal invariant failed; always a bug. Exit code 3.
    #[error("{0}")]
    Internal(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 1,
            PipelineError::Budget(_) => 2,
            PipelineError::Internal(_) => 3,
        }
    }

    /// Machine-readable error class, printed as `error[<kind>]:` on stderr.
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Usage(_) => "usage",
            PipelineError::Budget(_) => "budget",
            PipelineError::Internal(_) => "internal",
        }
    }
}

impl From<GroebnerError> for PipelineError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::BudgetExhausted { .. } | GroebnerError::Cancelled(_) => {
                PipelineError::Budget(e.to_string())
            }
            GroebnerError::EmptyInput | GroebnerError::BadElimVars => {
                PipelineError::Usage(e.to_string())
            }
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

impl From<ScenarioError> for PipelineError {
    fn from(e: ScenarioError) -> Self {
        PipelineError::Usage(e.to_string())
    }
}

impl From<ParseError> for PipelineError {
    fn from(e: ParseError) -> Self {
        PipelineError::Usage(e.to_string())
    }
}

impl From<PolyError> for PipelineError {
    fn from(e: PolyError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<TraceError> for PipelineError {
    fn from(e: TraceError) -> Self {
        match e {
            TraceError::Poly(p) => PipelineError::Internal(p.to_string()),
            other => PipelineError::Usage(other.to_string()),
        }
    }
}

/// Reads the S-pair budget override from the environment.
pub fn groebner_config_from_env() -> Result<GroebnerConfig, PipelineError> {
    config_from_budget_text(std::env::var(BUDGET_ENV).ok().as_deref())
}

fn config_from_budget_text(raw: Option<&str>) -> Result<GroebnerConfig, PipelineError> {
    let mut config = GroebnerConfig::default();
    if let Some(raw) = raw {
        let pairs: u64 = raw.trim().parse().map_err(|_| {
            PipelineError::Usage(format!("{BUDGET_ENV} must be a positive integer, got `{raw}`"))
        })?;
        if pairs == 0 {
            return Err(PipelineError::Usage(format!("{BUDGET_ENV} must be positive")));
        }
        config.max_pairs = pairs;
    }
    Ok(config)
}

/// Where the polynomial system comes from.
#[derive(Debug, Clone)]
pub enum LocusSource {
    Scenario { k: Rational, formulation: Formulation, saturate: bool },
    System { path: String, text: String },
}

pub fn formulation_name(f: Formulation) -> &'static str {
    match f {
        Formulation::Reduced => "reduced",
        Formulation::Full => "full",
    }
}

fn input_echo(source: &LocusSource) -> InputEcho {
    match source {
        LocusSource::Scenario { k, formulation, saturate } => InputEcho::Scenario {
            name: "euler".to_owned(),
            k: k.to_string(),
            formulation: formulation_name(*formulation).to_owned(),
            saturate: *saturate,
        },
        LocusSource::System { path, text } => {
            InputEcho::System { path: path.clone(), text: text.clone() }
        }
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

struct Derived {
    outcome: LocusOutcome,
    locus: Option<Polynomial>,
    timings: BTreeMap<String, u64>,
}

fn derive_locus(source: &LocusSource, config: &GroebnerConfig) -> Result<Derived, PipelineError> {
    let mut timings = BTreeMap::new();
    let sys = match source {
        LocusSource::Scenario { k, formulation, saturate: sat } => {
            let sys = euler_system(k, *formulation)?;
            if *sat {
                let t = Instant::now();
                let saturated = saturate(&sys, &euler_nondegeneracy(&sys))?;
                timings.insert("saturate".to_owned(), ms(t));
                saturated
            } else {
                sys
            }
        }
        LocusSource::System { text, .. } => sysparse::parse_system(text)?,
    };
    let t = Instant::now();
    let elim = eliminate(&sys, config)?;
    timings.insert("eliminate".to_owned(), ms(t));
    let t = Instant::now();
    match locus_polynomial(&elim.polys) {
        Ok(p) => {
            timings.insert("normalize".to_owned(), ms(t));
            Ok(Derived { outcome: LocusOutcome::Curve, locus: Some(p), timings })
        }
        Err(GroebnerError::WholePlaneLocus) => {
            Ok(Derived { outcome: LocusOutcome::WholePlane, locus: None, timings })
        }
        Err(GroebnerError::EmptyLocus) => {
            Ok(Derived { outcome: LocusOutcome::EmptyLocus, locus: None, timings })
        }
        Err(e) => Err(e.into()),
    }
}

fn base_report(source: &LocusSource, derived: &Derived) -> PipelineReport {
    let mut report = PipelineReport::new(input_echo(source));
    report.outcome = derived.outcome;
    report.locus = derived.locus.as_ref().map(Polynomial::canonical_text);
    report.timings_ms = derived.timings.clone();
    report
}

/// Elimination and normalization only; the report carries the locus text.
pub fn run_derive(
    source: &LocusSource,
    config: &GroebnerConfig,
) -> Result<PipelineReport, PipelineError> {
    let derived = derive_locus(source, config)?;
    Ok(base_report(source, &derived))
}

/// An exact plane point for membership checks, with its input spelling.
#[derive(Debug, Clone)]
pub struct CheckPoint {
    pub x: QuadExt,
    pub y: QuadExt,
    pub x_text: String,
    pub y_text: String,
}

fn classify_factor(
    factor: &Polynomial,
    k: &Rational,
    seed: u64,
) -> Result<BTreeMap<String, usize>, TraceError> {
    let trace = locuskit_core::trace::trace_curve(factor, &BBox::default(), SAMPLE_RESOLUTION)?;
    let mut verts: Vec<(f64, f64)> = trace.polylines.iter().flatten().copied().collect();
    if verts.len() > SAMPLE_CAP {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = rand::seq::index::sample(&mut rng, verts.len(), SAMPLE_CAP);
        verts = picked.iter().map(|i| verts[i]).collect();
    }
    let mut counts = BTreeMap::new();
    for (x, y) in verts {
        // samples the metrics cannot rank (degenerate triangle positions)
        // are honest non-matches
        let label = classify_sample(x, y, k, CLASSIFY_TOL).unwrap_or(BranchLabel::None);
        *counts.entry(label.as_str().to_owned()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// A finished analysis: the report plus the exit code the run earned.
///
/// Stage failures downstream of the locus are recorded in the report's
/// `errors` rather than aborting; `exit_code` is 0 when the run was clean,
/// 2 when a stage hit a resource budget, 3 otherwise.
pub struct AnalyzeRun {
    pub report: PipelineReport,
    pub exit_code: i32,
}

/// Budget failures outrank other stage failures: they name the one knob the
/// caller can actually turn.
fn bump_exit(exit: &mut i32, class: i32) {
    if *exit == 0 || (class == 2 && *exit == 3) {
        *exit = class;
    }
}

fn realsolve_exit(e: &locuskit_core::realsolve::RealSolveError) -> i32 {
    use locuskit_core::realsolve::RealSolveError;
    match e {
        RealSolveError::Groebner(
            GroebnerError::BudgetExhausted { .. } | GroebnerError::Cancelled(_),
        ) => 2,
        _ => 3,
    }
}

/// Full analysis: derive, factor, certify isolated points per factor,
/// classify samples (scenario sources), and run membership checks.
pub fn run_analyze(
    source: &LocusSource,
    points: &[CheckPoint],
    seed: u64,
    config: &GroebnerConfig,
) -> Result<AnalyzeRun, PipelineError> {
    let mut exit = 0;
    let derived = derive_locus(source, config)?;
    let mut report = base_report(source, &derived);
    let Some(locus) = &derived.locus else {
        // degenerate outcomes still answer membership: the whole plane
        // contains every point, the empty locus none
        for p in points {
            report.membership.push(MembershipReport {
                x: p.x_text.clone(),
                y: p.y_text.clone(),
                on_locus: report.outcome == LocusOutcome::WholePlane,
            });
        }
        return Ok(AnalyzeRun { report, exit_code: exit });
    };

    let t = Instant::now();
    match factor_bivariate(locus) {
        Ok(fact) => {
            report.timings_ms.insert("factor".to_owned(), ms(t));
            for (f, mult) in &fact.factors {
                report.factors.push(FactorReport {
                    text: f.canonical_text(),
                    multiplicity: *mult,
                    degree: u32::from(f.total_degree()),
                    classification: None,
                });
            }
            // isolated points and classification are plane-curve notions
            if locus.context().len() == 2 {
                let t = Instant::now();
                for (i, (f, _)) in fact.factors.iter().enumerate() {
                    match acnodes(f) {
                        Ok(pts) => {
                            for cp in pts {
                                report.critical_points.push(CriticalPointReport {
                                    factor: i,
                                    x: cp.x.to_string(),
                                    y: cp.y.to_string(),
                                    kind: cp.kind.as_str().to_owned(),
                                    on_curve: cp.on_curve,
                                    hessian_det_sign: cp.hessian_det_sign,
                                });
                            }
                        }
                        Err(e) => {
                            bump_exit(&mut exit, realsolve_exit(&e));
                            report.errors.push(format!(
                                "isolated-point analysis failed on factor {}: {e}",
                                i + 1
                            ));
                        }
                    }
                }
                report.timings_ms.insert("acnodes".to_owned(), ms(t));
                if let LocusSource::Scenario { k, .. } = source {
                    let t = Instant::now();
                    let mut total: BTreeMap<String, usize> = BTreeMap::new();
                    for (i, (f, _)) in fact.factors.iter().enumerate() {
                        match classify_factor(f, k, seed) {
                            Ok(counts) => {
                                for (label, n) in &counts {
                                    *total.entry(label.clone()).or_insert(0) += n;
                                }
                                if !counts.is_empty() {
                                    report.factors[i].classification = Some(counts);
                                }
                            }
                            Err(e) => {
                                bump_exit(&mut exit, 3);
                                report.errors.push(format!(
                                    "classification failed on factor {}: {e}",
                                    i + 1
                                ));
                            }
                        }
                    }
                    report.classification = Some(total);
                    report.timings_ms.insert("classify".to_owned(), ms(t));
                }
            }
        }
        Err(e) => {
            bump_exit(&mut exit, 3);
            report.errors.push(format!("factorization failed: {e}"));
        }
    }

    for p in points {
        match locus.eval_quad(&[p.x.clone(), p.y.clone()]) {
            Ok(v) => report.membership.push(MembershipReport {
                x: p.x_text.clone(),
                y: p.y_text.clone(),
                on_locus: v.is_zero(),
            }),
            Err(e) => {
                bump_exit(&mut exit, 3);
                report.errors.push(format!(
                    "membership check at ({}, {}) failed: {e}",
                    p.x_text, p.y_text
                ));
            }
        }
    }
    Ok(AnalyzeRun { report, exit_code: exit })
}

/// What `plot` should draw.
#[derive(Debug, Clone)]
pub enum PlotSource {
    Locus(LocusSource),
    Poly(String),
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub bbox: BBox,
    pub resolution: u32,
    pub classify: bool,
}

pub struct PlotOutput {
    pub trace: TraceResult,
    pub timings: BTreeMap<String, u64>,
}

/// Traces the requested curve with certified isolated points injected and,
/// for scenario sources with `--classify`, labels every vertex.
///
/// An empty or whole-plane locus yields a trace with nothing in it plus a
/// warning, so the renderer still produces a frame.
pub fn run_plot(
    source: &PlotSource,
    opts: &PlotOptions,
    config: &GroebnerConfig,
) -> Result<PlotOutput, PipelineError> {
    let mut timings = BTreeMap::new();
    let mut k_ratio = None;
    let poly = match source {
        PlotSource::Poly(text) => {
            let ctx = VarContext::new(["x", "y"])?;
            Some(sysparse::parse_poly(text, &ctx)?)
        }
        PlotSource::Locus(ls) => {
            let derived = derive_locus(ls, config)?;
            timings.extend(derived.timings);
            if let LocusSource::Scenario { k, .. } = ls {
                k_ratio = Some(k.clone());
            }
            derived.locus
        }
    };
    if opts.classify && k_ratio.is_none() {
        return Err(PipelineError::Usage(
            "--classify needs a scenario ratio; it does not apply to --system or --poly".into(),
        ));
    }
    let Some(poly) = poly else {
        return Ok(PlotOutput {
            trace: TraceResult {
                polylines: Vec::new(),
                isolated_points: Vec::new(),
                bbox: opts.bbox.clone(),
                resolution: opts.resolution,
                labels: None,
                warnings: vec!["locus has no curve to draw".to_owned()],
            },
            timings,
        });
    };
    let t = Instant::now();
    let mut trace = trace_with_isolated(&poly, &opts.bbox, opts.resolution)?;
    timings.insert("trace".to_owned(), ms(t));
    if opts.classify {
        let k = k_ratio.expect("checked above");
        let t = Instant::now();
        let labels = trace
            .polylines
            .iter()
            .map(|line| {
                line.iter()
                    .map(|&(x, y)| classify_sample(x, y, &k, CLASSIFY_TOL).unwrap_or(BranchLabel::None))
                    .collect()
            })
            .collect();
        trace.labels = Some(labels);
        timings.insert("classify".to_owned(), ms(t));
    }
    Ok(PlotOutput { trace, timings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use locuskit_core::exact::rat;

    fn scenario(k: Rational) -> LocusSource {
        LocusSource::Scenario { k: k.clone(), formulation: Formulation::Reduced, saturate: false }
    }

    #[test]
    fn bisector_system_derives_the_perpendicular_bisector() {
        let text =
            "vars: a b x y\neliminate: a b\na^2 - x^2 - y^2\nb^2 - (x - 1)*(x - 1) - y^2\na - b\n";
        let source =
            LocusSource::System { path: "bisector.sys".to_owned(), text: text.to_owned() };
        let report = run_derive(&source, &GroebnerConfig::default()).unwrap();
        assert_eq!(report.outcome, LocusOutcome::Curve);
        assert_eq!(report.locus.as_deref(), Some("2*x - 1"));
        assert!(report.timings_ms.contains_key("eliminate"));
    }

    #[test]
    fn contradictory_system_reports_the_empty_locus() {
        let text = "vars: x y t\neliminate: t\n1\n";
        let source = LocusSource::System { path: "empty.sys".to_owned(), text: text.to_owned() };
        let run = run_analyze(
            &source,
            &[CheckPoint {
                x: QuadExt::from_rational(rat(1, 2)),
                y: QuadExt::from_rational(rat(1, 2)),
                x_text: "1/2".to_owned(),
                y_text: "1/2".to_owned(),
            }],
            0,
            &GroebnerConfig::default(),
        )
        .unwrap();
        assert_eq!(run.exit_code, 0);
        let report = run.report;
        assert_eq!(report.outcome, LocusOutcome::EmptyLocus);
        assert!(report.locus.is_none());
        assert!(report.to_text().starts_with("empty locus"));
        assert_eq!(report.membership.len(), 1);
        assert!(!report.membership[0].on_locus);
    }

    #[test]
    fn tautological_system_reports_the_whole_plane() {
        let text = "vars: x y t\neliminate: t\nt - 1\n";
        let source = LocusSource::System { path: "taut.sys".to_owned(), text: text.to_owned() };
        let report = run_derive(&source, &GroebnerConfig::default()).unwrap();
        assert_eq!(report.outcome, LocusOutcome::WholePlane);
    }

    #[test]
    fn nonpositive_ratio_is_a_usage_error_with_the_contract_message() {
        let err = run_derive(&scenario(rat(0, 1)), &GroebnerConfig::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert_eq!(err.to_string(), "k must be positive");
    }

    #[test]
    fn tiny_pair_budget_is_reported_as_a_budget_error() {
        let config = GroebnerConfig { max_pairs: 2, ..GroebnerConfig::default() };
        let err = run_derive(&scenario(rat(2, 1)), &config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(err.kind(), "budget");
    }

    #[test]
    fn budget_override_parses_and_rejects_garbage() {
        assert_eq!(config_from_budget_text(None).unwrap().max_pairs,
            GroebnerConfig::default().max_pairs);
        assert_eq!(config_from_budget_text(Some(" 123 ")).unwrap().max_pairs, 123);
        assert_eq!(config_from_budget_text(Some("12x")).unwrap_err().exit_code(), 1);
        assert_eq!(config_from_budget_text(Some("0")).unwrap_err().exit_code(), 1);
    }
}
