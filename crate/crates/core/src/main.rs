use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use triple_zero::blowup;
use triple_zero::format::{crossings_csv, fmt_f64, series_csv, to_json, trace_csv};
use triple_zero::harness::{self, VerifyConfig};
use triple_zero::integrator::{Fault, State, Termination};
use triple_zero::oscillation::{self, CrossingEvent, EnvelopeStats, GapRecord};
use triple_zero::{integrate, taylor_coefficients, EquationForm, Error, IntegratorConfig};

#[derive(Parser)]
#[command(name = "triple-zero", version, about = "Numerics for the triple-zero Painleve I transcendent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate from the origin and write the trajectory.
    Trace(TraceArgs),
    /// Exact Taylor coefficients at the origin.
    Series(SeriesArgs),
    /// Bracket the blow-up time of the pi-plus form.
    Blowup(BlowupArgs),
    /// Crossings of s and sqrt(t) in the pi-minus form, with gap bounds.
    Crossings(CrossingsArgs),
    /// Run every registered check and print the report as JSON.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Tolerances {
    /// Relative error tolerance per step.
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    rel_tol: f64,
    /// Absolute error tolerance per step.
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    abs_tol: f64,
}

impl Tolerances {
    fn apply(&self, cfg: IntegratorConfig) -> IntegratorConfig {
        IntegratorConfig { rel_tol: self.rel_tol, abs_tol: self.abs_tol, ..cfg }
    }
}

#[derive(Args, Clone)]
struct Output {
    /// Write CSV, to PATH if given.
    #[arg(long, value_name = "PATH", num_args = 0..=1, conflicts_with = "json")]
    csv: Option<Option<PathBuf>>,
    /// Write JSON, to PATH if given.
    #[arg(long, value_name = "PATH", num_args = 0..=1)]
    json: Option<Option<PathBuf>>,
    /// Output file (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

impl Output {
    fn resolve(&self, default: Format) -> Result<(Format, Option<PathBuf>), String> {
        let (format, inline) = match (&self.csv, &self.json) {
            (Some(p), _) => (Format::Csv, p.clone()),
            (_, Some(p)) => (Format::Json, p.clone()),
            _ => (default, None),
        };
        match (inline, &self.out) {
            (Some(_), Some(_)) => Err("give the output path either inline or with --out, not both".into()),
            (Some(p), None) => Ok((format, Some(p))),
            (None, out) => Ok((format, out.clone())),
        }
    }
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, default_value = "pi-minus", value_parser = parse_form)]
    form: EquationForm,
    /// End of the integration interval; negative integrates backwards.
    #[arg(long, default_value_t = 100.0, allow_hyphen_values = true)]
    t_max: f64,
    /// Stop once |s| reaches this value.
    #[arg(long, default_value_t = 1e8)]
    s_max: f64,
    /// Resample the dense output on this grid instead of writing step ends.
    #[arg(long)]
    spacing: Option<f64>,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, default_value = "pi-minus", value_parser = parse_form)]
    form: EquationForm,
    /// Highest power of t.
    #[arg(long, default_value_t = triple_zero::series::DEFAULT_SERIES_ORDER)]
    order: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BlowupArgs {
    /// Requested bracket width.
    #[arg(long, default_value_t = 0.01)]
    width_tol: f64,
    /// Smallest guard on s the ladder must visit.
    #[arg(long, default_value_t = 1e8)]
    s_max: f64,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CrossingsArgs {
    #[arg(long, default_value_t = 100.0)]
    t_max: f64,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipLinearTerm,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = harness::DECAY_HORIZON)]
    t_max: f64,
    #[command(flatten)]
    tol: Tolerances,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print the registered check ids and anchors as a Markdown table and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

fn parse_form(s: &str) -> Result<EquationForm, String> {
    s.parse()
}

#[derive(Serialize)]
struct TraceJson<'a> {
    form: EquationForm,
    config: &'a IntegratorConfig,
    termination: Termination,
    states: &'a [State],
}

#[derive(Serialize)]
struct BlowupJson {
    lower: f64,
    upper: f64,
    tau: f64,
    analytic_lower: f64,
    integral_bound: f64,
}

#[derive(Serialize)]
struct CrossingsJson {
    events: Vec<CrossingEvent>,
    gaps: Vec<GapRecord>,
    envelope: Option<EnvelopeStats>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::OrderTooLarge { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("write failed: {e}"))
    }
}

fn emit(text: &str, path: Option<PathBuf>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn resolve(output: &Output, default: Format) -> Result<(Format, Option<PathBuf>), Failure> {
    output.resolve(default).map_err(Failure::Usage)
}

fn trace(args: TraceArgs) -> Result<ExitCode, Failure> {
    let cfg = args.tol.apply(IntegratorConfig::default()).with_t_max(args.t_max).with_s_max(args.s_max);
    let (format, path) = resolve(&args.output, Format::Csv)?;
    if args.spacing.is_some_and(|h| !(h > 0.0)) {
        return Err(Failure::Usage("--spacing must be positive".into()));
    }
    let traj = integrate(args.form, &cfg)?;
    if traj.termination() == Termination::StepUnderflow {
        eprintln!("warning: step size underflow at t = {}", fmt_f64(traj.last_state().t));
    }
    let states: Vec<State> = match args.spacing {
        Some(h) => traj.sample(h)?,
        None => traj.states().collect(),
    };
    let text = match format {
        Format::Csv => trace_csv(&states),
        Format::Json => to_json(&TraceJson { form: args.form, config: traj.config(), termination: traj.termination(), states: &states }),
    };
    emit(&text, path)?;
    Ok(ExitCode::SUCCESS)
}

fn series(args: SeriesArgs) -> Result<ExitCode, Failure> {
    let (format, path) = resolve(&args.output, Format::Csv)?;
    let ser = taylor_coefficients(args.form, args.order)?;
    let entries = ser.nonzero_entries();
    let text = match format {
        Format::Csv => series_csv(&entries, &ser.coeffs_f64()),
        Format::Json => to_json(&entries),
    };
    emit(&text, path)?;
    Ok(ExitCode::SUCCESS)
}

fn blowup_cmd(args: BlowupArgs) -> Result<ExitCode, Failure> {
    let (format, path) = resolve(&args.output, Format::Json)?;
    if !(args.width_tol > 0.0) {
        return Err(Failure::Usage(format!("--width-tol must be positive, got {}", args.width_tol)));
    }
    let cfg = args.tol.apply(IntegratorConfig::default()).with_s_max(args.s_max);
    cfg.validate()?;
    let est = blowup::estimate_blowup(&cfg, args.width_tol)?;
    if !est.width_reached {
        eprintln!("warning: width {} not reached; best bracket has width {}", fmt_f64(args.width_tol), fmt_f64(est.upper - est.lower));
    }
    let row = BlowupJson {
        lower: est.lower,
        upper: est.upper,
        tau: est.tau_used,
        analytic_lower: blowup::analytic_lower_bound(),
        integral_bound: blowup::bounding_integral(),
    };
    let text = match format {
        Format::Json => to_json(&row),
        Format::Csv => format!(
            "lower,upper,tau,analytic_lower,integral_bound\n{},{},{},{},{}\n",
            fmt_f64(row.lower),
            fmt_f64(row.upper),
            fmt_f64(row.tau),
            fmt_f64(row.analytic_lower),
            fmt_f64(row.integral_bound)
        ),
    };
    emit(&text, path)?;
    Ok(ExitCode::SUCCESS)
}

fn crossings_cmd(args: CrossingsArgs) -> Result<ExitCode, Failure> {
    let (format, path) = resolve(&args.output, Format::Csv)?;
    if !(args.t_max >= 0.0) {
        return Err(Failure::Usage(format!("--t-max must be non-negative, got {}", args.t_max)));
    }
    let cfg = args.tol.apply(IntegratorConfig::default()).with_t_max(args.t_max);
    let traj = integrate(EquationForm::PiMinus, &cfg)?;
    let end = traj.coverage().1;
    if end < args.t_max {
        return Err(Failure::Compute(format!("integration stopped at t = {} ({:?})", fmt_f64(end), traj.termination())));
    }
    let events = oscillation::crossings(&traj, args.t_max)?;
    let gaps = oscillation::gap_audit(&events);
    let text = match format {
        Format::Csv => crossings_csv(&events, &gaps),
        Format::Json => {
            let envelope = if args.t_max > 0.0 { Some(oscillation::envelope_stats(&traj, (0.0, args.t_max))?) } else { None };
            to_json(&CrossingsJson { events, gaps, envelope })
        }
    };
    emit(&text, path)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: VerifyArgs) -> Result<ExitCode, Failure> {
    if args.list {
        let mut table = String::from("| check_id | anchor |\n|---|---|\n");
        let mut rows: Vec<_> = harness::REGISTRY.iter().map(|c| (c.id, c.anchor)).collect();
        rows.sort();
        for (id, anchor) in rows {
            table.push_str(&format!("| `{id}` | {anchor} |\n"));
        }
        emit(&table, args.out)?;
        return Ok(ExitCode::SUCCESS);
    }
    let mut integrator = args.tol.apply(IntegratorConfig::default()).with_t_max(args.t_max);
    integrator.fault = args.inject_fault.map(|FaultArg::FlipLinearTerm| Fault::FlipLinearTerm);
    let report = harness::verify(VerifyConfig { integrator })?;
    emit(&to_json(&report), args.out)?;
    for c in report.checks.iter().filter(|c| c.status == harness::CheckStatus::Fail) {
        eprintln!("FAIL {}: {}", c.check_id, c.details);
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Trace(a) => trace(a),
        Command::Series(a) => series(a),
        Command::Blowup(a) => blowup_cmd(a),
        Command::Crossings(a) => crossings_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
