//! The `legiplan` command line.
//!
//! Exit codes: 0 on success, 1 for usage, input and validation errors, 2 when
//! the planner fails. Errors are written to stderr as a JSON document.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use legiplan_core::{
    evaluate_trajectory, plan_once, run_closed_loop, ClosedLoopError, ClosedLoopRun, LegibilityReport, Mode,
    PlanError, PosteriorModel, ScenarioSpec, DEFAULT_PARTIALS,
};

use crate::exec::PoolExecutor;
use crate::log::{plan_rows, read_log, rows_to_trajectory, write_log, LogRow};
use crate::report::{to_json, BreakdownJson, CompareReport, ErrorJson, LegibilityReportJson, RunSummary};
use crate::scenario::{parse_scenario, ScenarioError};
use crate::svg::{render_svg, LabeledTrajectory, TrajectoryStyle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PLANNER: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "legiplan", version, about = "Legibility-aware local motion planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan one horizon from the start state and print its cost breakdown.
    Plan(PlanArgs),
    /// Run the receding-horizon loop and write the executed trajectory log.
    Simulate(SimulateArgs),
    /// Score a trajectory log with the synthetic observer.
    Evaluate(EvaluateArgs),
    /// Run both planners and compare their legibility scores.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Planner mode; defaults to the scenario's.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Random seed; defaults to the scenario's.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    trajectory: PathBuf,
    /// Rationality coefficient of the observer model.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Comma-separated arc-length fractions of the partials.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PARTIALS)]
    fractions: Vec<f64>,
    /// Only count what the designated observer can see.
    #[arg(long)]
    mask_fov: bool,
    /// Mode recorded in the report; defaults to the scenario's.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Baseline,
    Legible,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Baseline => Mode::Baseline,
            ModeArg::Legible => Mode::Legible,
        }
    }
}

/// A failed command: exit code plus the error document.
struct Failure {
    code: i32,
    doc: Box<ErrorJson>,
}

impl Failure {
    fn new(code: i32, error: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            doc: Box::new(ErrorJson {
                error,
                path: None,
                rule: None,
                message: message.into(),
                cycle: None,
                breakdown: None,
            }),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(EXIT_INVALID, "io", format!("{}: {e}", path.display()))
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        let mut f = Failure::new(EXIT_INVALID, "validation", e.to_string());
        f.doc.path = Some(e.path().to_string());
        f.doc.rule = Some(e.rule().to_string());
        f
    }
}

fn plan_failure(cycle: Option<usize>, e: &PlanError) -> Failure {
    let mut f = Failure::new(EXIT_PLANNER, "planner", e.to_string());
    f.doc.cycle = cycle;
    if let PlanError::Collided { breakdown } = e {
        f.doc.breakdown = Some(breakdown.into());
    }
    f
}

fn closed_loop_failure(e: &ClosedLoopError) -> Failure {
    plan_failure(Some(e.cycle), &e.error)
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = stderr.write_all(to_json(&f.doc).as_bytes());
            f.code
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let out = match command {
        Command::Plan(a) => plan(a)?,
        Command::Simulate(a) => simulate(a)?,
        Command::Evaluate(a) => evaluate(a)?,
        Command::Compare(a) => compare(a)?,
    };
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| Failure::new(EXIT_INVALID, "io", format!("stdout: {e}")))
}

fn executor() -> Result<PoolExecutor, Failure> {
    PoolExecutor::from_env().map_err(|m| Failure::new(EXIT_INVALID, "environment", m))
}

fn load_scenario(path: &Path) -> Result<ScenarioSpec, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::io(path, e))?;
    Ok(parse_scenario(&bytes)?)
}

fn load_run(args: &RunArgs) -> Result<ScenarioSpec, Failure> {
    let mut spec = load_scenario(&args.scenario)?;
    if let Some(m) = args.mode {
        spec.planner.mode = m.into();
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    Ok(spec)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn style_of(mode: Mode) -> TrajectoryStyle {
    match mode {
        Mode::Legible => TrajectoryStyle::Legible,
        Mode::Baseline => TrajectoryStyle::Baseline,
    }
}

fn mode_label(mode: Mode) -> &'static str {
    match mode {
        Mode::Legible => "legible",
        Mode::Baseline => "baseline",
    }
}

fn plan(a: PlanArgs) -> Result<String, Failure> {
    let spec = load_run(&a.run)?;
    let exec = executor()?;
    let result = plan_once(&spec, spec.seed, &exec).map_err(|e| plan_failure(None, &e))?;
    if let Some(path) = &a.out {
        let rows = plan_rows(&spec.robot, &result.controls, spec.planner.dt, &spec.obstacles);
        write_file(path, &write_log(&rows))?;
    }
    if let Some(path) = &a.svg {
        let svg = render_svg(
            &spec,
            &[LabeledTrajectory {
                label: mode_label(spec.planner.mode),
                style: style_of(spec.planner.mode),
                trajectory: &result.trajectory,
            }],
            Some(&result.predictions),
        );
        write_file(path, &svg)?;
    }
    Ok(to_json(&BreakdownJson::from(&result.breakdown)))
}

fn log_of(run: &ClosedLoopRun) -> String {
    let rows: Vec<LogRow> = run.steps.iter().map(LogRow::from).collect();
    write_log(&rows)
}

fn simulate(a: SimulateArgs) -> Result<String, Failure> {
    let spec = load_run(&a.run)?;
    let exec = executor()?;
    let (run, failure) = match run_closed_loop(&spec, &exec) {
        Ok(run) => (run, None),
        Err(e) => {
            let f = closed_loop_failure(&e);
            (*e.partial, Some(f))
        }
    };
    // the executed prefix is written even when a later cycle failed
    write_file(&a.out, &log_of(&run))?;
    if let Some(path) = &a.svg {
        let executed = run.executed(spec.planner.dt);
        let svg = render_svg(
            &spec,
            &[LabeledTrajectory {
                label: mode_label(spec.planner.mode),
                style: style_of(spec.planner.mode),
                trajectory: &executed,
            }],
            run.plans.first().map(|p| &p.predictions),
        );
        write_file(path, &svg)?;
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(to_json(&RunSummary::new(&run, spec.planner.mode, spec.seed, spec.planner.dt))),
    }
}

fn evaluate(a: EvaluateArgs) -> Result<String, Failure> {
    let spec = load_scenario(&a.scenario)?;
    let text = std::fs::read_to_string(&a.trajectory).map_err(|e| Failure::io(&a.trajectory, e))?;
    let log_err = |e: crate::log::LogError| Failure::new(EXIT_INVALID, "trajectory", e.to_string());
    let rows = read_log(&text).map_err(log_err)?;
    let traj = rows_to_trajectory(&rows, Some(spec.planner.dt)).map_err(log_err)?;
    let mask = if a.mask_fov {
        Some(spec.designated_observer().ok_or_else(|| {
            let mut f = Failure::new(EXIT_INVALID, "validation", "--mask-fov needs an observer in the scenario");
            f.doc.path = Some("observers".into());
            f.doc.rule = Some("observer required for --mask-fov".into());
            f
        })?)
    } else {
        None
    };
    let model = PosteriorModel {
        beta: a.beta,
        prior: None,
    };
    let mode = a.mode.map_or(spec.planner.mode, Mode::from);
    let report = evaluate_trajectory(&traj, &spec, &model, &a.fractions, mode, mask)
        .map_err(|e| Failure::new(EXIT_INVALID, "validation", e.message))?;
    Ok(to_json(&LegibilityReportJson::from(&report)))
}

struct ModeRun {
    run: ClosedLoopRun,
    report: LegibilityReport,
}

fn run_mode(spec: &ScenarioSpec, mode: Mode, exec: &PoolExecutor) -> Result<ModeRun, Failure> {
    let mut s = spec.clone();
    s.planner.mode = mode;
    let run = run_closed_loop(&s, exec).map_err(|e| closed_loop_failure(&e))?;
    let executed = run.executed(s.planner.dt);
    let report = evaluate_trajectory(&executed, &s, &PosteriorModel::default(), &DEFAULT_PARTIALS, mode, None)
        .map_err(|e| Failure::new(EXIT_INVALID, "validation", e.message))?;
    Ok(ModeRun { run, report })
}

fn compare(a: CompareArgs) -> Result<String, Failure> {
    let mut spec = load_scenario(&a.scenario)?;
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    let exec = executor()?;
    let base = run_mode(&spec, Mode::Baseline, &exec)?;
    let leg = run_mode(&spec, Mode::Legible, &exec)?;
    let dt = spec.planner.dt;
    if let Some(path) = &a.svg {
        let (bt, lt) = (base.run.executed(dt), leg.run.executed(dt));
        let svg = render_svg(
            &spec,
            &[
                LabeledTrajectory {
                    label: "baseline",
                    style: TrajectoryStyle::Baseline,
                    trajectory: &bt,
                },
                LabeledTrajectory {
                    label: "legible",
                    style: TrajectoryStyle::Legible,
                    trajectory: &lt,
                },
            ],
            leg.run.plans.first().map(|p| &p.predictions),
        );
        write_file(path, &svg)?;
    }
    let report = CompareReport::new(
        spec.seed,
        &base.report,
        &leg.report,
        RunSummary::new(&base.run, Mode::Baseline, spec.seed, dt),
        RunSummary::new(&leg.run, Mode::Legible, spec.seed, dt),
    );
    Ok(to_json(&report))
}
