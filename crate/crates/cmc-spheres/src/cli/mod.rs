//! Command-line front end: seed finding, curve tracing, special-point
//! tables, volumes and profile exports, with CSV/JSON/SVG output.
//!
//! Exit codes: 0 success, 2 convergence failure, 3 invalid arguments,
//! 1 I/O failure.

mod manifest;
mod reference;
mod svg;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::continuation::{
    self, ContinuationError, Direction, GammaCurve, SpecialPoints, StepControl, StopRules,
    TracedArm,
};
use crate::family::{FamilyError, FamilyParams};
use crate::geometry::{self, GeometryError, ProfileCurve};
use crate::ivp::OdeTolerance;
use crate::shooting::{self, Frozen, NewtonSettings, ShootingError, ShootingPoint, SolvedPoint};

pub use manifest::RunManifest;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ShootingError> for CliError {
    fn from(e: ShootingError) -> Self {
        match e {
            ShootingError::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ContinuationError> for CliError {
    fn from(e: ContinuationError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "cmc-spheres",
    version,
    about = "Constructs one-parameter families of embedded CMC hypersurfaces S^k x S^l x S^1 in S^{n+1}"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the half-period boundary value problem for one point.
    Solve(SolveArgs),
    /// Trace the solution curve and detect its special points.
    Trace(TraceArgs),
    /// Reproduce the special-point table for a list of families.
    Table(TableArgs),
    /// Volume of the minimal member of a family, with Clifford comparisons.
    Volume(VolumeArgs),
    /// Export one profile curve as CSV/SVG.
    Profile(ProfileArgs),
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Hypersurface dimension n = k + l + 1
    #[arg(long)]
    n: u32,
    /// Dimension of the second sphere factor
    #[arg(long)]
    l: u32,
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams, CliError> {
        Ok(FamilyParams::from_ambient(self.n, self.l)?)
    }
}

#[derive(Args, Clone)]
struct TolArgs {
    /// Local error tolerance of the ODE integrator (relative and absolute)
    #[arg(long = "tol-ode", default_value_t = 1e-10)]
    tol_ode: f64,
    /// Residual tolerance of the Newton corrector
    #[arg(long = "tol-newton", default_value_t = 1e-10)]
    tol_newton: f64,
}

impl TolArgs {
    fn ode(&self) -> OdeTolerance {
        OdeTolerance::from_scalar(self.tol_ode)
    }

    fn newton(&self) -> NewtonSettings {
        NewtonSettings::with_tol(self.tol_newton)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Prescribed mean curvature
    #[arg(long = "H")]
    h_mean: f64,
    /// Initial guess for the seed radius a (with --t-guess)
    #[arg(long = "a-guess")]
    a_guess: Option<f64>,
    /// Initial guess for the half-period T (with --a-guess)
    #[arg(long = "t-guess")]
    t_guess: Option<f64>,
    /// Scan range "lo,hi" for the seed radius
    #[arg(long)]
    scan: Option<String>,
    /// Output JSON path
    #[arg(long, default_value = "solve.json")]
    json: String,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Trace direction: "both", "1" (increasing a) or "-1"
    #[arg(long, default_value = "both")]
    direction: String,
    /// Point budget per arm
    #[arg(long = "max-points", default_value_t = 4000)]
    max_points: usize,
    /// Initial predictor step
    #[arg(long = "step-init", default_value_t = 1e-2)]
    step_init: f64,
    /// Smallest predictor step
    #[arg(long = "step-min", default_value_t = 1e-5)]
    step_min: f64,
    /// Largest predictor step
    #[arg(long = "step-max", default_value_t = 5e-2)]
    step_max: f64,
    /// Stop the trace when H exceeds this cap
    #[arg(long = "h-cap", default_value_t = 50.0)]
    h_cap: f64,
    /// Seed scan range "lo,hi" at H = 0
    #[arg(long, default_value = "0.05,0.6")]
    scan: String,
    /// Output CSV path for the traced curve
    #[arg(long, default_value = "gamma.csv")]
    csv: String,
    /// Output JSON path (manifest + special points)
    #[arg(long, default_value = "trace.json")]
    json: String,
    /// When set, write "<prefix>_TH.svg" and "<prefix>_aH.svg"
    #[arg(long = "svg-prefix")]
    svg_prefix: Option<String>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Families to evaluate, e.g. "(3,1),(4,1),(5,2)"
    #[arg(long, default_value = "")]
    pairs: String,
    /// Optional CSV output path
    #[arg(long)]
    csv: Option<String>,
    /// Output JSON path
    #[arg(long, default_value = "table.json")]
    json: String,
    /// Point budget per arm
    #[arg(long = "max-points", default_value_t = 4000)]
    max_points: usize,
    /// Stop the trace when H exceeds this cap
    #[arg(long = "h-cap", default_value_t = 50.0)]
    h_cap: f64,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct VolumeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Dense sample count for the quadrature grid
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Seed scan range "lo,hi" at H = 0
    #[arg(long, default_value = "0.05,0.6")]
    scan: String,
    /// Output JSON path
    #[arg(long, default_value = "volume.json")]
    json: String,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Seed radius a = f2(0)
    #[arg(long)]
    a: f64,
    /// Prescribed mean curvature
    #[arg(long = "H")]
    h_mean: f64,
    /// Half-period guess
    #[arg(long)]
    t: f64,
    /// Sample count over the full period
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    /// Output CSV path
    #[arg(long, default_value = "profile.csv")]
    csv: String,
    /// Optional SVG output path
    #[arg(long)]
    svg: Option<String>,
    /// Output JSON path
    #[arg(long, default_value = "profile.json")]
    json: String,
    #[command(flatten)]
    tol: TolArgs,
}

pub fn run_from_env() -> ExitCode {
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    match Cli::try_parse() {
        Ok(cli) => match dispatch(cli.cmd, command_line) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.code())
            }
        },
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprint!("{e}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cmd: Command, command_line: String) -> Result<(), CliError> {
    match cmd {
        Command::Solve(args) => cmd_solve(args, command_line),
        Command::Trace(args) => cmd_trace(args, command_line),
        Command::Table(args) => cmd_table(args, command_line),
        Command::Volume(args) => cmd_volume(args, command_line),
        Command::Profile(args) => cmd_profile(args, command_line),
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() == 2 {
        if let (Ok(lo), Ok(hi)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((lo, hi));
        }
    }
    Err(CliError::Usage(format!(
        "expected a range of the form \"lo,hi\", got {text:?}"
    )))
}

fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>, CliError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs = Vec::new();
    let bad = || {
        CliError::Usage(format!(
            "expected pairs of the form \"(n,l),(n,l)\", got {text:?}"
        ))
    };
    let mut rest = cleaned.as_str();
    loop {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(bad)?;
        let (n_text, l_text) = inner.0.split_once(',').ok_or_else(bad)?;
        let n = n_text.parse().map_err(|_| bad())?;
        let l = l_text.parse().map_err(|_| bad())?;
        pairs.push((n, l));
        rest = inner.1;
        if rest.is_empty() {
            break;
        }
        rest = rest.strip_prefix(',').ok_or_else(bad)?;
    }
    Ok(pairs)
}

fn write_json(path: &str, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn solve_from_args(args: &SolveArgs, params: FamilyParams) -> Result<SolvedPoint, CliError> {
    let ode = args.tol.ode();
    let newton = args.tol.newton();
    match (&args.scan, args.a_guess, args.t_guess) {
        (Some(scan), None, None) => {
            let range = parse_range(scan)?;
            Ok(shooting::find_seed(
                params,
                args.h_mean,
                range,
                ode,
                &newton,
            )?)
        }
        (None, Some(a), Some(t)) => Ok(shooting::solve(
            ShootingPoint::guess(a, args.h_mean, t),
            Frozen::MeanCurvature,
            params,
            ode,
            &newton,
        )?),
        _ => Err(CliError::Usage(
            "provide either --scan lo,hi or both --a-guess and --t-guess".into(),
        )),
    }
}

fn cmd_solve(args: SolveArgs, command_line: String) -> Result<(), CliError> {
    let started = Instant::now();
    let params = args.family.params()?;
    let solved = solve_from_args(&args, params)?;
    let point = solved.point;
    let tangent = continuation::tangent(&solved.jacobian).ok();

    println!(
        "family (n, l) = ({}, {}), k = {}",
        params.n(),
        params.l(),
        params.k()
    );
    println!("a = {}", point.a);
    println!("H = {}", point.h_mean);
    println!("T = {}", point.half_period);
    println!(
        "residuals: f1(T) = {:e}, theta(T) - pi = {:e}",
        point.res_f1, point.res_theta
    );
    println!(
        "grad F1    = ({}, {}, {})",
        solved.jacobian.grad_f1[0], solved.jacobian.grad_f1[1], solved.jacobian.grad_f1[2]
    );
    println!(
        "grad Theta = ({}, {}, {})",
        solved.jacobian.grad_theta[0], solved.jacobian.grad_theta[1], solved.jacobian.grad_theta[2]
    );
    if let Some(v) = tangent {
        println!("tangent    = ({}, {}, {})", v[0], v[1], v[2]);
    }
    println!("newton iterations: {}", solved.iterations);

    let mut manifest = RunManifest::new(
        command_line,
        Some(params),
        args.tol.tol_ode,
        args.tol.tol_newton,
        json!({
            "H": args.h_mean,
            "a_guess": args.a_guess,
            "t_guess": args.t_guess,
            "scan": args.scan,
        }),
    );
    manifest.outputs = vec![args.json.clone()];
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    write_json(
        &args.json,
        &json!({
            "manifest": manifest,
            "point": point,
            "jacobian": solved.jacobian,
            "tangent": tangent,
            "iterations": solved.iterations,
        }),
    )?;
    println!("wrote {}", args.json);
    Ok(())
}

struct TraceOutcome {
    curve: GammaCurve,
    arms: Vec<(Direction, TracedArm)>,
    special: Option<SpecialPoints>,
    warnings: Vec<String>,
}

fn run_trace(
    params: FamilyParams,
    directions: &[Direction],
    scan: (f64, f64),
    step: &StepControl,
    stop: &StopRules,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<TraceOutcome, CliError> {
    let seed = shooting::find_seed(params, 0.0, scan, ode, newton)?;
    let mut arms = Vec::new();
    for &dir in directions {
        let arm = continuation::trace(&seed, params, dir, step, stop, ode, newton)?;
        arms.push((dir, arm));
    }
    let curve = match directions {
        [Direction::DecreasingA, Direction::IncreasingA] => {
            GammaCurve::from_arms(params, &arms[0].1, &arms[1].1)
        }
        [single] => GammaCurve::from_single(params, &arms[0].1, *single),
        _ => unreachable!("directions are fixed combinations"),
    };

    let mut warnings = Vec::new();
    for (dir, arm) in &arms {
        if let Some(err) = &arm.last_error {
            warnings.push(format!("{:?} arm stopped with {:?}: {err}", dir, arm.stop));
        }
    }
    let special = match continuation::detect_special(&curve, ode, newton) {
        Ok(s) => Some(s),
        Err(e) => {
            warnings.push(format!("special-point detection failed: {e}"));
            None
        }
    };
    Ok(TraceOutcome {
        curve,
        arms,
        special,
        warnings,
    })
}

fn write_gamma_csv(path: &str, curve: &GammaCurve) -> Result<(), CliError> {
    let mut text = String::from("idx,a,H,T,tan_a,tan_H,tan_T,res_f1,res_theta\n");
    for (idx, cp) in curve.points.iter().enumerate() {
        let p = cp.point;
        text.push_str(&format!(
            "{idx},{},{},{},{},{},{},{},{}\n",
            p.a,
            p.h_mean,
            p.half_period,
            cp.tangent[0],
            cp.tangent[1],
            cp.tangent[2],
            p.res_f1,
            p.res_theta
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

fn cmd_trace(args: TraceArgs, command_line: String) -> Result<(), CliError> {
    let started = Instant::now();
    let params = args.family.params()?;
    let directions: &[Direction] = match args.direction.as_str() {
        "both" => &[Direction::DecreasingA, Direction::IncreasingA],
        "1" | "+1" => &[Direction::IncreasingA],
        "-1" => &[Direction::DecreasingA],
        other => {
            return Err(CliError::Usage(format!(
                "--direction must be \"both\", \"1\" or \"-1\", got {other:?}"
            )))
        }
    };
    let step = StepControl {
        h_init: args.step_init,
        h_min: args.step_min,
        h_max: args.step_max,
        ..StepControl::default()
    };
    let stop = StopRules {
        h_cap: args.h_cap,
        max_points: args.max_points,
        ..StopRules::default()
    };
    let scan = parse_range(&args.scan)?;
    let outcome = run_trace(
        params,
        directions,
        scan,
        &step,
        &stop,
        args.tol.ode(),
        &args.tol.newton(),
    )?;

    write_gamma_csv(&args.csv, &outcome.curve)?;
    let mut outputs = vec![args.csv.clone(), args.json.clone()];

    if let Some(prefix) = &args.svg_prefix {
        let th: Vec<[f64; 2]> = outcome
            .curve
            .points
            .iter()
            .map(|cp| [cp.point.half_period, cp.point.h_mean])
            .collect();
        let ah: Vec<[f64; 2]> = outcome
            .curve
            .points
            .iter()
            .map(|cp| [cp.point.a, cp.point.h_mean])
            .collect();
        let th_path = format!("{prefix}_TH.svg");
        let ah_path = format!("{prefix}_aH.svg");
        fs::write(&th_path, svg::projection_plot(&th, "T", "H"))?;
        fs::write(&ah_path, svg::projection_plot(&ah, "a", "H"))?;
        outputs.push(th_path);
        outputs.push(ah_path);
    }

    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    println!("traced {} points", outcome.curve.points.len());
    for (dir, arm) in &outcome.arms {
        println!(
            "  {:?}: {} points, stop = {:?}",
            dir,
            arm.points.len(),
            arm.stop
        );
    }
    if let Some(s) = &outcome.special {
        println!("a_Hmin = {}", s.a_hmin);
        println!("a_H0   = {}", s.a_h0);
        println!("H_min  = {}", s.h_min);
        println!("a*     in ({}, {})", s.a_star_bracket.0, s.a_star_bracket.1);
        println!(
            "small-a trend: a = {}, H = {}, T = {}",
            s.small_a_trend.a, s.small_a_trend.h_mean, s.small_a_trend.half_period
        );
    }

    let mut manifest = RunManifest::new(
        command_line,
        Some(params),
        args.tol.tol_ode,
        args.tol.tol_newton,
        json!({
            "scan": args.scan,
            "direction": args.direction,
            "max_points": args.max_points,
            "step": { "init": args.step_init, "min": args.step_min, "max": args.step_max },
            "h_cap": args.h_cap,
        }),
    );
    manifest.outputs = outputs;
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    let arms_json: serde_json::Value = outcome
        .arms
        .iter()
        .map(|(dir, arm)| {
            json!({
                "direction": format!("{dir:?}"),
                "points": arm.points.len(),
                "stop": arm.stop,
                "last_error": arm.last_error,
            })
        })
        .collect();
    write_json(
        &args.json,
        &json!({
            "manifest": manifest,
            "n_points": outcome.curve.points.len(),
            "arms": arms_json,
            "special": outcome.special,
            "warnings": outcome.warnings,
        }),
    )?;
    println!("wrote {}", args.csv);
    println!("wrote {}", args.json);
    Ok(())
}

fn brackets_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

fn cmd_table(args: TableArgs, command_line: String) -> Result<(), CliError> {
    let started = Instant::now();
    let pairs = parse_pairs(&args.pairs)?;
    let step = StepControl::default();
    let stop = StopRules {
        h_cap: args.h_cap,
        max_points: args.max_points,
        ..StopRules::default()
    };
    let ode = args.tol.ode();
    let newton = args.tol.newton();

    let mut md = String::new();
    md.push_str("| (n,l) | a_Hmin | a_H0 | a* bracket | H_min | flags |\n");
    md.push_str("|---|---|---|---|---|---|\n");
    let mut csv = String::from("n,l,a_Hmin,a_H0,a_star_lo,a_star_hi,H_min,flags\n");
    let mut rows_json = Vec::new();

    for &(n, l) in &pairs {
        let row = FamilyParams::from_ambient(n, l)
            .map_err(CliError::from)
            .and_then(|params| {
                run_trace(
                    params,
                    &[Direction::DecreasingA, Direction::IncreasingA],
                    (0.05, 0.6),
                    &step,
                    &stop,
                    ode,
                    &newton,
                )
            })
            .and_then(|outcome| {
                outcome.special.ok_or_else(|| {
                    CliError::Numeric(format!(
                        "special points not detected: {}",
                        outcome.warnings.join("; ")
                    ))
                })
            });
        match row {
            Ok(s) => {
                let mut flags = Vec::new();
                if let Some(r) = reference::lookup(n, l) {
                    let mut check = |name: &str, got: f64, expect: f64| {
                        if (got - expect).abs() > 2e-3 {
                            flags.push(format!(
                                "{name} off reference by {:.1e}",
                                (got - expect).abs()
                            ));
                        }
                    };
                    check("a_Hmin", s.a_hmin, r.a_hmin);
                    check("a_H0", s.a_h0, r.a_h0);
                    check("H_min", s.h_min, r.h_min);
                    if !brackets_overlap(s.a_star_bracket, r.a_star_bracket) {
                        flags.push(format!(
                            "a* bracket disjoint from reference ({}, {})",
                            r.a_star_bracket.0, r.a_star_bracket.1
                        ));
                    }
                } else {
                    flags.push("no reference row".into());
                }
                let flags_text = if flags.is_empty() {
                    "ok".to_string()
                } else {
                    flags.join("; ")
                };
                md.push_str(&format!(
                    "| ({n},{l}) | {:.7} | {:.7} | ({:.7}, {:.7}) | {:.7} | {} |\n",
                    s.a_hmin, s.a_h0, s.a_star_bracket.0, s.a_star_bracket.1, s.h_min, flags_text
                ));
                csv.push_str(&format!(
                    "{n},{l},{},{},{},{},{},{}\n",
                    s.a_hmin,
                    s.a_h0,
                    s.a_star_bracket.0,
                    s.a_star_bracket.1,
                    s.h_min,
                    flags_text.replace(',', ";")
                ));
                rows_json.push(json!({
                    "n": n, "l": l, "special": s, "flags": flags,
                }));
            }
            Err(e) => {
                md.push_str(&format!("| ({n},{l}) | — | — | — | — | error: {e} |\n"));
                csv.push_str(&format!("{n},{l},,,,,,error: {e}\n"));
                rows_json.push(json!({ "n": n, "l": l, "error": e.to_string() }));
                eprintln!("warning: ({n},{l}) failed: {e}");
            }
        }
    }

    print!("{md}");
    let mut outputs = vec![args.json.clone()];
    if let Some(path) = &args.csv {
        fs::write(path, &csv)?;
        outputs.insert(0, path.clone());
        println!("wrote {path}");
    }
    let mut manifest = RunManifest::new(
        command_line,
        None,
        args.tol.tol_ode,
        args.tol.tol_newton,
        json!({ "pairs": args.pairs, "max_points": args.max_points, "h_cap": args.h_cap }),
    );
    manifest.outputs = outputs;
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    write_json(
        &args.json,
        &json!({ "manifest": manifest, "rows": rows_json }),
    )?;
    println!("wrote {}", args.json);
    Ok(())
}

fn cmd_volume(args: VolumeArgs, command_line: String) -> Result<(), CliError> {
    let started = Instant::now();
    let params = args.family.params()?;
    let (n, l, k) = (params.n(), params.l(), params.k());
    if l > k {
        return Err(CliError::Usage(format!(
            "no ({n},{l}) minimal example is tabulated: the family with l > k duplicates \
             the ({n},{k}) family with the sphere factors swapped; use --l {k}"
        )));
    }
    let ode = args.tol.ode();
    let newton = args.tol.newton();
    let scan = parse_range(&args.scan)?;
    let seed = shooting::find_seed(params, 0.0, scan, ode, &newton)?;
    let curve = geometry::reconstruct(&seed.point, params, args.samples, ode)?;
    let check = geometry::check_embedded(&curve);
    let report = geometry::volume(&curve);
    let verdict = geometry::yau_check(params, &report);

    println!("family (n, l) = ({n}, {l}), k = {k}");
    println!(
        "minimal member: a = {}, T = {}",
        seed.point.a, seed.point.half_period
    );
    println!("embedded: {}", check.embedded);
    println!("Vol({n},{l}) = {}", report.vol);
    println!(
        "quadrature error estimate: {:e}",
        report.quadrature_error_estimate
    );
    for (lp, v) in &report.clifford {
        println!("VolC({n},{lp}) = {v}");
    }
    println!("sigma_{n} = {}", verdict.sigma_n);
    println!(
        "volume comparison: exceeds all Clifford volumes = {}, exceeds sigma_n = {}",
        verdict.exceeds_all_clifford, verdict.exceeds_geodesic_floor
    );

    let mut manifest = RunManifest::new(
        command_line,
        Some(params),
        args.tol.tol_ode,
        args.tol.tol_newton,
        json!({ "scan": args.scan, "samples": args.samples }),
    );
    manifest.outputs = vec![args.json.clone()];
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    write_json(
        &args.json,
        &json!({
            "manifest": manifest,
            "point": seed.point,
            "embedded": check,
            "volume": report,
            "yau": verdict,
        }),
    )?;
    println!("wrote {}", args.json);
    Ok(())
}

fn write_profile_csv(path: &str, curve: &ProfileCurve) -> Result<(), CliError> {
    let mut text = String::from("t,f1,f2,theta,f,g,h\n");
    for s in &curve.samples {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.t, s.f1, s.f2, s.theta, s.f, s.g, s.h
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

fn cmd_profile(args: ProfileArgs, command_line: String) -> Result<(), CliError> {
    let started = Instant::now();
    let params = args.family.params()?;
    let solved = shooting::solve(
        ShootingPoint::guess(args.a, args.h_mean, args.t),
        Frozen::MeanCurvature,
        params,
        args.tol.ode(),
        &args.tol.newton(),
    )?;
    let curve = geometry::reconstruct(&solved.point, params, args.samples, args.tol.ode())?;
    let check = geometry::check_embedded(&curve);

    write_profile_csv(&args.csv, &curve)?;
    let mut outputs = vec![args.csv.clone(), args.json.clone()];
    if let Some(path) = &args.svg {
        let pts: Vec<[f64; 2]> = curve.samples.iter().map(|s| [s.f1, s.f2]).collect();
        fs::write(path, svg::profile_plot(&pts))?;
        outputs.push(path.clone());
        println!("wrote {path}");
    }

    println!(
        "profile: a = {}, H = {}, T = {} ({} samples over [0, 2T])",
        solved.point.a,
        solved.point.h_mean,
        solved.point.half_period,
        curve.samples.len()
    );
    println!("embedded: {}", check.embedded);
    println!("reflection deviation: {:e}", curve.reflection_deviation);

    let mut manifest = RunManifest::new(
        command_line,
        Some(params),
        args.tol.tol_ode,
        args.tol.tol_newton,
        json!({ "a": args.a, "H": args.h_mean, "t": args.t, "samples": args.samples }),
    );
    manifest.outputs = outputs;
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    write_json(
        &args.json,
        &json!({
            "manifest": manifest,
            "point": solved.point,
            "n_samples": curve.samples.len(),
            "embedded": check,
            "reflection_deviation": curve.reflection_deviation,
        }),
    )?;
    println!("wrote {}", args.csv);
    println!("wrote {}", args.json);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        assert_eq!(parse_range("0.05,0.5").unwrap(), (0.05, 0.5));
        assert_eq!(parse_range(" 0.1 , 0.2 ").unwrap(), (0.1, 0.2));
        assert!(parse_range("0.05").is_err());
        assert!(parse_range("a,b").is_err());
    }

    #[test]
    fn parses_pairs() {
        assert_eq!(parse_pairs("").unwrap(), vec![]);
        assert_eq!(parse_pairs("(3,1)").unwrap(), vec![(3, 1)]);
        assert_eq!(
            parse_pairs("(3,1),(4,1), (5, 2)").unwrap(),
            vec![(3, 1), (4, 1), (5, 2)]
        );
        assert!(parse_pairs("(3,1").is_err());
        assert!(parse_pairs("3,1").is_err());
    }

    #[test]
    fn bracket_overlap_logic() {
        assert!(brackets_overlap((0.0, 1.0), (0.5, 2.0)));
        assert!(brackets_overlap((0.5, 2.0), (0.0, 1.0)));
        assert!(!brackets_overlap((0.0, 0.4), (0.5, 0.6)));
    }
}
