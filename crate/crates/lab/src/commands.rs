//! Subcommands. Each returns an [`Output`]; none of them prints.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use slag_core::cm::{self, AngleVector};
use slag_core::floer::{self, ValidationWarning};
use slag_core::graphs::{check_ak_log_derivative_bound, solve_ak};
use slag_core::jlt::{self, JltExpander, JltParams};
use slag_core::lawlor::{self, LawlorAngles, LawlorNeck, LawlorParams};
use slag_core::neck::{NeckPoint, NewtonReport};
use slag_core::plumbing::{self, PlumbingChart};
use slag_core::Error;

use crate::error::CliError;
use crate::floer_io::ComplexDoc;
use crate::report::{envelope, fmt, Format, Output, Table};
use crate::verify::{self, Context, Fault, RadialEquation};

pub const DEFAULT_SEED: u64 = 20_240_611;

const LONG_ABOUT: &str = "Numerical laboratory for special Lagrangian necks and Lagrangian mean \
curvature flow expanders in C^m.\n\nAll angles are in radians. The invariant A is the difference of \
the Liouville potential between the two ends, in units of area. Exit status: 0 when every check \
passes, 1 when a check fails, 2 on usage or domain errors.";

#[derive(Debug, Parser)]
#[command(name = "slag", version = crate::report::VERSION, about = "Special Lagrangian and expander laboratory", long_about = LONG_ABOUT)]
pub struct Cli {
    /// Output format; CSV is available for tabular commands only.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// RNG seed for sampled checks.
    #[arg(long, global = true, env = "SLAG_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angles, invariant and special Lagrangian residuals of a Lawlor neck.
    Lawlor(LawlorArgs),
    /// Angles, invariant and expander residuals of a Joyce-Lee-Tsui expander.
    Expander(ExpanderArgs),
    /// Recover a_1..a_m from target angles (and A for Lawlor necks).
    Invert(InvertArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
    /// Tabulate the radial functions A_k of the asymptotic expander modes.
    Expansion(ExpansionArgs),
    /// Chart, Liouville form and decay checks in the plumbing.
    Plumbing(PlumbingArgs),
    /// Cohomology of a Floer complex read from a JSON file.
    Floer(FloerArgs),
}

#[derive(Debug, Args)]
pub struct LawlorArgs {
    /// Comma-separated positive parameters a_1,...,a_m (m >= 3).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Bound on the special Lagrangian residuals.
    #[arg(long, default_value_t = verify::SL_RESIDUAL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExpanderArgs {
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub a: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Bound on the expander residual and on the invariant discrepancy.
    #[arg(long, default_value_t = verify::EXPANDER_RESIDUAL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InvertMode {
    Lawlor,
    Jlt,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long, value_enum)]
    pub mode: InvertMode,
    /// Target angles phi_1,...,phi_m in radians.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub phi: Vec<f64>,
    /// Target invariant (Lawlor mode).
    #[arg(long = "A", allow_hyphen_values = true)]
    pub area: Option<f64>,
    /// Expander parameter (jlt mode).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Bound on the forward-map residual at the recovered parameters.
    #[arg(long, default_value_t = verify::INVERSION_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these checks (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationArg {
    /// The radial equation of the linearised expander operator.
    Linearized,
    /// The equation with drift m+6 and constant 3(m+1).
    Printed,
}

#[derive(Debug, Args)]
pub struct ExpansionArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Degrees k (comma-separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![0u32, 1, 2, 3, 4, 5])]
    pub k: Vec<u32>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Right end of the t = r^-2 interval.
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Number of table rows per mode.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "linearized")]
    pub equation: EquationArg,
}

#[derive(Debug, Args)]
pub struct PlumbingArgs {
    /// Lawlor parameters of the neck used for the decay check.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![1.0, 1.0, 1.0])]
    pub a: Vec<f64>,
    /// Cutoff T of the transition function eta.
    #[arg(long, default_value_t = plumbing::DEFAULT_CUTOFF)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Chart radii for the decay table.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.1, 0.05])]
    pub r_tilde: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct FloerArgs {
    /// Complex document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Flag generators outside the special Lagrangian degree windows for this m.
    #[arg(long)]
    pub sl_pair: Option<usize>,
    /// Fail unless the cohomology is that of S^m.
    #[arg(long)]
    pub expect_sphere: Option<usize>,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{name} must be positive (got {v})"
        )))
    }
}

fn tolerances(pairs: &[(&'static str, f64)]) -> BTreeMap<&'static str, f64> {
    pairs.iter().copied().collect()
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fault = Fault::from_env()?;
    let ctx = Context {
        seed: cli.seed,
        fault,
    };
    match &cli.command {
        Command::Lawlor(a) => cmd_lawlor(a, &ctx),
        Command::Expander(a) => cmd_expander(a, &ctx),
        Command::Invert(a) => cmd_invert(a, &ctx),
        Command::Verify(a) => cmd_verify(a, &ctx),
        Command::Expansion(a) => cmd_expansion(a, &ctx),
        Command::Plumbing(a) => cmd_plumbing(a, &ctx),
        Command::Floer(a) => cmd_floer(a, &ctx),
    }
}

fn sample_points(seed: u64, m: usize, n: usize, scale: f64) -> Result<Vec<NeckPoint>, CliError> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let y = rng.gen_range(-1.0f64..1.0).sinh() * scale;
            let x: Vec<f64> = loop {
                let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
                if n > 1e-3 {
                    break v.iter().map(|t| t / n).collect();
                }
            };
            Ok(NeckPoint::new(y, x)?)
        })
        .collect()
}

pub fn cmd_lawlor(args: &LawlorArgs, ctx: &Context) -> Result<Output, CliError> {
    positive("tol", args.tol)?;
    let params = LawlorParams::new(args.a.clone())?;
    let neck = LawlorNeck::new(params)?;
    let angles = neck.angles()?;
    let pts = sample_points(ctx.seed, args.a.len(), args.samples, 20.0)?;
    let rows = pts
        .par_iter()
        .map(|pt| {
            let s = lawlor::lawlor_point(&neck, pt)?;
            Ok((
                pt.y,
                s.frame.lagrangian_residual(),
                cm::holomorphic_volume(&s.frame)?.im.abs(),
            ))
        })
        .collect::<Result<Vec<(f64, f64, f64)>, Error>>()?;
    let omega_max = rows.iter().fold(0.0f64, |a, r| a.max(r.1));
    let im_max = rows.iter().fold(0.0f64, |a, r| a.max(r.2));
    let limits = [neck.potential(-1e12)?, neck.potential(1e12)?];
    let passed = omega_max < args.tol && im_max < args.tol;
    let mut table = Table::new(&["y", "omega", "im_omega"]);
    for r in &rows {
        table.push(vec![fmt(r.0), fmt(r.1), fmt(r.2)]);
    }
    let body = json!({
        "a": args.a,
        "phi": angles.phis.phis(),
        "sumPhi": angles.phis.sum(),
        "A": angles.area,
        "samples": args.samples,
        "residuals": { "omegaMax": omega_max, "imOmegaMax": im_max },
        "potentialLimits": limits,
    });
    Ok(Output {
        report: envelope(
            "lawlor",
            ctx.seed,
            &tolerances(&[("residual", args.tol)]),
            passed,
            body,
        ),
        table: Some(table),
        passed,
    })
}

pub fn cmd_expander(args: &ExpanderArgs, ctx: &Context) -> Result<Output, CliError> {
    positive("tol", args.tol)?;
    let params = JltParams::new(args.a.clone(), args.alpha)?;
    let exp = JltExpander::new(params)?;
    let angles = exp.angles()?;
    let inv = jlt::jlt_invariant_a(&exp)?;
    let shift = match ctx.fault {
        Some(Fault::ExpanderPhase) => verify::FAULT_PHASE_SHIFT,
        None => 0.0,
    };
    let pts = sample_points(ctx.seed, args.a.len(), args.samples, 6.0)?;
    let rows = pts
        .par_iter()
        .map(|pt| {
            let s = exp.family().sample(pt.y, &pt.x)?;
            let r = jlt::expander_residual_at(
                args.alpha,
                exp.theta_prime(pt.y) + shift,
                s.point.coords(),
                &s.tangent_y,
            )?;
            Ok((pt.y, r))
        })
        .collect::<Result<Vec<(f64, f64)>, Error>>()?;
    let residual_max = rows.iter().fold(0.0f64, |a, r| a.max(r.1));
    let (lo, hi) = exp.theta_limits()?;
    let passed = residual_max < args.tol && inv.discrepancy() < args.tol;
    let mut table = Table::new(&["y", "expander_residual"]);
    for r in &rows {
        table.push(vec![fmt(r.0), fmt(r.1)]);
    }
    let body = json!({
        "a": args.a,
        "alpha": args.alpha,
        "phi": angles.phis.phis(),
        "sumPhi": angles.phis.sum(),
        "A_closedForm": inv.closed_form,
        "A_potentialLimit": inv.potential_limit,
        "A_liouvilleIntegral": exp.family().liouville_total(),
        "expanderResidualMax": residual_max,
        "thetaLimits": [lo, hi],
        "samples": args.samples,
        "faultInjected": ctx.fault.is_some(),
    });
    Ok(Output {
        report: envelope(
            "expander",
            ctx.seed,
            &tolerances(&[("residual", args.tol), ("invariant", args.tol)]),
            passed,
            body,
        ),
        table: Some(table),
        passed,
    })
}

/// Projects angles whose sum is within `1e-3` of `pi` onto `sum = pi`, so that
/// rounded input such as `1.0472,1.0472,1.0472` is accepted.
const PROJECTION_WINDOW: f64 = 1e-3;

pub fn cmd_invert(args: &InvertArgs, ctx: &Context) -> Result<Output, CliError> {
    positive("tol", args.tol)?;
    let mut body = serde_json::Map::new();
    body.insert(
        "mode".into(),
        json!(format!("{:?}", args.mode).to_lowercase()),
    );
    body.insert("targetPhi".into(), json!(args.phi));
    let solved: Result<(Vec<f64>, f64, NewtonReport), Error> = match args.mode {
        InvertMode::Lawlor => {
            let area = args
                .area
                .ok_or_else(|| CliError::Usage("--A is required in lawlor mode".into()))?;
            let excess = args.phi.iter().sum::<f64>() - PI;
            if excess.abs() > PROJECTION_WINDOW {
                return Err(CliError::Domain(Error::Precondition(format!(
                    "Lawlor angles must sum to pi (sum = {})",
                    PI + excess
                ))));
            }
            let m = args.phi.len() as f64;
            let phis: Vec<f64> = args.phi.iter().map(|p| p - excess / m).collect();
            body.insert("projectedPhi".into(), json!(phis));
            body.insert("A".into(), json!(area));
            let target = LawlorAngles {
                phis: AngleVector::new(phis.clone())?,
                area,
            };
            lawlor::lawlor_invert(&target).and_then(|(p, report)| {
                let got = lawlor::lawlor_angles(&p)?;
                let mut r = got
                    .phis
                    .phis()
                    .iter()
                    .zip(&phis)
                    .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
                r = r.max((got.area - area).abs() / area);
                Ok((p.a().to_vec(), r, report))
            })
        }
        InvertMode::Jlt => {
            let alpha = args
                .alpha
                .ok_or_else(|| CliError::Usage("--alpha is required in jlt mode".into()))?;
            body.insert("alpha".into(), json!(alpha));
            let target = AngleVector::new(args.phi.clone())?;
            if !(target.sum() < PI) {
                return Err(CliError::Domain(Error::Precondition(format!(
                    "expander angles must satisfy 0 < sum < pi (sum = {})",
                    target.sum()
                ))));
            }
            jlt::jlt_invert(alpha, &target).and_then(|(p, report)| {
                let got = jlt::jlt_angles(&p)?;
                let r = got
                    .phis
                    .phis()
                    .iter()
                    .zip(&args.phi)
                    .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
                Ok((p.a().to_vec(), r, report))
            })
        }
    };
    let passed = match solved {
        Ok((a, residual, report)) => {
            body.insert("converged".into(), json!(true));
            body.insert("a".into(), json!(a));
            body.insert("forwardResidual".into(), json!(residual));
            body.insert("iterations".into(), json!(report.iterations));
            body.insert("restarts".into(), json!(report.restarts));
            body.insert("trace".into(), json!(report.trace));
            residual < args.tol
        }
        Err(Error::NewtonFailed {
            iterations,
            residual,
        }) => {
            body.insert("converged".into(), json!(false));
            body.insert("iterations".into(), json!(iterations));
            body.insert("bestResidual".into(), json!(residual));
            false
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output {
        report: envelope(
            "invert",
            ctx.seed,
            &tolerances(&[("forwardResidual", args.tol)]),
            passed,
            Value::Object(body),
        ),
        table: None,
        passed,
    })
}

pub fn cmd_verify(args: &VerifyArgs, ctx: &Context) -> Result<Output, CliError> {
    let results = verify::run_battery(ctx, &args.only)?;
    let passed = results.iter().all(|r| r.passed);
    let mut table = Table::new(&["check", "passed", "measured", "tolerance", "detail"]);
    for r in &results {
        table.push(vec![
            r.name.clone(),
            r.passed.to_string(),
            fmt(r.measured),
            fmt(r.tolerance),
            r.detail.clone(),
        ]);
    }
    let tols: Vec<(&'static str, f64)> = vec![
        ("angleSum", verify::ANGLE_SUM_TOL),
        ("slResidual", verify::SL_RESIDUAL_TOL),
        ("lawlorInvariant", verify::LAWLOR_INVARIANT_TOL),
        ("expanderInvariant", verify::JLT_INVARIANT_TOL),
        ("expanderResidual", verify::EXPANDER_RESIDUAL_TOL),
        ("inversion", verify::INVERSION_TOL),
        ("overlap", verify::OVERLAP_TOL),
        ("c1", verify::C1_TOL),
        ("modeResidual", verify::MODE_RESIDUAL_TOL),
        ("transform", verify::TRANSFORM_TOL),
        ("chart", verify::CHART_TOL),
        ("dLambda", verify::D_LAMBDA_TOL),
        ("limit", verify::LIMIT_TOL),
    ];
    let body = json!({
        "checks": results,
        "faultInjected": ctx.fault.is_some(),
    });
    Ok(Output {
        report: envelope("verify", ctx.seed, &tolerances(&tols), passed, body),
        table: Some(table),
        passed,
    })
}

pub fn cmd_expansion(args: &ExpansionArgs, ctx: &Context) -> Result<Output, CliError> {
    positive("alpha", args.alpha)?;
    positive("t-end", args.t_end)?;
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let eq = match args.equation {
        EquationArg::Linearized => RadialEquation::Linearized,
        EquationArg::Printed => RadialEquation::Printed,
    };
    let grid: Vec<f64> = (0..args.points)
        .map(|i| args.t_end * i as f64 / (args.points - 1) as f64)
        .collect();
    let mut table = Table::new(&["k", "t", "A", "dA"]);
    let mut modes = Vec::new();
    let mut passed = true;
    for &k in &args.k {
        let ode = eq.ode(args.m, k, args.alpha)?;
        let sol = solve_ak(ode, args.t_end)?;
        let mut rows = Vec::new();
        for &t in &grid {
            let (a, da) = sol.eval(t)?;
            table.push(vec![k.to_string(), fmt(t), fmt(a), fmt(da)]);
            rows.push([t, a, da]);
        }
        let bound = if ode.is_growing() {
            Some(check_ak_log_derivative_bound(&sol, &grid)?)
        } else {
            None
        };
        passed &= sol.overlap_error < verify::OVERLAP_TOL && bound != Some(false);
        modes.push(json!({
            "k": k,
            "c1": ode.c1(),
            "t0": sol.t0,
            "overlapError": sol.overlap_error,
            "growing": ode.is_growing(),
            "logDerivativeBound": bound,
            "table": rows,
        }));
    }
    let body = json!({
        "m": args.m,
        "alpha": args.alpha,
        "equation": format!("{:?}", args.equation).to_lowercase(),
        "drift": eq.ode(args.m, 0, args.alpha)?.drift,
        "constant": eq.ode(args.m, 0, args.alpha)?.constant,
        "radialPower": eq.ode(args.m, 0, args.alpha)?.radial_power,
        "modes": modes,
    });
    Ok(Output {
        report: envelope(
            "expansion",
            ctx.seed,
            &tolerances(&[
                ("overlap", verify::OVERLAP_TOL),
                ("boundSlack", slag_core::graphs::modes::BOUND_SLACK),
            ]),
            passed,
            body,
        ),
        table: Some(table),
        passed,
    })
}

pub fn cmd_plumbing(args: &PlumbingArgs, ctx: &Context) -> Result<Output, CliError> {
    positive("cutoff", args.cutoff)?;
    let neck = LawlorNeck::new(LawlorParams::new(args.a.clone())?)?;
    let phis = neck.angles()?.phis;
    let m = phis.dim();
    let chart = PlumbingChart::new(phis.clone(), args.cutoff)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let chart_err = verify::chart_round_trip_error(&mut rng, m, 0.5, 1e6, args.samples.max(2))?;
    let (d_err, regions) = verify::d_lambda_error(&mut rng, &chart, args.samples)?;
    let dir = vec![1.0 / (m as f64).sqrt(); m];
    let decay = plumbing::lawlor_graph_decay(&neck, &dir, &args.r_tilde)?;
    let monotone = plumbing::decays_monotonically(&decay);
    let passed = chart_err < verify::CHART_TOL && d_err < verify::D_LAMBDA_TOL && monotone;
    let mut table = Table::new(&["r_tilde", "value", "slope"]);
    for s in &decay {
        table.push(vec![fmt(s.r_tilde), fmt(s.value), fmt(s.slope)]);
    }
    let body = json!({
        "a": args.a,
        "phi": phis.phis(),
        "cutoff": args.cutoff,
        "chartRoundTripMax": chart_err,
        "dLambdaMax": d_err,
        "regionCounts": regions,
        "decay": decay.iter().map(|s| json!({"rTilde": s.r_tilde, "value": s.value, "slope": s.slope})).collect::<Vec<_>>(),
        "decayMonotone": monotone,
    });
    Ok(Output {
        report: envelope(
            "plumbing",
            ctx.seed,
            &tolerances(&[
                ("chart", verify::CHART_TOL),
                ("dLambda", verify::D_LAMBDA_TOL),
            ]),
            passed,
            body,
        ),
        table: Some(table),
        passed,
    })
}

fn warning_json(w: &ValidationWarning) -> Value {
    match w {
        ValidationWarning::NonPositiveArea { from, to, area } => {
            json!({"kind": "nonPositiveArea", "from": from, "to": to, "area": area})
        }
        ValidationWarning::DegreeOutsideWindow { id, degree } => {
            json!({"kind": "degreeOutsideWindow", "id": id, "degree": degree})
        }
        ValidationWarning::CompactificationDegree { id, degree } => {
            json!({"kind": "compactificationDegree", "id": id, "degree": degree})
        }
    }
}

fn dims_json(dims: &BTreeMap<i64, usize>) -> Value {
    Value::Object(
        dims.iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect(),
    )
}

pub fn cmd_floer(args: &FloerArgs, ctx: &Context) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(&args.input)?;
    let doc = ComplexDoc::parse(&text)?;
    let tols = tolerances(&[]);
    let cx = match doc.build() {
        Ok(cx) => cx,
        Err(CliError::Domain(e @ (Error::NotACochainComplex | Error::DegreeMismatch { .. }))) => {
            let body = json!({"valid": false, "error": e.to_string()});
            return Ok(Output {
                report: envelope("floer", ctx.seed, &tols, false, body),
                table: None,
                passed: false,
            });
        }
        Err(e) => return Err(e),
    };
    let dims = floer::cohomology_dims(&cx);
    let mut warnings: Vec<Value> = floer::area_warnings(&cx).iter().map(warning_json).collect();
    if let Some(m) = args.sl_pair {
        warnings.extend(floer::sl_pair_warnings(&cx, m).iter().map(warning_json));
    }
    let mut body = serde_json::Map::new();
    body.insert("valid".into(), json!(true));
    body.insert("generators".into(), json!(cx.len()));
    body.insert("differentialEntries".into(), json!(cx.differential().len()));
    body.insert("cohomology".into(), dims_json(&dims));
    body.insert(
        "eulerCharacteristic".into(),
        json!(floer::euler_characteristic(&cx)),
    );
    body.insert(
        "degreeZeroIdentity".into(),
        json!(floer::verify_degree_zero_identity(&cx)),
    );
    body.insert("warnings".into(), json!(warnings));
    let mut passed = true;
    if let Some(m) = args.expect_sphere {
        let want = floer::expected_sphere_cohomology(m)?;
        body.insert("expectedSphere".into(), dims_json(&want));
        body.insert("matchesSphere".into(), json!(want == dims));
        passed = want == dims;
    }
    Ok(Output {
        report: envelope("floer", ctx.seed, &tols, passed, Value::Object(body)),
        table: None,
        passed,
    })
}
