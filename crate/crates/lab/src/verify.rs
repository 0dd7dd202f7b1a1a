//! The verification battery: one named check per property of the library, each
//! driven by a seeded RNG so a run is reproducible.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use slag_core::cm::{
    self, characteristic_angles, degree_window_check, grading_window_holds, maslov_degree,
    AngleVector, GradedPointPair, LagrangianPlane,
};
use slag_core::floer::{self, Generator, SpherePairOrder};
use slag_core::graphs::{
    harmonic_basis, inversion_transform, linearized_expander_residual, solve_ak, Expansion,
    ExpansionMode, InversionDirection, ModeOde, Polynomial, ScalarField,
};
use slag_core::jlt::{self, JltExpander, JltParams};
use slag_core::lawlor::{self, LawlorNeck, LawlorParams};
use slag_core::linalg::{self, CMatrix};
use slag_core::neck::NeckPoint;
use slag_core::plumbing::{self, DarbouxCoords, EtaRegion, PlumbingChart};
use slag_core::{Error, Result};

use crate::error::CliError;

/// Environment variable selecting an injected fault.
pub const FAULT_ENV: &str = "SLAG_FAULT";
/// Shift added to the expander phase derivative by [`Fault::ExpanderPhase`].
pub const FAULT_PHASE_SHIFT: f64 = 1e-3;

pub const ANGLE_SUM_TOL: f64 = 1e-8;
pub const SL_RESIDUAL_TOL: f64 = 1e-8;
pub const LAWLOR_INVARIANT_TOL: f64 = 1e-8;
pub const JLT_INVARIANT_TOL: f64 = 1e-7;
pub const EXPANDER_RESIDUAL_TOL: f64 = 1e-7;
pub const INVERSION_TOL: f64 = 1e-6;
pub const INVERSION_FIRST_TRY_RATE: f64 = 0.95;
pub const OVERLAP_TOL: f64 = 1e-8;
pub const C1_TOL: f64 = 1e-12;
pub const MODE_RESIDUAL_TOL: f64 = 1e-6;
pub const TRANSFORM_TOL: f64 = 1e-6;
pub const CHART_TOL: f64 = 1e-12;
pub const D_LAMBDA_TOL: f64 = 1e-6;
pub const LIMIT_TOL: f64 = 1e-2;

/// A deliberate perturbation used to confirm that checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    ExpanderPhase,
}

impl Fault {
    pub fn parse(s: &str) -> std::result::Result<Option<Self>, CliError> {
        match s {
            "" | "none" => Ok(None),
            "expander-phase" => Ok(Some(Fault::ExpanderPhase)),
            other => Err(CliError::Usage(format!(
                "unknown fault {other:?} (known: expander-phase)"
            ))),
        }
    }

    pub fn from_env() -> std::result::Result<Option<Self>, CliError> {
        match std::env::var(FAULT_ENV) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Self { seed, fault: None }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(
            self.seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(salt),
        )
    }
}

/// Outcome of one check. `measured` is the quantity compared against
/// `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            measured,
            tolerance,
            detail,
        }
    }

    fn errored(name: &str, err: Error) -> Self {
        Self::new(name, false, f64::NAN, f64::NAN, format!("error: {err}"))
    }
}

type CheckFn = fn(&Context) -> Result<CheckResult>;

/// Every check of the battery, in run order.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("angles", check_angles),
    ("lawlor-residuals", check_lawlor_residuals),
    ("invariants", check_invariants),
    ("expander", check_expander),
    ("inversion", check_inversion),
    ("maslov", check_maslov),
    ("ode", check_ode),
    ("modes", check_modes),
    ("transform", check_transform),
    ("plumbing", check_plumbing),
    ("floer", check_floer),
    ("limit", check_limit),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs one check by name; errors inside the check count as failures.
pub fn run_check(name: &str, ctx: &Context) -> std::result::Result<CheckResult, CliError> {
    let (n, f) = CHECKS.iter().find(|c| c.0 == name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown check {name:?} (known: {})",
            check_names().join(", ")
        ))
    })?;
    Ok(f(ctx).unwrap_or_else(|e| CheckResult::errored(n, e)))
}

/// Runs the named checks (all of them when `only` is empty).
pub fn run_battery(
    ctx: &Context,
    only: &[String],
) -> std::result::Result<Vec<CheckResult>, CliError> {
    let names: Vec<String> = if only.is_empty() {
        check_names().iter().map(|s| s.to_string()).collect()
    } else {
        only.to_vec()
    };
    names.iter().map(|n| run_check(n, ctx)).collect()
}

fn random_a(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-1.2f64..1.2).exp()).collect()
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-3 {
            return x.iter().map(|v| v / n).collect();
        }
    }
}

fn random_neck_point(rng: &mut ChaCha8Rng, m: usize, scale: f64) -> Result<NeckPoint> {
    let y = rng.gen_range(-1.0f64..1.0).sinh() * scale;
    NeckPoint::new(y, random_unit(rng, m))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn check_angles(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(1);
    let sets: Vec<Vec<f64>> = (0..20).map(|i| random_a(&mut rng, 3 + i % 3)).collect();
    let errs = sets
        .par_iter()
        .map(|a| {
            Ok((lawlor::lawlor_angles(&LawlorParams::new(a.clone())?)?
                .phis
                .sum()
                - PI)
                .abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = max_of(errs);
    Ok(CheckResult::new(
        "angles",
        worst < ANGLE_SUM_TOL,
        worst,
        ANGLE_SUM_TOL,
        format!(
            "max |sum phi - pi| over {} Lawlor families, m in 3..=5",
            sets.len()
        ),
    ))
}

/// `(max |omega(e_i, e_j)|, max |Im Omega|)` over `samples` random points.
pub fn lawlor_sl_residuals(
    neck: &LawlorNeck,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<(f64, f64)> {
    let m = neck.params().m();
    let pts: Vec<NeckPoint> = (0..samples)
        .map(|_| random_neck_point(rng, m, 20.0))
        .collect::<Result<_>>()?;
    let res = pts
        .par_iter()
        .map(|pt| {
            let s = lawlor::lawlor_point(neck, pt)?;
            Ok((
                s.frame.lagrangian_residual(),
                cm::holomorphic_volume(&s.frame)?.im.abs(),
            ))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok((
        max_of(res.iter().map(|r| r.0)),
        max_of(res.iter().map(|r| r.1)),
    ))
}

pub fn check_lawlor_residuals(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(2);
    let (mut omega, mut im_omega) = (0.0f64, 0.0f64);
    let families = 5;
    for i in 0..families {
        let a = random_a(&mut rng, 3 + i % 3);
        let neck = LawlorNeck::new(LawlorParams::new(a)?)?;
        let (o, v) = lawlor_sl_residuals(&neck, &mut rng, 200)?;
        omega = omega.max(o);
        im_omega = im_omega.max(v);
    }
    let worst = omega.max(im_omega);
    Ok(CheckResult::new(
        "lawlor-residuals",
        worst < SL_RESIDUAL_TOL,
        worst,
        SL_RESIDUAL_TOL,
        format!("{families} families x 200 samples: max |omega| = {omega:.3e}, max |Im Omega| = {im_omega:.3e}"),
    ))
}

/// Random `(alpha, a)` pairs for expander checks.
fn random_jlt_sets(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, Vec<f64>)> {
    (0..n)
        .map(|i| {
            let alpha = rng.gen_range(-1.5f64..1.0).exp();
            (alpha, random_a(rng, 3 + i % 3))
        })
        .collect()
}

/// Largest `|closed - limit|` for JLT expanders, where `closed` is computed by
/// `closed_form(sum phi, alpha)` and the limit is the Liouville integral along the
/// profile curve. Also returns whether every invariant was positive and every
/// tilde invariant negative.
pub fn jlt_invariant_discrepancy(
    ctx: &Context,
    closed_form: fn(f64, f64) -> f64,
) -> Result<(f64, bool)> {
    let mut rng = ctx.rng(3);
    let sets = random_jlt_sets(&mut rng, 20);
    let rows = sets
        .par_iter()
        .map(|(alpha, a)| {
            let params = JltParams::new(a.clone(), *alpha)?;
            let exp = JltExpander::new(params.clone())?;
            let inv = jlt::jlt_invariant_a(&exp)?;
            let integral = exp.family().liouville_total();
            let closed = closed_form(exp.family().phi_sum(), *alpha);
            let gap = (closed - integral)
                .abs()
                .max((closed - inv.potential_limit).abs());
            let signs =
                closed > 0.0 && integral > 0.0 && jlt::jlt_tilde(&params)?.invariant() < 0.0;
            Ok((gap, signs))
        })
        .collect::<Result<Vec<(f64, bool)>>>()?;
    Ok((max_of(rows.iter().map(|r| r.0)), rows.iter().all(|r| r.1)))
}

/// `(pi - sum phi) / (2 alpha)`.
pub fn corrected_closed_form(phi_sum: f64, alpha: f64) -> f64 {
    jlt::closed_form_invariant(phi_sum, alpha)
}

pub fn check_invariants(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(4);
    let sets: Vec<Vec<f64>> = (0..20).map(|i| random_a(&mut rng, 3 + i % 3)).collect();
    let rows = sets
        .par_iter()
        .map(|a| {
            let params = LawlorParams::new(a.clone())?;
            let neck = LawlorNeck::new(params.clone())?;
            let area = neck.angles()?.area;
            let limit = lawlor::lawlor_invariant_a(&neck)?;
            let signs =
                area > 0.0 && limit > 0.0 && lawlor::lawlor_tilde(&params)?.invariant() < 0.0;
            Ok(((area - limit).abs(), signs))
        })
        .collect::<Result<Vec<(f64, bool)>>>()?;
    let lawlor_gap = max_of(rows.iter().map(|r| r.0));
    let lawlor_signs = rows.iter().all(|r| r.1);
    let (jlt_gap, jlt_signs) = jlt_invariant_discrepancy(ctx, corrected_closed_form)?;
    let passed = lawlor_gap < LAWLOR_INVARIANT_TOL
        && jlt_gap < JLT_INVARIANT_TOL
        && lawlor_signs
        && jlt_signs;
    Ok(CheckResult::new(
        "invariants",
        passed,
        jlt_gap,
        JLT_INVARIANT_TOL,
        format!(
            "Lawlor: max |quadrature - limit| = {lawlor_gap:.3e} (tol {LAWLOR_INVARIANT_TOL:e}); \
             expander: max |closed form - limit| = {jlt_gap:.3e}; signs ok: {}",
            lawlor_signs && jlt_signs
        ),
    ))
}

/// Largest `|theta' + c(alpha) lambda(d/dy)|` over 10 random expanders x 50
/// samples, where `coefficient` gives `c` (`2 alpha` for expanders).
pub fn expander_identity_residual(ctx: &Context, coefficient: fn(f64) -> f64) -> Result<f64> {
    let mut rng = ctx.rng(5);
    let sets = random_jlt_sets(&mut rng, 10);
    let shift = match ctx.fault {
        Some(Fault::ExpanderPhase) => FAULT_PHASE_SHIFT,
        None => 0.0,
    };
    let mut jobs = Vec::new();
    for (alpha, a) in &sets {
        for _ in 0..50 {
            jobs.push((
                *alpha,
                a.clone(),
                random_neck_point(&mut rng, a.len(), 6.0)?,
            ));
        }
    }
    let res = jobs
        .par_iter()
        .map(|(alpha, a, pt)| {
            let exp = JltExpander::new(JltParams::new(a.clone(), *alpha)?)?;
            let s = exp.family().sample(pt.y, &pt.x)?;
            let lambda = cm::liouville_form(s.point.coords(), &s.tangent_y)?;
            Ok((exp.theta_prime(pt.y) + shift + coefficient(*alpha) * lambda).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(max_of(res))
}

pub fn check_expander(ctx: &Context) -> Result<CheckResult> {
    let worst = expander_identity_residual(ctx, |alpha| 2.0 * alpha)?;
    Ok(CheckResult::new(
        "expander",
        worst < EXPANDER_RESIDUAL_TOL,
        worst,
        EXPANDER_RESIDUAL_TOL,
        format!(
            "max |dtheta/dy + 2 alpha lambda(d/dy)| over 10 expanders x 50 samples{}",
            if ctx.fault.is_some() {
                " (fault injected)"
            } else {
                ""
            }
        ),
    ))
}

/// Summary of a batch of inversions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionStats {
    pub cases: usize,
    pub first_try: usize,
    pub recovered: usize,
    pub max_error: f64,
}

fn inversion_row(a: &[f64], report: &slag_core::neck::NewtonReport) -> (bool, f64) {
    let err = max_of(a.iter().zip(&report.a).map(|(x, y)| (x - y).abs()));
    (report.restarts == 0 && report.iterations <= 30, err)
}

pub fn inversion_stats(ctx: &Context) -> Result<InversionStats> {
    let mut rng = ctx.rng(6);
    let lawlor_sets: Vec<Vec<f64>> = (0..12).map(|i| random_a(&mut rng, 3 + i % 3)).collect();
    let jlt_sets = random_jlt_sets(&mut rng, 12);
    let mut rows = lawlor_sets
        .par_iter()
        .map(|a| -> Result<(bool, f64)> {
            let target = lawlor::lawlor_angles(&LawlorParams::new(a.clone())?)?;
            let (_, report) = lawlor::lawlor_invert(&target)?;
            Ok(inversion_row(a, &report))
        })
        .collect::<Vec<_>>();
    rows.extend(
        jlt_sets
            .par_iter()
            .map(|(alpha, a)| -> Result<(bool, f64)> {
                let target = jlt::jlt_angles(&JltParams::new(a.clone(), *alpha)?)?;
                let (_, report) = jlt::jlt_invert(*alpha, &target.phis)?;
                Ok(inversion_row(a, &report))
            })
            .collect::<Vec<_>>(),
    );
    let cases = rows.len();
    let ok: Vec<(bool, f64)> = rows.into_iter().filter_map(|r| r.ok()).collect();
    Ok(InversionStats {
        cases,
        first_try: ok.iter().filter(|r| r.0).count(),
        recovered: ok.iter().filter(|r| r.1 < INVERSION_TOL).count(),
        max_error: if ok.len() == cases {
            max_of(ok.iter().map(|r| r.1))
        } else {
            f64::INFINITY
        },
    })
}

pub fn check_inversion(ctx: &Context) -> Result<CheckResult> {
    let s = inversion_stats(ctx)?;
    let rate = s.first_try as f64 / s.cases as f64;
    let passed = rate >= INVERSION_FIRST_TRY_RATE && s.recovered == s.cases;
    Ok(CheckResult::new(
        "inversion",
        passed,
        s.max_error,
        INVERSION_TOL,
        format!(
            "{}/{} converged within 30 iterations without restart, {}/{} recovered after restarts",
            s.first_try, s.cases, s.recovered, s.cases
        ),
    ))
}

fn random_unitary(rng: &mut ChaCha8Rng, m: usize, special: bool) -> Result<CMatrix> {
    let cols: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let u = linalg::unitary_from_columns(&CMatrix::from_columns(&cols))
        .ok_or(Error::DegenerateFrame)?;
    if !special {
        return Ok(u);
    }
    let phase = Complex64::from_polar(1.0, -u.det().arg() / m as f64);
    Ok(CMatrix::diagonal(&vec![phase; m]).mul(&u))
}

fn random_angles(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(0.05..PI - 0.05)).collect()
}

/// Angles in `(0, pi)` summing to `k pi`.
fn angles_with_sum(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Vec<f64> {
    loop {
        let mut phis = random_angles(rng, m - 1);
        let last = k as f64 * PI - phis.iter().sum::<f64>();
        if last > 0.05 && last < PI - 0.05 {
            phis.push(last);
            return phis;
        }
    }
}

pub fn check_maslov(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(7);
    let mut failures = Vec::new();
    for _ in 0..500 {
        let m = rng.gen_range(3..=6);
        let v = random_unitary(&mut rng, m, false)?;
        let phis = random_angles(&mut rng, m);
        let a = LagrangianPlane::real(m)?.rotated(&v)?;
        let b = LagrangianPlane::from_angles(&phis)?.rotated(&v)?;
        let base = v.det().arg();
        let (na, nb) = (rng.gen_range(-3..4) as f64, rng.gen_range(-3..4) as f64);
        let pair = GradedPointPair::new(
            base + na * PI,
            base + phis.iter().sum::<f64>() + nb * PI,
            0.0,
            0.0,
        );
        let mu_ab = maslov_degree(&characteristic_angles(&a, &b)?, &pair)?;
        let mu_ba = maslov_degree(&characteristic_angles(&b, &a)?, &pair.swapped())?;
        if mu_ab + mu_ba != m as i64 {
            failures.push(format!("mu + mu' = {} != {m}", mu_ab + mu_ba));
        }
        if !grading_window_holds(&pair, mu_ab, m)
            || !grading_window_holds(&pair.swapped(), mu_ba, m)
        {
            failures.push("grading window".into());
        }
    }
    for _ in 0..500 {
        let m = rng.gen_range(3..=6);
        let k = rng.gen_range(1..m);
        let v = random_unitary(&mut rng, m, true)?;
        let phis = angles_with_sum(&mut rng, m, k);
        let a = LagrangianPlane::real(m)?.rotated(&v)?;
        let b = LagrangianPlane::from_angles(&phis)?.rotated(&v)?;
        let pair = GradedPointPair::new(0.0, 0.0, 0.0, 0.0);
        let mu = maslov_degree(&characteristic_angles(&a, &b)?, &pair)?;
        if !degree_window_check(&pair, mu, 0.0, m)? {
            failures.push(format!("special Lagrangian pair with mu = {mu}, m = {m}"));
        }
    }
    for _ in 0..500 {
        let m = rng.gen_range(3..=6);
        let alpha = rng.gen_range(0.1..3.0);
        let angles = AngleVector::new(random_angles(&mut rng, m))?;
        let theta_l = rng.gen_range(-4.0..4.0);
        let target = rng.gen_range(-2..=(m as i64 + 2)) as f64;
        let theta_lp = angles.sum() + theta_l - target * PI;
        let pair = GradedPointPair::new(
            theta_l,
            theta_lp,
            cm::expander_potential(theta_l, alpha),
            cm::expander_potential(theta_lp, alpha),
        );
        let mu = maslov_degree(&angles, &pair)?;
        if !degree_window_check(&pair, mu, alpha, m)? {
            failures.push(format!("expander pair with mu = {mu}"));
        }
    }
    Ok(CheckResult::new(
        "maslov",
        failures.is_empty(),
        failures.len() as f64,
        0.0,
        if failures.is_empty() {
            "500 graded pairs (mu + mu' = m and windows), 500 special Lagrangian pairs, 500 expander pairs".into()
        } else {
            failures.join("; ")
        },
    ))
}

/// Which radial equation to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialEquation {
    /// `4t^2 A'' + 2(alpha + (m+6)t) A' + (3(m+1) - K) A = 0`, paired with
    /// `r^{-1-m}`.
    Printed,
    /// `4t^2 A'' + 2(alpha + (m+8)t) A' + (4(m+2) - K) A = 0`, paired with
    /// `r^{-2-m}`, which is what the linearised operator reduces to.
    Linearized,
}

impl RadialEquation {
    pub fn ode(self, m: usize, k: u32, alpha: f64) -> Result<ModeOde> {
        let mf = m as f64;
        match self {
            RadialEquation::Printed => {
                ModeOde::with_coefficients(m, k, alpha, mf + 6.0, 3.0 * (mf + 1.0), -(mf + 1.0))
            }
            RadialEquation::Linearized => ModeOde::linearized_expander(m, k, alpha),
        }
    }
}

/// Worst overlap, c1 error and the number of growing cases failing monotonicity,
/// range or the log-derivative bound, over `m in 3..=5`, `k <= 8`,
/// `alpha in {0.5, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeStats {
    pub cases: usize,
    pub growing: usize,
    pub max_overlap: f64,
    pub max_c1_error: f64,
    pub growth_failures: usize,
}

pub fn ode_stats(eq: RadialEquation) -> Result<OdeStats> {
    let mut cases = Vec::new();
    for m in 3..=5usize {
        for k in 0..=8u32 {
            for alpha in [0.5, 1.0, 2.0] {
                cases.push((m, k, alpha));
            }
        }
    }
    let t_end = 2.0;
    let grid: Vec<f64> = (0..100).map(|i| t_end * i as f64 / 99.0).collect();
    let rows = cases
        .par_iter()
        .map(|&(m, k, alpha)| -> Result<(f64, f64, bool, bool)> {
            let ode = eq.ode(m, k, alpha)?;
            let sol = solve_ak(ode, t_end)?;
            let kk = (k * (m as u32 + k - 2)) as f64;
            let c1 = (kk - ode.constant) / (2.0 * alpha);
            let c1_err = (sol.eval(0.0)?.1 - c1).abs();
            if !ode.is_growing() {
                return Ok((sol.overlap_error, c1_err, false, true));
            }
            let mut ok = slag_core::graphs::check_ak_log_derivative_bound(&sol, &grid)?;
            let mut prev = 0.0;
            for (i, &t) in grid.iter().enumerate() {
                let a = sol.value(t)?;
                if a < 1.0 || (i > 0 && a <= prev) {
                    ok = false;
                }
                prev = a;
            }
            Ok((sol.overlap_error, c1_err, true, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OdeStats {
        cases: rows.len(),
        growing: rows.iter().filter(|r| r.2).count(),
        max_overlap: max_of(rows.iter().map(|r| r.0)),
        max_c1_error: max_of(rows.iter().map(|r| r.1)),
        growth_failures: rows.iter().filter(|r| !r.3).count(),
    })
}

pub fn check_ode(_ctx: &Context) -> Result<CheckResult> {
    let printed = ode_stats(RadialEquation::Printed)?;
    let linear = ode_stats(RadialEquation::Linearized)?;
    let ok = |s: &OdeStats| {
        s.max_overlap < OVERLAP_TOL && s.max_c1_error < C1_TOL && s.growth_failures == 0
    };
    Ok(CheckResult::new(
        "ode",
        ok(&printed) && ok(&linear),
        printed.max_overlap.max(linear.max_overlap),
        OVERLAP_TOL,
        format!(
            "printed equation: {} cases ({} growing), c1 error {:.1e}, growth failures {}; \
             linearised equation: {} cases ({} growing), c1 error {:.1e}, growth failures {}",
            printed.cases,
            printed.growing,
            printed.max_c1_error,
            printed.growth_failures,
            linear.cases,
            linear.growing,
            linear.max_c1_error,
            linear.growth_failures
        ),
    ))
}

/// Largest `|Delta f + alpha (x . grad f - 2 f)|` over every harmonic mode with
/// `k <= 4` in `m = 3`, at 100 points with `r in [2, 6]` each.
pub fn mode_residual(ctx: &Context, eq: RadialEquation) -> Result<f64> {
    let m = 3;
    let alpha = 1.0;
    let mut rng = ctx.rng(8);
    let mut jobs = Vec::new();
    for k in 0..=4u32 {
        let basis = harmonic_basis(m, k)?;
        let radial = solve_ak(eq.ode(m, k, alpha)?, 0.3)?;
        for p in basis {
            let pts: Vec<Vec<f64>> = (0..100)
                .map(|_| {
                    let r = rng.gen_range(2.0..6.0);
                    random_unit(&mut rng, m).iter().map(|v| v * r).collect()
                })
                .collect();
            jobs.push((ExpansionMode::new(p, radial.clone())?, pts));
        }
    }
    let res = jobs
        .par_iter()
        .map(|(mode, pts)| {
            let field = Expansion::new(m, vec![mode.clone()]);
            let mut worst = 0.0f64;
            for x in pts {
                worst = worst.max(linearized_expander_residual(&field, alpha, x)?.abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(max_of(res))
}

pub fn check_modes(ctx: &Context) -> Result<CheckResult> {
    let worst = mode_residual(ctx, RadialEquation::Linearized)?;
    Ok(CheckResult::new(
        "modes",
        worst < MODE_RESIDUAL_TOL,
        worst,
        MODE_RESIDUAL_TOL,
        "max linearised expander residual of single modes, m = 3, k <= 4, 100 points each".into(),
    ))
}

fn random_polynomial(rng: &mut ChaCha8Rng, m: usize) -> Result<Polynomial> {
    let mut terms = Vec::new();
    for _ in 0..12 {
        let mut e = vec![0u32; m];
        for _ in 0..rng.gen_range(0..=4) {
            e[rng.gen_range(0..m)] += 1;
        }
        terms.push((e, rng.gen_range(-1.0..1.0)));
    }
    Polynomial::new(m, terms)
}

/// Relative error in `Delta f(x) = s^{m+2} (Delta F)(y)` with `f` the inversion of
/// `F` and `x = y / s^2`. The denominator is `|rhs|` floored at
/// `1e-3 s^{m+2} max|coefficient of Delta F|`, so points where `Delta F` happens to
/// vanish do not divide by zero.
pub fn check_transform(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(9);
    let mut jobs = Vec::new();
    for i in 0..10 {
        let m = 3 + i % 3;
        let big = random_polynomial(&mut rng, m)?;
        let pts: Vec<Vec<f64>> = (0..100)
            .map(|_| {
                let s = rng.gen_range(0.1..0.7);
                random_unit(&mut rng, m).iter().map(|v| v * s).collect()
            })
            .collect();
        jobs.push((big, pts));
    }
    let res = jobs
        .par_iter()
        .map(|(big, pts)| {
            let m = big.dim();
            let scale = big.laplacian_poly().max_abs_coefficient().max(1e-12);
            let small = inversion_transform(big, InversionDirection::Forward);
            let mut worst = 0.0f64;
            for y in pts {
                let s = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let x: Vec<f64> = y.iter().map(|v| v / (s * s)).collect();
                let lhs = small.laplacian(&x)?;
                let weight = s.powi(m as i32 + 2);
                let rhs = weight * big.laplacian(y)?;
                worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-3 * weight * scale));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = max_of(res);
    Ok(CheckResult::new(
        "transform",
        worst < TRANSFORM_TOL,
        worst,
        TRANSFORM_TOL,
        "max relative error of the Laplacian under inversion, 10 polynomials x 100 points, m in 3..=5".into(),
    ))
}

/// Largest relative chart round-trip error on log-spaced radii in `[lo, hi]`.
pub fn chart_round_trip_error(
    rng: &mut ChaCha8Rng,
    m: usize,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..n {
        let r = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let x: Vec<f64> = random_unit(rng, m).iter().map(|v| v * r).collect();
        let xt = plumbing::sphere_chart(&x)?;
        match plumbing::sphere_chart_inverse(&xt)? {
            plumbing::SpherePoint::Finite(back) => {
                worst = worst.max(max_of(back.iter().zip(&x).map(|(a, b)| (a - b).abs())) / r);
            }
            plumbing::SpherePoint::InfinityZero => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}

/// Largest `|d lambda~(u, v) - omega(u, v)|` over `n` points cycling through the
/// regions of `eta`, with the number of points landing in each region.
pub fn d_lambda_error(
    rng: &mut ChaCha8Rng,
    chart: &PlumbingChart,
    n: usize,
) -> Result<(f64, BTreeMap<String, usize>)> {
    let m = chart.m();
    let t = chart.eta().cutoff();
    let mut counts = BTreeMap::new();
    let mut worst = 0.0f64;
    for i in 0..n {
        // Target value of sum x^2 - sum y^2 in one of the five bands.
        let q = match i % 5 {
            0 => rng.gen_range(-0.9..0.9) * t,
            1 => rng.gen_range(1.05..1.95) * t,
            2 => -rng.gen_range(1.05..1.95) * t,
            3 => rng.gen_range(2.1..4.0) * t,
            _ => -rng.gen_range(2.1..4.0) * t,
        };
        let ybase = rng.gen_range(0.0..3.0);
        let xn = (q + ybase * ybase).max(0.0).sqrt();
        let yn = (xn * xn - q).max(0.0).sqrt();
        let p = DarbouxCoords::new(
            random_unit(rng, m).iter().map(|v| v * xn).collect(),
            random_unit(rng, m).iter().map(|v| v * yn).collect(),
        )?;
        let region = match plumbing::eta_region(chart, &p) {
            EtaRegion::Standard => "standard",
            EtaRegion::Transition => "transition",
            EtaRegion::NearZeroSection => "zero-section",
            EtaRegion::NearPhiSection => "phi-section",
        };
        *counts.entry(region.to_string()).or_insert(0) += 1;
        let u = DarbouxCoords::new(random_unit(rng, m), random_unit(rng, m))?;
        let v = DarbouxCoords::new(random_unit(rng, m), random_unit(rng, m))?;
        let d = plumbing::d_liouville_tilde(chart, &p, &u, &v, 1e-3)?;
        worst = worst.max((d - plumbing::darboux_omega(&u, &v)).abs());
    }
    Ok((worst, counts))
}

pub fn check_plumbing(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(10);
    let chart_err = chart_round_trip_error(&mut rng, 3, 0.5, 1e6, 200)?;
    let phis = AngleVector::new(random_angles(&mut rng, 3))?;
    let chart = PlumbingChart::with_default_cutoff(phis)?;
    let (d_err, counts) = d_lambda_error(&mut rng, &chart, 200)?;
    let regions_covered = counts.len() == 4;
    let mut decay_ok = true;
    for a in [vec![1.0, 1.0, 1.0], random_a(&mut rng, 3)] {
        let neck = LawlorNeck::new(LawlorParams::new(a)?)?;
        let dir = random_unit(&mut rng, 3);
        let samples = plumbing::lawlor_graph_decay(&neck, &dir, &[0.2, 0.1, 0.05])?;
        decay_ok &= plumbing::decays_monotonically(&samples);
    }
    let passed = chart_err < CHART_TOL && d_err < D_LAMBDA_TOL && regions_covered && decay_ok;
    Ok(CheckResult::new(
        "plumbing",
        passed,
        d_err,
        D_LAMBDA_TOL,
        format!(
            "chart round trip {chart_err:.2e} (tol {CHART_TOL:e}); d lambda~ = omega at 200 points {counts:?}; \
             Lawlor decay monotone: {decay_ok}"
        ),
    ))
}

pub fn check_floer(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(11);
    let mut failures = Vec::new();
    for m in 3..=6usize {
        let phis = AngleVector::new(random_angles(&mut rng, m))?;
        let fwd = floer::cohomology_dims(&floer::sphere_pair_complex(
            &phis,
            SpherePairOrder::ZeroThenPhi,
        )?);
        let back = floer::cohomology_dims(&floer::sphere_pair_complex(
            &phis,
            SpherePairOrder::PhiThenZero,
        )?);
        if fwd != BTreeMap::from([(0, 1)]) {
            failures.push(format!("HF(S_0, S_phi) = {fwd:?} for m = {m}"));
        }
        if back != BTreeMap::from([(m as i64, 1)]) {
            failures.push(format!("HF(S_phi, S_0) = {back:?} for m = {m}"));
        }
        if floer::expected_sphere_cohomology(m)? != BTreeMap::from([(0, 1), (m as i64, 1)]) {
            failures.push("sphere cohomology".into());
        }
    }
    let gens = vec![
        Generator::new("a", 0),
        Generator::new("b", 1),
        Generator::new("c", 2),
    ];
    if !matches!(
        floer::build_complex(gens, [("a", "b", 1), ("b", "c", 1)]),
        Err(Error::NotACochainComplex)
    ) {
        failures.push("complex with d^2 != 0 was accepted".into());
    }
    let gens = vec![Generator::new("a", 0), Generator::new("b", 0)];
    if !matches!(
        floer::build_complex(gens, [("a", "b", 1)]),
        Err(Error::DegreeMismatch { .. })
    ) {
        failures.push("degree-preserving count was accepted".into());
    }
    Ok(CheckResult::new(
        "floer",
        failures.is_empty(),
        failures.len() as f64,
        0.0,
        if failures.is_empty() {
            "sphere pair complexes give {0: 1} and {m: 1} for m in 3..=6; bad complexes rejected"
                .into()
        } else {
            failures.join("; ")
        },
    ))
}

pub fn check_limit(ctx: &Context) -> Result<CheckResult> {
    let mut rng = ctx.rng(12);
    let sets: Vec<Vec<f64>> = (0..6).map(|i| random_a(&mut rng, 3 + i % 3)).collect();
    let gaps = sets
        .par_iter()
        .map(|a| {
            let l = lawlor::lawlor_angles(&LawlorParams::new(a.clone())?)?;
            let j = jlt::jlt_angles(&JltParams::new(a.clone(), 1e-3)?)?;
            Ok(max_of(
                l.phis
                    .phis()
                    .iter()
                    .zip(j.phis.phis())
                    .map(|(x, y)| (x - y).abs()),
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = max_of(gaps);
    Ok(CheckResult::new(
        "limit",
        worst < LIMIT_TOL,
        worst,
        LIMIT_TOL,
        "max |phi(expander, alpha = 1e-3) - phi(Lawlor)| over 6 parameter sets".into(),
    ))
}
