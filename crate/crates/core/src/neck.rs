//! Radial profiles shared by Lawlor necks (`alpha = 0`) and Joyce-Lee-Tsui
//! expanders (`alpha > 0`).
//!
//! Both families are built from
//! `P(x) = (e^{alpha x^2} prod_k (1 + a_k x^2) - 1) / x^2` through the integrals
//! `psi_k(y) = a_k int_{-inf}^y dx / ((1 + a_k x^2) sqrt P)` and the Liouville
//! primitive `F(y) = int_{-inf}^y dx / (2 sqrt P)`. The neck itself is
//! `{(z_1(y) x_1, ..., z_m(y) x_m) : y in R, |x| = 1}` with
//! `z_k(y) = e^{i psi_k(y)} sqrt(1/a_k + y^2)`.
//!
//! All integrands are even, so everything is expressed through the tails
//! `T(s) = int_s^inf` for `s >= 0`. Integrals run in `u = asinh x`, where the
//! integrands decay at least like `e^{-(m-2) u}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cm::{CmPoint, TangentFrame};
use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature::{integrate_vec, Tolerance};

/// Grid step in `u = asinh x` for the tabulated tails.
const GRID_STEP: f64 = 0.25;
/// Number of grid steps; the grid covers `0 <= u <= 40`, i.e. `x` up to about `1e17`.
const GRID_STEPS: usize = 160;
/// Length in `u` of the integration window for a tail starting at `u`. The slowest
/// integrand decays like `e^{-u}`, so the discarded part is below `e^{-40}` relative.
const TAIL_WINDOW: f64 = 40.0;

const SEGMENT_TOL: Tolerance = Tolerance::new(0.0, 1e-13);

/// Parameters `(a_1, ..., a_m)` and `alpha >= 0` of a neck.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckParams {
    a: Vec<f64>,
    alpha: f64,
}

impl NeckParams {
    pub fn new(a: Vec<f64>, alpha: f64) -> Result<Self> {
        if a.len() < 3 {
            return Err(Error::UnsupportedDimension(a.len()));
        }
        for &ak in &a {
            if !(ak > 0.0 && ak.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "a_k must be positive (got {ak})"
                )));
            }
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha must be non-negative (got {alpha})"
            )));
        }
        Ok(Self { a, alpha })
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn p_at_zero(&self) -> f64 {
        self.alpha + self.a.iter().sum::<f64>()
    }

    /// `S(x) = alpha x^2 + sum_k ln(1 + a_k x^2)`, so that `P = expm1(S) / x^2`.
    fn log_numerator(&self, x2: f64) -> f64 {
        self.alpha * x2 + self.a.iter().map(|ak| (ak * x2).ln_1p()).sum::<f64>()
    }

    /// `ln P(x)`, finite for every real `x`.
    pub fn ln_p(&self, x: f64) -> f64 {
        let x2 = x * x;
        if x2 < 1e-300 {
            return self.p_at_zero().ln();
        }
        let s = self.log_numerator(x2);
        let ln_e = if s > 0.5 {
            s + (-(-s).exp()).ln_1p()
        } else {
            s.exp_m1().ln()
        };
        ln_e - x2.ln()
    }

    /// `P(x)`; overflows to infinity only when `P` itself exceeds `f64::MAX`.
    pub fn p(&self, x: f64) -> f64 {
        self.ln_p(x).exp()
    }

    /// `P(x)^{-1/2}`.
    pub fn inv_sqrt_p(&self, x: f64) -> f64 {
        (-0.5 * self.ln_p(x)).exp()
    }

    /// `x P'(x) / P(x)`.
    pub fn x_log_derivative(&self, x: f64) -> f64 {
        let x2 = x * x;
        if x2 < 1e-300 {
            return 0.0;
        }
        let s = self.log_numerator(x2);
        let q = self.alpha + self.a.iter().map(|ak| ak / (1.0 + ak * x2)).sum::<f64>();
        // x S' = 2 x^2 q and e^S / expm1(S) = -1 / expm1(-S).
        2.0 * x2 * q * (-1.0 / (-s).exp_m1()) - 2.0
    }

    /// Integrands in `u = asinh x`: `out[k]` for `psi_k` and `out[m]` for `F`.
    fn integrand(&self, u: f64, out: &mut [f64]) {
        let x = u.sinh();
        let c = u.cosh();
        let q = self.inv_sqrt_p(x);
        let x2 = x * x;
        let m = self.a.len();
        for k in 0..m {
            let ak = self.a[k];
            out[k] = ak * c * q / (1.0 + ak * x2);
        }
        out[m] = 0.5 * c * q;
    }

    fn integrate_u(&self, u0: f64, u1: f64) -> Result<Vec<f64>> {
        let est = integrate_vec(
            |u, out: &mut [f64]| self.integrand(u, out),
            self.m() + 1,
            u0,
            u1,
            SEGMENT_TOL,
        )?;
        Ok(est.value)
    }

    /// `psi_k'(y)`.
    pub fn psi_derivatives(&self, y: f64) -> Vec<f64> {
        let q = self.inv_sqrt_p(y);
        self.a
            .iter()
            .map(|ak| ak * q / (1.0 + ak * y * y))
            .collect()
    }
}

/// Tabulated tails of a neck together with its total angles.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckFamily {
    params: NeckParams,
    /// `tails[i * (m + 1) + k]` is `T_k(sinh(i h))`.
    tails: Vec<f64>,
    phis: Vec<f64>,
    liouville_total: f64,
}

/// Values of the radial profile at one `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub y: f64,
    /// `psi_k(y)`, increasing from 0 to `phi_k`.
    pub psi: Vec<f64>,
    /// `phi_k - psi_k(y)`, accurate when `y` is large and positive.
    pub psi_upper: Vec<f64>,
    /// `F(y) = int_{-inf}^y dx / (2 sqrt P)`.
    pub liouville: f64,
    /// `F(+inf) - F(y)`.
    pub liouville_upper: f64,
}

/// A point of the neck with an oriented orthonormal tangent frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckSample {
    pub y: f64,
    pub point: CmPoint,
    /// Orthonormalised `(-d/dy, sphere directions)`.
    pub frame: TangentFrame,
    /// The unnormalised tangent `d/dy` of the curve `y -> (z_k(y) x_k)`.
    pub tangent_y: Vec<Complex64>,
    /// Phase of `Omega` on the frame, lifted to the continuous branch that tends to
    /// 0 as `y -> -inf`.
    pub theta: f64,
    /// `F(y)`, the Liouville primitive normalised to vanish as `y -> -inf`.
    pub liouville: f64,
}

impl NeckFamily {
    pub fn new(params: NeckParams) -> Result<Self> {
        let m = params.m();
        let dim = m + 1;
        let mut tails = vec![0.0; (GRID_STEPS + 1) * dim];
        let u_last = GRID_STEPS as f64 * GRID_STEP;
        let far = params.integrate_u(u_last, u_last + TAIL_WINDOW)?;
        tails[GRID_STEPS * dim..].copy_from_slice(&far);
        for i in (0..GRID_STEPS).rev() {
            let seg = params.integrate_u(i as f64 * GRID_STEP, (i + 1) as f64 * GRID_STEP)?;
            for k in 0..dim {
                tails[i * dim + k] = tails[(i + 1) * dim + k] + seg[k];
            }
        }
        let phis = (0..m).map(|k| 2.0 * tails[k]).collect();
        let liouville_total = 2.0 * tails[m];
        Ok(Self {
            params,
            tails,
            phis,
            liouville_total,
        })
    }

    pub fn params(&self) -> &NeckParams {
        &self.params
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    /// `phi_k = psi_k(+inf)`.
    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn phi_sum(&self) -> f64 {
        self.phis.iter().sum()
    }

    /// `int_R dx / (2 sqrt P)`, the total change of the Liouville primitive.
    pub fn liouville_total(&self) -> f64 {
        self.liouville_total
    }

    /// Tails `T(s)` for `s >= 0` (`m` angle components, then the Liouville one).
    pub fn tails(&self, s: f64) -> Result<Vec<f64>> {
        let s = s.abs();
        let dim = self.m() + 1;
        let u = s.asinh();
        let u_last = GRID_STEPS as f64 * GRID_STEP;
        if u >= u_last {
            return self.params.integrate_u(u, u + TAIL_WINDOW);
        }
        // Integrate up to the next node so both pieces are positive and the sum keeps
        // full relative accuracy deep in the tail.
        let i = ((u / GRID_STEP).ceil() as usize).min(GRID_STEPS);
        let node_u = i as f64 * GRID_STEP;
        let piece = self.params.integrate_u(u, node_u)?;
        Ok((0..dim)
            .map(|k| self.tails[i * dim + k] + piece[k])
            .collect())
    }

    pub fn profile(&self, y: f64) -> Result<RadialProfile> {
        let m = self.m();
        let t = self.tails(y.abs())?;
        let (psi, psi_upper, liouville, liouville_upper) = if y <= 0.0 {
            (
                t[..m].to_vec(),
                (0..m).map(|k| self.phis[k] - t[k]).collect(),
                t[m],
                self.liouville_total - t[m],
            )
        } else {
            (
                (0..m).map(|k| self.phis[k] - t[k]).collect(),
                t[..m].to_vec(),
                self.liouville_total - t[m],
                t[m],
            )
        };
        Ok(RadialProfile {
            y,
            psi,
            psi_upper,
            liouville,
            liouville_upper,
        })
    }

    /// `z_k(y) = e^{i psi_k(y)} sqrt(1/a_k + y^2)`.
    pub fn z(&self, profile: &RadialProfile) -> Vec<Complex64> {
        let y = profile.y;
        self.params
            .a
            .iter()
            .zip(&profile.psi)
            .map(|(ak, psi)| Complex64::from_polar((1.0 / ak + y * y).sqrt(), *psi))
            .collect()
    }

    /// `z_k'(y) = e^{i psi_k} (rho_k' + i psi_k' rho_k)`.
    pub fn z_prime(&self, profile: &RadialProfile) -> Vec<Complex64> {
        let y = profile.y;
        let dpsi = self.params.psi_derivatives(y);
        self.params
            .a
            .iter()
            .zip(&profile.psi)
            .zip(&dpsi)
            .map(|((ak, psi), dp)| {
                let rho = (1.0 / ak + y * y).sqrt();
                Complex64::from_polar(1.0, *psi) * Complex64::new(y / rho, dp * rho)
            })
            .collect()
    }

    /// `sum_k psi_k(y) + arg(-y - i P(y)^{-1/2})`; the argument lies in `(-pi, 0)`.
    pub fn phase_formula(&self, profile: &RadialProfile) -> f64 {
        let u = self.params.inv_sqrt_p(profile.y);
        profile.psi.iter().sum::<f64>() + (-u).atan2(-profile.y)
    }

    /// Analytic `d theta / dy` of [`NeckFamily::phase_formula`].
    pub fn phase_derivative(&self, y: f64) -> f64 {
        let u = self.params.inv_sqrt_p(y);
        let sum_dpsi: f64 = self.params.psi_derivatives(y).iter().sum();
        let y_du = -0.5 * u * self.params.x_log_derivative(y);
        sum_dpsi + (y_du - u) / (y * y + u * u)
    }

    pub fn sample(&self, y: f64, x: &[f64]) -> Result<NeckSample> {
        let m = self.m();
        if x.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: x.len(),
            });
        }
        let basis = sphere_tangent_basis(x)?;
        let profile = self.profile(y)?;
        let z = self.z(&profile);
        let dz = self.z_prime(&profile);
        let point: Vec<Complex64> = z.iter().zip(x).map(|(zk, xk)| zk * xk).collect();
        let tangent_y: Vec<Complex64> = dz.iter().zip(x).map(|(d, xk)| d * xk).collect();
        let mut vectors = Vec::with_capacity(m);
        vectors.push(tangent_y.iter().map(|v| -v).collect::<Vec<_>>());
        for v in &basis {
            vectors.push(z.iter().zip(v).map(|(zk, vk)| zk * vk).collect());
        }
        let frame = TangentFrame::new(CmPoint::new(point.clone())?, vectors)?.orthonormalized()?;
        let hint = self.phase_formula(&profile);
        let theta = linalg::nearest_branch(frame.matrix().det().arg(), hint);
        Ok(NeckSample {
            y,
            point: CmPoint::new(point)?,
            frame,
            tangent_y,
            theta,
            liouville: profile.liouville,
        })
    }
}

/// A point `(y, x)` of `R x S^{m-1}` parametrising a neck.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckPoint {
    pub y: f64,
    pub x: Vec<f64>,
}

impl NeckPoint {
    pub fn new(y: f64, x: Vec<f64>) -> Result<Self> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 || !y.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "neck point needs finite y and |x| = 1 (got |x| = {norm})"
            )));
        }
        Ok(Self { y, x })
    }
}

/// A point of a Lagrangian with an orthonormal oriented tangent frame, its phase
/// and its potential.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianSample {
    pub point: CmPoint,
    pub frame: TangentFrame,
    pub theta: f64,
    pub potential: f64,
}

/// Applies `diag(e^{i phi_k})` to a sample, flipping the orientation when `m` is
/// even so that the rotated frame is graded by `theta + theta_shift`.
pub fn rotate_sample(
    sample: &LagrangianSample,
    phis: &[f64],
    theta_shift: f64,
    potential_shift: f64,
) -> Result<LagrangianSample> {
    let m = sample.point.dim();
    if phis.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: phis.len(),
        });
    }
    let rot: Vec<Complex64> = phis
        .iter()
        .map(|p| Complex64::from_polar(1.0, *p))
        .collect();
    let apply =
        |v: &[Complex64]| -> Vec<Complex64> { v.iter().zip(&rot).map(|(a, b)| a * b).collect() };
    let point = CmPoint::new(apply(sample.point.coords()))?;
    let mut vectors: Vec<Vec<Complex64>> = sample.frame.vectors.iter().map(|v| apply(v)).collect();
    if m.is_multiple_of(2) {
        for c in vectors[0].iter_mut() {
            *c = -*c;
        }
    }
    let frame = TangentFrame::new(point.clone(), vectors)?;
    Ok(LagrangianSample {
        point,
        frame,
        theta: sample.theta + theta_shift,
        potential: sample.potential + potential_shift,
    })
}

/// `int_R lambda(d/dy) dy` along the curve `y -> (z_k(y) x_k)`, with `lambda`
/// evaluated from the Liouville form at the actual points and tangents.
pub fn liouville_along_curve(family: &NeckFamily, x: &[f64]) -> Result<f64> {
    let mut failure = None;
    let integrand = |u: f64| -> f64 {
        let y = u.sinh();
        let eval = || -> Result<f64> {
            // lambda is invariant under diag(e^{i psi}), so evaluate it on the curve
            // with the phases removed; the ambient z and z' cancel badly for large y.
            let params = family.params();
            let dpsi = params.psi_derivatives(y);
            let (p, t): (Vec<Complex64>, Vec<Complex64>) = params
                .a()
                .iter()
                .zip(&dpsi)
                .zip(x)
                .map(|((ak, dp), xk)| {
                    let rho = (1.0 / ak + y * y).sqrt();
                    (
                        Complex64::new(xk * rho, 0.0),
                        Complex64::new(xk * y / rho, xk * dp * rho),
                    )
                })
                .unzip();
            crate::cm::liouville_form(&p, &t)
        };
        match eval() {
            Ok(v) => v * u.cosh(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let (value, _) = crate::quadrature::integrate(
        integrand,
        -TAIL_WINDOW,
        TAIL_WINDOW,
        Tolerance::new(1e-13, 1e-13),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Completes a unit vector `x in R^m` to a positively oriented orthonormal basis
/// `(x, v_1, ..., v_{m-1})` and returns the `v_j`.
pub fn sphere_tangent_basis(x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = x.len();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(alloc::format!(
            "sphere point must have unit length (|x| = {norm})"
        )));
    }
    // Householder reflection exchanging e_1 and +-x, chosen to avoid cancellation.
    let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w: Vec<f64> = x.to_vec();
    w[0] += sign;
    let w2: f64 = w.iter().map(|v| v * v).sum();
    let mut cols: Vec<Vec<f64>> = (1..m)
        .map(|j| {
            (0..m)
                .map(|i| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    id - 2.0 * w[i] * w[j] / w2
                })
                .collect()
        })
        .collect();
    let mut full = Vec::with_capacity(m * m);
    for i in 0..m {
        full.push(x[i]);
        for c in &cols {
            full.push(c[i]);
        }
    }
    if linalg::real_det(m, &full) < 0.0 {
        for v in cols.last_mut().expect("m >= 2").iter_mut() {
            *v = -*v;
        }
    }
    Ok(cols)
}

/// Outcome of a Newton solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub a: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the residual after each iteration (first entry: initial guess).
    pub trace: Vec<f64>,
    /// Number of restarts from perturbed initial guesses.
    pub restarts: usize,
}

pub(crate) const NEWTON_MAX_ITER: usize = 30;
const NEWTON_TOL: f64 = 1e-12;
const FD_STEP: f64 = 1e-6;

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Damped Newton on `log a` with a central-difference Jacobian and step halving.
pub(crate) fn newton_log<F>(mut residual: F, init: &[f64]) -> Result<NewtonReport>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = init.len();
    let mut s: Vec<f64> = init.iter().map(|v| v.ln()).collect();
    let exp_all = |s: &[f64]| -> Vec<f64> { s.iter().map(|v| v.exp()).collect() };
    let mut r = residual(&exp_all(&s))?;
    let mut trace = vec![max_norm(&r)];
    for it in 0..NEWTON_MAX_ITER {
        if max_norm(&r) < NEWTON_TOL {
            return Ok(NewtonReport {
                a: exp_all(&s),
                iterations: it,
                trace,
                restarts: 0,
            });
        }
        let mut jac = vec![0.0; n * n];
        for j in 0..n {
            let mut sp = s.clone();
            let mut sm = s.clone();
            sp[j] += FD_STEP;
            sm[j] -= FD_STEP;
            let rp = residual(&exp_all(&sp))?;
            let rm = residual(&exp_all(&sm))?;
            for i in 0..n {
                jac[i * n + j] = (rp[i] - rm[i]) / (2.0 * FD_STEP);
            }
        }
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        let mut step = linalg::solve_real(n, &jac, &neg).ok_or(Error::NewtonFailed {
            iterations: it,
            residual: max_norm(&r),
        })?;
        // Keep each log-step moderate so quadrature stays in a sane regime.
        let big = max_norm(&step);
        if big > 2.0 {
            for v in &mut step {
                *v *= 2.0 / big;
            }
        }
        let current = max_norm(&r);
        let mut accepted = false;
        let mut damping = 1.0;
        for _ in 0..20 {
            let trial: Vec<f64> = s.iter().zip(&step).map(|(a, b)| a + damping * b).collect();
            if let Ok(rt) = residual(&exp_all(&trial)) {
                if max_norm(&rt) < current {
                    s = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        trace.push(max_norm(&r));
        if !accepted {
            break;
        }
    }
    let best = max_norm(&r);
    if best < NEWTON_TOL {
        return Ok(NewtonReport {
            a: exp_all(&s),
            iterations: trace.len() - 1,
            trace,
            restarts: 0,
        });
    }
    Err(Error::NewtonFailed {
        iterations: trace.len() - 1,
        residual: best,
    })
}

/// Runs [`newton_log`] from `init`, then from deterministic perturbations of it.
pub(crate) fn newton_with_restarts<F>(mut residual: F, init: &[f64]) -> Result<NewtonReport>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    const FACTORS: [f64; 6] = [1.0, 1.5, 0.6, 2.5, 0.35, 4.0];
    let mut best_residual = f64::INFINITY;
    let mut last_iterations = 0;
    for (restart, f) in FACTORS.iter().enumerate() {
        let start: Vec<f64> = init
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { v * f } else { v / f.sqrt() })
            .collect();
        match newton_log(&mut residual, &start) {
            Ok(mut report) => {
                report.restarts = restart;
                return Ok(report);
            }
            Err(Error::NewtonFailed {
                iterations,
                residual,
            }) => {
                last_iterations = iterations;
                best_residual = best_residual.min(residual);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NewtonFailed {
        iterations: last_iterations,
        residual: best_residual,
    })
}

/// Starting guess `a_k = tan^2(phi_k / 2)`, refined by one multiplicative
/// fixed-point pass `a_k <- a_k (target_k / phi_k(a))^2`.
pub(crate) fn initial_guess<F>(targets: &[f64], mut angles: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut a: Vec<f64> = targets
        .iter()
        .map(|p| {
            let t = (0.5 * p).tan();
            (t * t).clamp(1e-3, 1e3)
        })
        .collect();
    let phis = angles(&a)?;
    for k in 0..a.len() {
        a[k] *= (targets[k] / phis[k]).powi(2);
    }
    Ok(a)
}

/// Checks that every target angle lies in `(0, pi)`.
pub(crate) fn check_angle_domain(phis: &[f64]) -> Result<()> {
    if phis.len() < 3 {
        return Err(Error::UnsupportedDimension(phis.len()));
    }
    for &p in phis {
        if !(p > 0.0 && p < PI) {
            return Err(Error::Precondition(alloc::format!(
                "target angle {p} is outside (0, pi)"
            )));
        }
    }
    Ok(())
}
