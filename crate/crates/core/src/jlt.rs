//! Joyce-Lee-Tsui expanders `L^alpha_phi`: the `alpha > 0` members of the neck
//! families, with `P(x) = (e^{alpha x^2} prod_k (1 + a_k x^2) - 1) / x^2`.
//!
//! Along each curve `lambda(d/dy) = 1 / (2 sqrt P)` and the phase satisfies
//! `d theta = -2 alpha lambda`, so the potential is `f = -theta / (2 alpha)` and
//! `A = (pi - sum phi) / (2 alpha)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cm::{self, AngleVector};
use crate::error::{Error, Result};
use crate::neck::{self, LagrangianSample, NeckFamily, NeckParams, NeckPoint, NewtonReport};

/// `|y|` at which end limits are evaluated; the neglected tails are below
/// `e^{-alpha y^2 / 2}`.
const LIMIT_Y: f64 = 1e3;

/// Agreement required between the closed-form and potential-limit invariants.
pub const INVARIANT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct JltParams {
    inner: NeckParams,
}

impl JltParams {
    pub fn new(a: Vec<f64>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha must be positive; use lawlor (got {alpha})"
            )));
        }
        Ok(Self {
            inner: NeckParams::new(a, alpha)?,
        })
    }

    pub fn m(&self) -> usize {
        self.inner.m()
    }

    pub fn a(&self) -> &[f64] {
        self.inner.a()
    }

    pub fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    pub fn as_neck(&self) -> &NeckParams {
        &self.inner
    }
}

/// Angles (with `0 < sum phi < pi`) and the invariant `A > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JltAngles {
    pub phis: AngleVector,
    pub area: f64,
}

/// Both computations of `A(L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JltInvariant {
    pub closed_form: f64,
    pub potential_limit: f64,
}

impl JltInvariant {
    pub fn discrepancy(&self) -> f64 {
        (self.closed_form - self.potential_limit).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JltExpander {
    params: JltParams,
    family: NeckFamily,
}

impl JltExpander {
    pub fn new(params: JltParams) -> Result<Self> {
        let family = NeckFamily::new(params.inner.clone())?;
        Ok(Self { params, family })
    }

    pub fn params(&self) -> &JltParams {
        &self.params
    }

    pub fn family(&self) -> &NeckFamily {
        &self.family
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn angles(&self) -> Result<JltAngles> {
        let phis = AngleVector::new(self.family.phis().to_vec())?;
        let area = closed_form_invariant(phis.sum(), self.alpha());
        Ok(JltAngles { phis, area })
    }

    /// Phase from the closed formula, on the branch vanishing as `y -> -inf`.
    pub fn theta(&self, y: f64) -> Result<f64> {
        Ok(self.family.phase_formula(&self.family.profile(y)?))
    }

    /// Analytic `d theta / dy`.
    pub fn theta_prime(&self, y: f64) -> f64 {
        self.family.phase_derivative(y)
    }

    /// `(theta(-inf), theta(+inf))`.
    pub fn theta_limits(&self) -> Result<(f64, f64)> {
        Ok((self.theta(-LIMIT_Y)?, self.theta(LIMIT_Y)?))
    }
}

/// `(pi - sum phi) / (2 alpha)`.
pub fn closed_form_invariant(phi_sum: f64, alpha: f64) -> f64 {
    (PI - phi_sum) / (2.0 * alpha)
}

/// `((m - 1) pi - sum phi~) / (2 alpha)` for a tilde expander with angles `phi~`.
pub fn tilde_closed_form_invariant(phi_sum: f64, m: usize, alpha: f64) -> f64 {
    ((m as f64 - 1.0) * PI - phi_sum) / (2.0 * alpha)
}

/// `P(x)`, computed through `ln P` so it is finite wherever the value is.
pub fn jlt_p(params: &JltParams, x: f64) -> f64 {
    params.inner.p(x)
}

pub fn jlt_angles(params: &JltParams) -> Result<JltAngles> {
    JltExpander::new(params.clone())?.angles()
}

/// Point, orthonormal frame, phase (lifted from the `Pi_0` end) and potential
/// `f = -theta / (2 alpha)`.
pub fn jlt_point(exp: &JltExpander, pt: &NeckPoint) -> Result<LagrangianSample> {
    let s = exp.family.sample(pt.y, &pt.x)?;
    Ok(LagrangianSample {
        point: s.point,
        frame: s.frame,
        theta: s.theta,
        potential: cm::expander_potential(s.theta, exp.alpha()),
    })
}

/// The integrated Liouville primitive `int_{-inf}^y lambda(d/dy)` at `y`, computed
/// independently of the phase.
pub fn jlt_integrated_potential(exp: &JltExpander, y: f64) -> Result<f64> {
    Ok(exp.family.profile(y)?.liouville)
}

/// `|theta' + 2 alpha lambda_p(v)|` for a curve through `p` with velocity `v` and
/// phase derivative `theta'`.
pub fn expander_residual_at(
    alpha: f64,
    theta_prime: f64,
    point: &[Complex64],
    tangent: &[Complex64],
) -> Result<f64> {
    Ok((theta_prime + 2.0 * alpha * cm::liouville_form(point, tangent)?).abs())
}

/// Expander residual at `(y, x)`, with the analytic phase derivative and the
/// Liouville form evaluated on the actual tangent `d/dy`.
pub fn jlt_expander_residual_at(exp: &JltExpander, pt: &NeckPoint) -> Result<f64> {
    let s = exp.family.sample(pt.y, &pt.x)?;
    expander_residual_at(
        exp.alpha(),
        exp.theta_prime(pt.y),
        s.point.coords(),
        &s.tangent_y,
    )
}

/// Expander residual on the diagonal curve `x = (1, ..., 1) / sqrt m`.
pub fn jlt_expander_residual(exp: &JltExpander, y: f64) -> Result<f64> {
    let m = exp.params.m();
    let x = alloc::vec![1.0 / (m as f64).sqrt(); m];
    jlt_expander_residual_at(exp, &NeckPoint { y, x })
}

/// Closed form and `f(+inf) - f(-inf)` from the potential `-theta / (2 alpha)`.
pub fn jlt_invariant_a(exp: &JltExpander) -> Result<JltInvariant> {
    let (lo, hi) = exp.theta_limits()?;
    let alpha = exp.alpha();
    Ok(JltInvariant {
        closed_form: closed_form_invariant(exp.family.phi_sum(), alpha),
        potential_limit: cm::expander_potential(hi, alpha) - cm::expander_potential(lo, alpha),
    })
}

/// Like [`jlt_invariant_a`] but fails when the two computations disagree.
pub fn jlt_invariant_checked(exp: &JltExpander) -> Result<f64> {
    let inv = jlt_invariant_a(exp)?;
    if inv.discrepancy() > INVARIANT_TOL {
        return Err(Error::InconsistentPotential {
            residual: inv.discrepancy(),
        });
    }
    Ok(inv.closed_form)
}

/// `diag(e^{i phi~}) L^alpha_{pi - phi~}` with `phi~ = pi - phi(a)`; angle sum in
/// `((m - 1) pi, m pi)` and invariant `-A(L^alpha_phi) < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JltTilde {
    base: JltExpander,
    phis: Vec<f64>,
    base_area: f64,
}

impl JltTilde {
    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn phi_sum(&self) -> f64 {
        self.phis.iter().sum()
    }

    pub fn base(&self) -> &JltExpander {
        &self.base
    }

    pub fn invariant(&self) -> f64 {
        tilde_closed_form_invariant(self.phi_sum(), self.phis.len(), self.base.alpha())
    }

    /// Rotated base sample, graded so that `theta~ -> 0` on the `Pi_0` end; the
    /// potential is again `-theta~ / (2 alpha)`.
    pub fn point(&self, pt: &NeckPoint) -> Result<LagrangianSample> {
        let m = self.phis.len() as f64;
        let base = jlt_point(&self.base, pt)?;
        neck::rotate_sample(
            &base,
            &self.phis,
            self.phi_sum() - (m - 1.0) * PI,
            -self.base_area,
        )
    }
}

pub fn jlt_tilde(params: &JltParams) -> Result<JltTilde> {
    let base = JltExpander::new(params.clone())?;
    let phis = base.family.phis().iter().map(|p| PI - p).collect();
    let base_area = closed_form_invariant(base.family.phi_sum(), base.alpha());
    Ok(JltTilde {
        base,
        phis,
        base_area,
    })
}

/// Recovers `a` with `phi(a) = target` at fixed `alpha`.
pub fn jlt_invert(alpha: f64, target: &AngleVector) -> Result<(JltParams, NewtonReport)> {
    let phis = target.phis();
    neck::check_angle_domain(phis)?;
    if !(target.sum() < PI) {
        return Err(Error::Precondition(alloc::format!(
            "expander angles must satisfy 0 < sum < pi (sum = {})",
            target.sum()
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "alpha must be positive (got {alpha})"
        )));
    }
    let forward = |a: &[f64]| -> Result<Vec<f64>> {
        Ok(NeckFamily::new(NeckParams::new(a.to_vec(), alpha)?)?
            .phis()
            .to_vec())
    };
    let init = neck::initial_guess(phis, forward)?;
    let residual = |a: &[f64]| -> Result<Vec<f64>> {
        let p = forward(a)?;
        Ok(p.iter().zip(phis).map(|(g, t)| g - t).collect())
    };
    let report = neck::newton_with_restarts(residual, &init)?;
    Ok((JltParams::new(report.a.clone(), alpha)?, report))
}
