//! Lawlor necks `L_{phi,A}`: the special Lagrangian members (`alpha = 0`) of the
//! neck families, asymptotic to `Pi_0` as `y -> -inf` and to `Pi_phi` as
//! `y -> +inf`, with `phi_1 + ... + phi_m = pi`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cm::AngleVector;
use crate::error::{Error, Result};
use crate::neck::{self, LagrangianSample, NeckFamily, NeckParams, NeckPoint, NewtonReport};

/// `y` used for the potential limits; the neglected tail of the potential is
/// `O(|y|^{2-m})`.
const LIMIT_Y: f64 = 1e12;

/// Positive parameters `a_1, ..., a_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LawlorParams {
    inner: NeckParams,
}

impl LawlorParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        Ok(Self {
            inner: NeckParams::new(a, 0.0)?,
        })
    }

    pub fn m(&self) -> usize {
        self.inner.m()
    }

    pub fn a(&self) -> &[f64] {
        self.inner.a()
    }

    pub fn as_neck(&self) -> &NeckParams {
        &self.inner
    }
}

/// Angles `phi` (summing to `pi`) and invariant `A > 0` of a Lawlor neck.
#[derive(Debug, Clone, PartialEq)]
pub struct LawlorAngles {
    pub phis: AngleVector,
    pub area: f64,
}

/// A Lawlor neck with tabulated profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct LawlorNeck {
    params: LawlorParams,
    family: NeckFamily,
}

impl LawlorNeck {
    pub fn new(params: LawlorParams) -> Result<Self> {
        let family = NeckFamily::new(params.inner.clone())?;
        Ok(Self { params, family })
    }

    pub fn params(&self) -> &LawlorParams {
        &self.params
    }

    pub fn family(&self) -> &NeckFamily {
        &self.family
    }

    pub fn angles(&self) -> Result<LawlorAngles> {
        Ok(LawlorAngles {
            phis: AngleVector::new(self.family.phis().to_vec())?,
            area: self.family.liouville_total(),
        })
    }

    /// Potential `f(y) = int_{-inf}^y dx / (2 sqrt P)`.
    pub fn potential(&self, y: f64) -> Result<f64> {
        Ok(self.family.profile(y)?.liouville)
    }
}

/// `P(x) = (prod_k (1 + a_k x^2) - 1) / x^2`, with `P(0) = sum a_k`.
pub fn lawlor_p(params: &LawlorParams, x: f64) -> f64 {
    params.inner.p(x)
}

/// `phi_k = a_k int_R dx / ((1 + a_k x^2) sqrt P)` and `A = int_R dx / (2 sqrt P)`.
pub fn lawlor_angles(params: &LawlorParams) -> Result<LawlorAngles> {
    LawlorNeck::new(params.clone())?.angles()
}

/// `(z_k(y), psi_k(y))`.
pub fn lawlor_profile(neck: &LawlorNeck, y: f64) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let profile = neck.family.profile(y)?;
    Ok((neck.family.z(&profile), profile.psi))
}

/// Point, oriented orthonormal frame, phase and potential at `(y, x)`.
pub fn lawlor_point(neck: &LawlorNeck, pt: &NeckPoint) -> Result<LagrangianSample> {
    let s = neck.family.sample(pt.y, &pt.x)?;
    Ok(LagrangianSample {
        point: s.point,
        frame: s.frame,
        theta: s.theta,
        potential: s.liouville,
    })
}

/// `A(L) = lim_{y -> +inf} f - lim_{y -> -inf} f`, from the potential evaluated far
/// out on both ends.
pub fn lawlor_invariant_a(neck: &LawlorNeck) -> Result<f64> {
    Ok(neck.potential(LIMIT_Y)? - neck.potential(-LIMIT_Y)?)
}

/// `int_R lambda(d/dy) dy` evaluated on the actual curve through `x`; equals
/// `A(L)` for every unit `x`.
pub fn lawlor_liouville_integral(neck: &LawlorNeck, x: &[f64]) -> Result<f64> {
    neck::liouville_along_curve(&neck.family, x)
}

/// `diag(e^{i phi~_k}) L_{pi - phi~, A}`, where `phi~ = pi - phi(a)`: a special
/// Lagrangian asymptotic to `Pi_{phi~}` as `y -> -inf` and to `Pi_0` as
/// `y -> +inf`, with angle sum `(m - 1) pi` and invariant `-A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LawlorTilde {
    base: LawlorNeck,
    phis: Vec<f64>,
    base_area: f64,
}

impl LawlorTilde {
    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn phi_sum(&self) -> f64 {
        self.phis.iter().sum()
    }

    pub fn base(&self) -> &LawlorNeck {
        &self.base
    }

    pub fn invariant(&self) -> f64 {
        -self.base_area
    }

    /// The rotated base sample, graded so the phase vanishes and normalised so the
    /// potential tends to 0 on the `Pi_0` end.
    pub fn point(&self, pt: &NeckPoint) -> Result<LagrangianSample> {
        let m = self.base.params.m() as f64;
        let base = lawlor_point(&self.base, pt)?;
        neck::rotate_sample(
            &base,
            &self.phis,
            self.phi_sum() - (m - 1.0) * PI,
            -self.base_area,
        )
    }
}

pub fn lawlor_tilde(params: &LawlorParams) -> Result<LawlorTilde> {
    let base = LawlorNeck::new(params.clone())?;
    let phis = base.family.phis().iter().map(|p| PI - p).collect();
    let base_area = base.family.liouville_total();
    Ok(LawlorTilde {
        base,
        phis,
        base_area,
    })
}

/// Recovers `a` from `(phi, A)` by damped Newton in `log a`.
pub fn lawlor_invert(target: &LawlorAngles) -> Result<(LawlorParams, NewtonReport)> {
    let phis = target.phis.phis();
    neck::check_angle_domain(phis)?;
    let m = phis.len();
    if (target.phis.sum() - PI).abs() > 1e-6 {
        return Err(Error::Precondition(alloc::format!(
            "Lawlor angles must sum to pi (sum = {})",
            target.phis.sum()
        )));
    }
    if !(target.area > 0.0 && target.area.is_finite()) {
        return Err(Error::Precondition(alloc::format!(
            "A must be positive (got {})",
            target.area
        )));
    }
    let forward = |a: &[f64]| -> Result<(Vec<f64>, f64)> {
        let fam = NeckFamily::new(NeckParams::new(a.to_vec(), 0.0)?)?;
        Ok((fam.phis().to_vec(), fam.liouville_total()))
    };
    let mut init = neck::initial_guess(phis, |a| forward(a).map(|r| r.0))?;
    // Angles are invariant under a -> t a while A -> A / t.
    let (_, area) = forward(&init)?;
    let t = area / target.area;
    for v in &mut init {
        *v *= t;
    }
    let ln_target = target.area.ln();
    let residual = |a: &[f64]| -> Result<Vec<f64>> {
        let (p, area) = forward(a)?;
        let mut r: Vec<f64> = (0..m - 1).map(|k| p[k] - phis[k]).collect();
        r.push(area.ln() - ln_target);
        Ok(r)
    };
    let report = neck::newton_with_restarts(residual, &init)?;
    Ok((LawlorParams::new(report.a.clone())?, report))
}
