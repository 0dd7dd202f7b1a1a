//! Charts for the plumbing `T*S^m # T*S^m` in which asymptotically conical
//! Lagrangians with cone `Pi_0 u Pi_phi` close up: Darboux coordinates adapted to
//! the plane pair, the sphere chart near `infinity_0`, the modified Liouville form
//! `lambda~ = lambda + dh` and compactified potentials.

use alloc::vec::Vec;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cm::{AngleVector, CmPoint};
use crate::error::{Error, Result};
use crate::lawlor::LawlorNeck;

pub const DEFAULT_CUTOFF: f64 = 100.0;

/// `1/r~` above which `r = sqrt(e^{1/r~} - 1)` overflows.
const MAX_INV_R_TILDE: f64 = 1400.0;

/// The transition function `eta`: `-1` on `(-inf, -2T]`, `0` on `[-T, T]`, `1` on
/// `[2T, inf)`, joined by a quintic smoothstep (so `eta` is `C^2` with
/// `|eta'| <= 15 / (8 T)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaProfile {
    t: f64,
}

impl EtaProfile {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "cutoff T = {t} must be positive"
            )));
        }
        Ok(Self { t })
    }

    pub fn cutoff(&self) -> f64 {
        self.t
    }

    fn ramp(&self, s: f64) -> (f64, f64) {
        let u = ((s.abs() - self.t) / self.t).clamp(0.0, 1.0);
        let v = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
        let dv = 30.0 * u * u * (1.0 - u) * (1.0 - u) / self.t;
        (v, dv)
    }

    pub fn value(&self, s: f64) -> f64 {
        let (v, _) = self.ramp(s);
        if s < 0.0 {
            -v
        } else {
            v
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.ramp(s).1
    }
}

/// Darboux chart for the pair `(Pi_0, Pi_phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlumbingChart {
    phis: AngleVector,
    cot: Vec<f64>,
    eta: EtaProfile,
}

impl PlumbingChart {
    pub fn new(phis: AngleVector, cutoff: f64) -> Result<Self> {
        let eta = EtaProfile::new(cutoff)?;
        let cot = phis.phis().iter().map(|p| p.cos() / p.sin()).collect();
        Ok(Self { phis, cot, eta })
    }

    pub fn with_default_cutoff(phis: AngleVector) -> Result<Self> {
        Self::new(phis, DEFAULT_CUTOFF)
    }

    pub fn m(&self) -> usize {
        self.phis.dim()
    }

    pub fn phis(&self) -> &AngleVector {
        &self.phis
    }

    pub fn eta(&self) -> &EtaProfile {
        &self.eta
    }
}

/// Plumbing Darboux coordinates `(x, y)`; also used for tangent vectors
/// `(dx, dy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxCoords {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl DarbouxCoords {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        Ok(Self { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `sum x_j^2 - sum y_j^2`, the argument of `eta`.
    pub fn hyperbolic(&self) -> f64 {
        dot(&self.x, &self.x) - dot(&self.y, &self.y)
    }

    fn axpy(&self, s: f64, v: &DarbouxCoords) -> DarbouxCoords {
        DarbouxCoords {
            x: self.x.iter().zip(&v.x).map(|(a, b)| a + s * b).collect(),
            y: self.y.iter().zip(&v.y).map(|(a, b)| a + s * b).collect(),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `x_j = Re z_j - cot(phi_j) Im z_j`, `y_j = Im z_j`. The map is real-linear, so it
/// applies to tangent vectors as well as points.
pub fn darboux_vector(chart: &PlumbingChart, v: &[Complex64]) -> Result<DarbouxCoords> {
    if v.len() != chart.m() {
        return Err(Error::DimensionMismatch {
            expected: chart.m(),
            got: v.len(),
        });
    }
    Ok(DarbouxCoords {
        x: v.iter()
            .zip(&chart.cot)
            .map(|(z, c)| z.re - c * z.im)
            .collect(),
        y: v.iter().map(|z| z.im).collect(),
    })
}

pub fn to_darboux(chart: &PlumbingChart, p: &CmPoint) -> Result<DarbouxCoords> {
    darboux_vector(chart, p.coords())
}

pub fn from_darboux(chart: &PlumbingChart, d: &DarbouxCoords) -> Result<CmPoint> {
    if d.dim() != chart.m() {
        return Err(Error::DimensionMismatch {
            expected: chart.m(),
            got: d.dim(),
        });
    }
    let z =
        d.x.iter()
            .zip(&d.y)
            .zip(&chart.cot)
            .map(|((x, y), c)| Complex64::new(x + c * y, *y))
            .collect();
    CmPoint::new(z)
}

/// `sum_j dx_j ^ dy_j (u, v)`.
pub fn darboux_omega(u: &DarbouxCoords, v: &DarbouxCoords) -> f64 {
    dot(&u.x, &v.y) - dot(&v.x, &u.y)
}

/// `h = -1/2 eta(sum x^2 - sum y^2) sum x_j y_j`.
pub fn plumbing_h(chart: &PlumbingChart, p: &DarbouxCoords) -> f64 {
    -0.5 * chart.eta.value(p.hyperbolic()) * dot(&p.x, &p.y)
}

/// `lambda = 1/2 sum (x_j dy_j - y_j dx_j)` at `p`, applied to `v`. In these
/// coordinates it coincides with the standard Liouville form of `C^m`.
pub fn darboux_liouville(p: &DarbouxCoords, v: &DarbouxCoords) -> f64 {
    0.5 * (dot(&p.x, &v.y) - dot(&p.y, &v.x))
}

/// `(lambda + dh)_p(v)`.
pub fn liouville_tilde(chart: &PlumbingChart, p: &DarbouxCoords, v: &DarbouxCoords) -> Result<f64> {
    if p.dim() != chart.m() || v.dim() != chart.m() {
        return Err(Error::DimensionMismatch {
            expected: chart.m(),
            got: if p.dim() != chart.m() {
                p.dim()
            } else {
                v.dim()
            },
        });
    }
    let q = p.hyperbolic();
    let (eta, deta) = (chart.eta.value(q), chart.eta.derivative(q));
    let xy = dot(&p.x, &p.y);
    let dq = 2.0 * (dot(&p.x, &v.x) - dot(&p.y, &v.y));
    let dxy = dot(&v.x, &p.y) + dot(&p.x, &v.y);
    let dh = -0.5 * (deta * dq * xy + eta * dxy);
    Ok(darboux_liouville(p, v) + dh)
}

/// Which of the three forms `lambda~` takes at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaRegion {
    /// `|sum x^2 - sum y^2| <= T`: `lambda~ = lambda`.
    Standard,
    /// `sum x^2 - sum y^2 >= 2T`: `lambda~ = -sum y_j dx_j`.
    NearZeroSection,
    /// `sum x^2 - sum y^2 <= -2T`: `lambda~ = sum x_j dy_j`.
    NearPhiSection,
    Transition,
}

pub fn eta_region(chart: &PlumbingChart, p: &DarbouxCoords) -> EtaRegion {
    let q = p.hyperbolic();
    let t = chart.eta.cutoff();
    if q.abs() <= t {
        EtaRegion::Standard
    } else if q >= 2.0 * t {
        EtaRegion::NearZeroSection
    } else if q <= -2.0 * t {
        EtaRegion::NearPhiSection
    } else {
        EtaRegion::Transition
    }
}

/// `d lambda~ (u, v)` by fourth-order central differences of `p -> lambda~_p(v)`
/// along `u` and of `p -> lambda~_p(u)` along `v`.
pub fn d_liouville_tilde(
    chart: &PlumbingChart,
    p: &DarbouxCoords,
    u: &DarbouxCoords,
    v: &DarbouxCoords,
    step: f64,
) -> Result<f64> {
    let directional = |dir: &DarbouxCoords, arg: &DarbouxCoords| -> Result<f64> {
        let at = |s: f64| liouville_tilde(chart, &p.axpy(s, dir), arg);
        Ok((8.0 * (at(step)? - at(-step)?) - (at(2.0 * step)? - at(-2.0 * step)?)) / (12.0 * step))
    };
    Ok(directional(u, v)? - directional(v, u)?)
}

/// A point of the compactified zero section: either a finite point of the sphere
/// chart or the adjoined point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum SpherePoint {
    Finite(Vec<f64>),
    InfinityZero,
}

/// `x~ = F(r) x / r` with `F(r) = 1 / log(1 + r^2)`.
pub fn sphere_chart(x: &[f64]) -> Result<Vec<f64>> {
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::ExcludedOrigin);
    }
    let f = 1.0 / (r * r).ln_1p();
    Ok(x.iter().map(|v| f * v / r).collect())
}

/// Chart image of a compactified point; `infinity_0` sits at `x~ = 0`.
pub fn sphere_chart_point(p: &SpherePoint, m: usize) -> Result<Vec<f64>> {
    match p {
        SpherePoint::Finite(x) => sphere_chart(x),
        SpherePoint::InfinityZero => Ok(alloc::vec![0.0; m]),
    }
}

/// Inverse chart, `r = sqrt(e^{1/r~} - 1)`.
///
/// Points with `1/r~` beyond `MAX_INV_R_TILDE` have radii outside the `f64` range
/// and are rejected.
pub fn sphere_chart_inverse(xt: &[f64]) -> Result<SpherePoint> {
    let rt = norm(xt);
    if rt == 0.0 {
        return Ok(SpherePoint::InfinityZero);
    }
    if 1.0 / rt > MAX_INV_R_TILDE {
        return Err(Error::InvalidParameter(alloc::format!(
            "chart radius {rt:e} corresponds to r beyond the f64 range"
        )));
    }
    let r = (1.0 / rt).exp_m1().sqrt();
    Ok(SpherePoint::Finite(xt.iter().map(|v| r * v / rt).collect()))
}

/// `f~(x~) = f(x)` for a field decaying like `r^rho`, extended by `f~(0) = 0`.
pub fn compactified_graph_value(
    f: &impl crate::graphs::ScalarField,
    rho: f64,
    xt: &[f64],
) -> Result<f64> {
    if !(rho < 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "decay rate rho = {rho} must be negative for f~ to extend over infinity_0"
        )));
    }
    match sphere_chart_inverse(xt)? {
        SpherePoint::InfinityZero => Ok(0.0),
        SpherePoint::Finite(x) => f.value(&x),
    }
}

/// Which kind of point of the compactified Lagrangian a potential is requested at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactPoint {
    Interior,
    InfinityZero,
    InfinityPhi,
}

/// `f_L + h` at interior points, `0` at `infinity_0` and `A(L)` at `infinity_phi`.
pub fn compactified_potential(f_l: f64, h: f64, which: CompactPoint, area: f64) -> f64 {
    match which {
        CompactPoint::Interior => f_l + h,
        CompactPoint::InfinityZero => 0.0,
        CompactPoint::InfinityPhi => area,
    }
}

/// The Lawlor neck near its `Pi_0` end as a graph `Gamma_df` over `Pi_0`: at the
/// point `X + iY` of the neck, `f(X) = X.Y / 2 - f_L`, normalised so that `f -> 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    pub base: Vec<f64>,
    pub value: f64,
}

pub fn lawlor_graph_sample(neck: &LawlorNeck, y: f64, direction: &[f64]) -> Result<GraphSample> {
    let m = neck.params().m();
    if direction.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: direction.len(),
        });
    }
    let profile = neck.family().profile(y)?;
    let z = neck.family().z(&profile);
    let base: Vec<f64> = z.iter().zip(direction).map(|(w, d)| d * w.re).collect();
    let fibre: Vec<f64> = z.iter().zip(direction).map(|(w, d)| d * w.im).collect();
    Ok(GraphSample {
        value: 0.5 * dot(&base, &fibre) - profile.liouville,
        base,
    })
}

/// Compactified graph value and its finite-difference derivative along the neck,
/// at one chart radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySample {
    pub r_tilde: f64,
    pub value: f64,
    pub slope: f64,
}

fn r_tilde_of(neck: &LawlorNeck, y: f64, direction: &[f64]) -> Result<(f64, f64)> {
    let s = lawlor_graph_sample(neck, y, direction)?;
    Ok((1.0 / dot(&s.base, &s.base).ln_1p(), s.value))
}

/// Samples `f~` for the Lawlor neck along the curve through `direction` (a unit
/// vector) at the requested chart radii, with `slope = d f~ / d r~` from a central
/// difference along the curve.
pub fn lawlor_graph_decay(
    neck: &LawlorNeck,
    direction: &[f64],
    r_tildes: &[f64],
) -> Result<Vec<DecaySample>> {
    let mut out = Vec::with_capacity(r_tildes.len());
    for &rt in r_tildes {
        if !(rt > 0.0 && 1.0 / rt < MAX_INV_R_TILDE) {
            return Err(Error::InvalidParameter(alloc::format!(
                "chart radius {rt} out of range"
            )));
        }
        let target = (1.0 / rt).exp_m1().sqrt();
        // |X(y)| grows like |y| on the Pi_0 end, y -> -inf.
        let (mut lo, mut hi) = (-4.0 * target - 10.0, 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s = lawlor_graph_sample(neck, mid, direction)?;
            if norm(&s.base) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * lo.abs() {
                break;
            }
        }
        let y = 0.5 * (lo + hi);
        let (_, value) = r_tilde_of(neck, y, direction)?;
        let dy = 1e-3 * y.abs();
        let (rp, fp) = r_tilde_of(neck, y + dy, direction)?;
        let (rm, fm) = r_tilde_of(neck, y - dy, direction)?;
        out.push(DecaySample {
            r_tilde: rt,
            value,
            slope: (fp - fm) / (rp - rm),
        });
    }
    Ok(out)
}

/// Whether `|f~|` and `|d f~ / d r~|` strictly decrease as `r~` decreases.
pub fn decays_monotonically(samples: &[DecaySample]) -> bool {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.r_tilde.total_cmp(&a.r_tilde));
    sorted
        .windows(2)
        .all(|w| w[1].value.abs() < w[0].value.abs() && w[1].slope.abs() < w[0].slope.abs())
}
