//! Flat structures on `C^m`: symplectic form, Liouville form, holomorphic volume
//! form, Lagrangian planes, characteristic angles and Maslov degrees.
//!
//! Conventions: `omega(u, v) = sum_j Im(conj(u_j) v_j)`,
//! `lambda = -1/2 Im sum_j z_j dzbar_j` (so `d lambda = omega`) and
//! `Omega = dz_1 ^ ... ^ dz_m`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Frames whose pairwise `omega` exceeds this (after normalising) are not Lagrangian.
pub const LAGRANGIAN_TOL: f64 = 1e-8;
/// Characteristic angles closer than this to 0 or pi make a pair non-transverse.
pub const TRANSVERSE_TOL: f64 = 1e-8;
/// Degree values further than this from an integer are rejected.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Tolerance for `f = -theta / (2 alpha)` in graded expander data.
pub const POTENTIAL_TOL: f64 = 1e-6;
/// Unitarity tolerance for plane representatives.
pub const UNITARY_TOL: f64 = 1e-12;

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// A point of `C^m`, `m >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmPoint {
    coords: Vec<Complex64>,
}

impl CmPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::UnsupportedDimension(coords.len()));
        }
        Ok(Self { coords })
    }

    pub fn origin(m: usize) -> Result<Self> {
        Self::new(alloc::vec![Complex64::new(0.0, 0.0); m])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Euclidean radius `r = |z|`.
    pub fn radius(&self) -> f64 {
        linalg::complex_norm(&self.coords)
    }
}

/// `m` real-linearly independent tangent vectors at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    pub base: CmPoint,
    pub vectors: Vec<Vec<Complex64>>,
}

impl TangentFrame {
    pub fn new(base: CmPoint, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = base.dim();
        check_dim(m, vectors.len())?;
        for v in &vectors {
            check_dim(m, v.len())?;
        }
        Ok(Self { base, vectors })
    }

    /// The standard frame `e_1, ..., e_m` of `R^m` at `base`.
    pub fn standard(base: CmPoint) -> Self {
        let m = base.dim();
        let vectors = CMatrix::identity(m).columns();
        Self { base, vectors }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors)
    }

    /// Largest `|omega(e_i, e_j)| / (|e_i| |e_j|)` over pairs of frame vectors.
    pub fn lagrangian_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.vectors.len() {
            for j in i + 1..self.vectors.len() {
                let u = &self.vectors[i];
                let v = &self.vectors[j];
                let scale = linalg::complex_norm(u) * linalg::complex_norm(v);
                if scale > 0.0 {
                    worst = worst.max(omega_unchecked(u, v).abs() / scale);
                }
            }
        }
        worst
    }

    /// Real Gram-Schmidt orthonormalisation; preserves orientation.
    pub fn orthonormalized(&self) -> Result<Self> {
        let vectors = linalg::gram_schmidt_real(&self.vectors).ok_or(Error::DegenerateFrame)?;
        Ok(Self {
            base: self.base.clone(),
            vectors,
        })
    }
}

/// A Lagrangian plane `U . R^m` stored through a unitary representative `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianPlane {
    unitary: CMatrix,
}

impl LagrangianPlane {
    pub fn new(unitary: CMatrix) -> Result<Self> {
        if unitary.dim() < 3 {
            return Err(Error::UnsupportedDimension(unitary.dim()));
        }
        let residual = unitary.unitarity_defect();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { unitary })
    }

    /// `Pi_0 = R^m`.
    pub fn real(m: usize) -> Result<Self> {
        Self::new(CMatrix::identity(m))
    }

    /// `Pi_phi = {(e^{i phi_1} x_1, ..., e^{i phi_m} x_m)}`.
    pub fn from_angles(phis: &[f64]) -> Result<Self> {
        Self::new(CMatrix::phase_diagonal(phis))
    }

    /// The span of a Lagrangian frame.
    pub fn from_frame(frame: &TangentFrame) -> Result<Self> {
        let residual = frame.lagrangian_residual();
        if residual > LAGRANGIAN_TOL {
            return Err(Error::NotLagrangian { residual });
        }
        let on = frame.orthonormalized()?;
        // An orthonormal Lagrangian frame is already unitary; project out the small
        // Lagrangian defect with a Hermitian Gram-Schmidt pass.
        let u = linalg::unitary_from_columns(&on.matrix()).ok_or(Error::DegenerateFrame)?;
        Self::new(u)
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    /// Left multiplication by a unitary matrix.
    pub fn rotated(&self, v: &CMatrix) -> Result<Self> {
        Self::new(v.mul(&self.unitary))
    }
}

/// Characteristic angles `0 < phi_1 <= ... <= phi_m < pi` and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector {
    phis: Vec<f64>,
    sum: f64,
}

impl AngleVector {
    pub fn new(phis: Vec<f64>) -> Result<Self> {
        if phis.len() < 3 {
            return Err(Error::UnsupportedDimension(phis.len()));
        }
        for &p in &phis {
            if !(p > 0.0 && p < PI) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "angle {p} is outside (0, pi)"
                )));
            }
        }
        let sum = phis.iter().sum();
        Ok(Self { phis, sum })
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn dim(&self) -> usize {
        self.phis.len()
    }

    /// Angles of the swapped pair: `pi - phi_k`, re-sorted.
    pub fn complement(&self) -> Self {
        let mut phis: Vec<f64> = self.phis.iter().map(|p| PI - p).collect();
        phis.sort_by(f64::total_cmp);
        let sum = phis.iter().sum();
        Self { phis, sum }
    }
}

/// Phase and potential values of `L` and `L'` at an intersection point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedPointPair {
    pub theta_l: f64,
    pub theta_lp: f64,
    pub f_l: f64,
    pub f_lp: f64,
}

impl GradedPointPair {
    pub fn new(theta_l: f64, theta_lp: f64, f_l: f64, f_lp: f64) -> Self {
        Self {
            theta_l,
            theta_lp,
            f_l,
            f_lp,
        }
    }

    /// The same intersection point seen from `(L', L)`.
    pub fn swapped(&self) -> Self {
        Self {
            theta_l: self.theta_lp,
            theta_lp: self.theta_l,
            f_l: self.f_lp,
            f_lp: self.f_l,
        }
    }
}

fn omega_unchecked(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a.conj() * b).im).sum()
}

/// `omega(u, v) = sum_j Im(conj(u_j) v_j)`.
pub fn symplectic_form(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    check_dim(u.len(), v.len())?;
    Ok(omega_unchecked(u, v))
}

/// `lambda_p(v) = -1/2 Im sum_j z_j conj(v_j)`.
pub fn liouville_form(p: &[Complex64], v: &[Complex64]) -> Result<f64> {
    check_dim(p.len(), v.len())?;
    Ok(-0.5 * p.iter().zip(v).map(|(z, w)| (z * w.conj()).im).sum::<f64>())
}

/// `Omega(e_1, ..., e_m) = det[e_1 | ... | e_m]`.
pub fn holomorphic_volume(frame: &TangentFrame) -> Result<Complex64> {
    linalg::gram_schmidt_real(&frame.vectors).ok_or(Error::DegenerateFrame)?;
    Ok(frame.matrix().det())
}

/// Phase `theta` with `Omega|_frame = e^{i theta} |Omega|_frame|`, lifted to the
/// branch nearest `branch_hint`.
pub fn phase_of_frame(frame: &TangentFrame, branch_hint: f64) -> Result<f64> {
    let residual = frame.lagrangian_residual();
    if residual > LAGRANGIAN_TOL {
        return Err(Error::NotLagrangian { residual });
    }
    let vol = holomorphic_volume(frame)?;
    Ok(linalg::nearest_branch(vol.arg(), branch_hint))
}

/// Lifts a sequence of principal phases to a continuous path starting near `start`.
///
/// Consecutive lifted values must differ by less than `pi / 2`; otherwise the path
/// is sampled too coarsely to lift unambiguously.
pub fn lift_phase_path(principal: &[f64], start: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(principal.len());
    let mut prev = start;
    for (i, &p) in principal.iter().enumerate() {
        let lifted = linalg::nearest_branch(p, prev);
        if i > 0 && (lifted - prev).abs() >= 0.5 * PI {
            return Err(Error::Precondition(alloc::format!(
                "phase jump {} at sample {i} is too large to lift",
                lifted - prev
            )));
        }
        out.push(lifted);
        prev = lifted;
    }
    Ok(out)
}

/// Characteristic angles of a transverse pair of Lagrangian planes.
///
/// With `W = U_A^H U_B`, the matrix `W W^T` is unitary and symmetric, so its real
/// and imaginary parts are commuting real symmetric matrices. A generic real
/// combination of them is diagonalised by a real orthogonal `Q`, whose columns
/// carry the eigenvalues `e^{2 i phi_k}`.
pub fn characteristic_angles(
    plane_a: &LagrangianPlane,
    plane_b: &LagrangianPlane,
) -> Result<AngleVector> {
    let m = plane_a.dim();
    check_dim(m, plane_b.dim())?;
    for p in [plane_a, plane_b] {
        let residual = p.unitary.unitarity_defect();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
    }
    let w = plane_a.unitary.adjoint().mul(&plane_b.unitary);
    let s = w.mul(&w.transpose());
    let x: Vec<f64> = (0..m * m).map(|idx| s[(idx / m, idx % m)].re).collect();
    let y: Vec<f64> = (0..m * m).map(|idx| s[(idx / m, idx % m)].im).collect();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for c in [
        0.618_033_988_749_894_9,
        -1.324_717_957_244_746,
        core::f64::consts::E,
        -0.414_213_562_373_095_1,
    ] {
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + c * b).collect();
        let (_, q) = linalg::symmetric_eigen(m, &combo);
        // D = Q^T S Q should be diagonal; measure its off-diagonal part.
        let mut d = CMatrix::zeros(m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    for l in 0..m {
                        acc += q[k * m + i] * s[(k, l)] * q[l * m + j];
                    }
                }
                d[(i, j)] = acc;
            }
        }
        let mut off = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    off = off.max(d[(i, j)].norm());
                }
            }
        }
        let diag: Vec<Complex64> = (0..m).map(|i| d[(i, i)]).collect();
        let better = match &best {
            None => true,
            Some((o, _)) => off < *o,
        };
        if better {
            best = Some((off, diag));
        }
        if off < 1e-12 {
            break;
        }
    }
    let (_, diag) = best.expect("at least one combination is tried");
    let mut phis: Vec<f64> = diag
        .iter()
        .map(|l| {
            let half = 0.5 * l.arg();
            if half < 0.0 {
                half + PI
            } else {
                half
            }
        })
        .collect();
    phis.sort_by(f64::total_cmp);
    for &p in &phis {
        if !(TRANSVERSE_TOL..=PI - TRANSVERSE_TOL).contains(&p) {
            return Err(Error::NotTransverse {
                angle: p,
                tol: TRANSVERSE_TOL,
            });
        }
    }
    AngleVector::new(phis)
}

/// Real-valued degree `(sum phi + theta_L - theta_L') / pi` before rounding.
pub fn degree_value(angles: &AngleVector, pair: &GradedPointPair) -> f64 {
    (angles.sum() + pair.theta_l - pair.theta_lp) / PI
}

/// Maslov degree of a transverse graded intersection point.
pub fn maslov_degree(angles: &AngleVector, pair: &GradedPointPair) -> Result<i64> {
    let value = degree_value(angles, pair);
    let rounded = value.round();
    if (value - rounded).abs() > INTEGRALITY_TOL || !value.is_finite() {
        return Err(Error::NonIntegralDegree { value });
    }
    Ok(rounded as i64)
}

/// The bounds `(theta_L - theta_L')/pi < mu < (theta_L - theta_L')/pi + m`, which
/// every degree satisfies because each angle lies in `(0, pi)`.
pub fn grading_window_holds(pair: &GradedPointPair, mu: i64, m: usize) -> bool {
    let lower = (pair.theta_l - pair.theta_lp) / PI;
    let mu = mu as f64;
    lower < mu && mu < lower + m as f64
}

/// Potential of a graded expander with `H = alpha F^perp` in terms of its phase:
/// `d theta = -2 alpha d f`, so `f = -theta / (2 alpha)`.
pub fn expander_potential(theta: f64, alpha: f64) -> f64 {
    -theta / (2.0 * alpha)
}

/// Degree window for special Lagrangian (`alpha = 0`) or expander (`alpha > 0`)
/// pairs.
///
/// For `alpha = 0` both phases vanish and the window is `0 < mu < m`. For
/// `alpha > 0` the potentials must satisfy `f = -theta / (2 alpha)`; the window is
/// then `(2 alpha / pi)(f_L' - f_L) < mu < (2 alpha / pi)(f_L' - f_L) + m`.
pub fn degree_window_check(pair: &GradedPointPair, mu: i64, alpha: f64, m: usize) -> Result<bool> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "alpha = {alpha} must be >= 0"
        )));
    }
    if m < 3 {
        return Err(Error::UnsupportedDimension(m));
    }
    let mu_f = mu as f64;
    if alpha == 0.0 {
        return Ok(0.0 < mu_f && mu_f < m as f64);
    }
    for (theta, f) in [(pair.theta_l, pair.f_l), (pair.theta_lp, pair.f_lp)] {
        let residual = (f - expander_potential(theta, alpha)).abs();
        if residual > POTENTIAL_TOL {
            return Err(Error::InconsistentPotential { residual });
        }
    }
    let lower = 2.0 * alpha / PI * (pair.f_lp - pair.f_l);
    Ok(lower < mu_f && mu_f < lower + m as f64)
}

/// Area of a strip from `p` to `q`: `f_L(q) - f_L(p) + f_L'(p) - f_L'(q)`.
pub fn strip_area(p: &GradedPointPair, q: &GradedPointPair) -> f64 {
    q.f_l - p.f_l + p.f_lp - q.f_lp
}
