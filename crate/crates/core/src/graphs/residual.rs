//! Residuals of the special Lagrangian and expander graph equations for `Gamma_df`,
//! and the inversion `f(x) = r^{2-m} F(x / r^2)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use super::field::{check_dim, norm, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ComplexLu};

/// Distance from the branch cut of `arg` below which the phase is not trusted.
pub const BRANCH_CUT_GUARD: f64 = 1e-6;

fn lu_of_graph(f: &impl ScalarField, x: &[f64]) -> Result<ComplexLu> {
    let m = f.dim();
    check_dim(m, x)?;
    let h = f.hessian(x)?;
    let data: Vec<Complex64> = (0..m * m)
        .map(|idx| {
            let diag = if idx / m == idx % m { 1.0 } else { 0.0 };
            Complex64::new(diag, h[idx])
        })
        .collect();
    Ok(CMatrix::from_row_major(m, data).lu())
}

/// `Im det_C(I + i Hess f)(x)`; zero exactly when `Gamma_df` is special Lagrangian
/// at `x`.
pub fn sl_graph_residual(f: &impl ScalarField, x: &[f64]) -> Result<f64> {
    Ok(lu_of_graph(f, x)?.det().im)
}

/// `arg det_C(I + i Hess f) - alpha (2 f - x . grad f) - c`, with the principal
/// argument accumulated from the LU pivots.
pub fn expander_graph_residual(f: &impl ScalarField, alpha: f64, c: f64, x: &[f64]) -> Result<f64> {
    let lu = lu_of_graph(f, x)?;
    let arg = lu.arg_det();
    let distance = PI - arg.abs();
    if distance < BRANCH_CUT_GUARD {
        return Err(Error::BranchCut { distance });
    }
    let g = f.gradient(x)?;
    let radial: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
    Ok(arg - alpha * (2.0 * f.value(x)? - radial) - c)
}

/// The linearised expander operator `Delta f + alpha (x . grad f - 2 f)` at `x`.
pub fn linearized_expander_residual(f: &impl ScalarField, alpha: f64, x: &[f64]) -> Result<f64> {
    let g = f.gradient(x)?;
    let radial: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
    Ok(f.laplacian(x)? + alpha * (radial - 2.0 * f.value(x)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionDirection {
    /// `F` on a ball to `f(x) = r^{2-m} F(x / r^2)` near infinity.
    Forward,
    /// `f` near infinity to `F(y) = s^{2-m} f(y / s^2)` on a punctured ball.
    Backward,
}

/// The inversion of a field; both directions use the same involutive formula.
pub struct Inversion<F> {
    inner: F,
    direction: InversionDirection,
}

impl<F> Inversion<F> {
    pub fn direction(&self) -> InversionDirection {
        self.direction
    }

    pub fn into_inner(self) -> F {
        self.inner
    }
}

pub fn inversion_transform<F: ScalarField>(
    field: F,
    direction: InversionDirection,
) -> Inversion<F> {
    Inversion {
        inner: field,
        direction,
    }
}

impl<F: ScalarField> ScalarField for Inversion<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let m = self.dim();
        check_dim(m, x)?;
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::ExcludedOrigin);
        }
        let r2 = r * r;
        let y: Vec<f64> = x.iter().map(|v| v / r2).collect();
        Ok(r.powi(2 - m as i32) * self.inner.value(&y)?)
    }

    fn fd_step(&self, x: &[f64]) -> f64 {
        // The field varies on the scale |x|, and the step must stay inside the
        // punctured domain.
        1e-3 * norm(x)
    }

    // Chain rule through the inner field's derivatives. Differencing the
    // composite directly loses about seven digits at large |x|.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (pre, _) = self.pieces(x)?;
        let m = x.len();
        Ok((0..m)
            .map(|i| pre.dg[i] * pre.value + pre.g * pre.df[i])
            .collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (pre, hf) = self.pieces(x)?;
        let m = x.len();
        let (p, r2) = (pre.p, pre.r2);
        let rp2 = pre.g / r2;
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let delta = if i == j { 1.0 } else { 0.0 };
                let d2g = p * rp2 * (delta + (p - 2.0) * x[i] * x[j] / r2);
                out[i * m + j] = d2g * pre.value
                    + pre.dg[i] * pre.df[j]
                    + pre.dg[j] * pre.df[i]
                    + pre.g * hf[i * m + j];
            }
        }
        Ok(out)
    }
}

/// Values and first derivatives at `x` of the pieces of `g(x) F(y(x))`, with
/// `g = r^p`, `p = 2 - m` and `y = x / r^2`.
struct InversionPieces {
    p: f64,
    r2: f64,
    g: f64,
    dg: Vec<f64>,
    value: f64,
    /// Gradient of `F(y(x))` with respect to `x`.
    df: Vec<f64>,
}

impl<F: ScalarField> Inversion<F> {
    /// The pieces together with the Hessian of `F(y(x))` with respect to `x`.
    fn pieces(&self, x: &[f64]) -> Result<(InversionPieces, Vec<f64>)> {
        let m = self.dim();
        check_dim(m, x)?;
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::ExcludedOrigin);
        }
        let r2 = r * r;
        let r4 = r2 * r2;
        let y: Vec<f64> = x.iter().map(|v| v / r2).collect();
        let p = 2.0 - m as f64;
        let g = r.powi(2 - m as i32);
        let dg: Vec<f64> = x.iter().map(|v| p * g / r2 * v).collect();
        let value = self.inner.value(&y)?;
        let gy = self.inner.gradient(&y)?;
        let hy = self.inner.hessian(&y)?;
        // jac[k * m + i] = d y_k / d x_i
        let mut jac = vec![0.0; m * m];
        for k in 0..m {
            for i in 0..m {
                let delta = if k == i { 1.0 } else { 0.0 };
                jac[k * m + i] = delta / r2 - 2.0 * x[k] * x[i] / r4;
            }
        }
        let df: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|k| gy[k] * jac[k * m + i]).sum())
            .collect();
        let r6 = r4 * r2;
        // Contracting d^2 y_k / dx_i dx_j with gy in closed form:
        // sum_k gy_k (-2 (d_ki x_j + d_kj x_i + x_k d_ij) / r^4 + 8 x_k x_i x_j / r^6).
        let gx: f64 = gy.iter().zip(x).map(|(a, b)| a * b).sum();
        let mut hf = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let mut quad = 0.0;
                for k in 0..m {
                    let mut row = 0.0;
                    for l in 0..m {
                        row += hy[k * m + l] * jac[l * m + j];
                    }
                    quad += jac[k * m + i] * row;
                }
                let delta = if i == j { 1.0 } else { 0.0 };
                let second = -2.0 * (gy[i] * x[j] + gy[j] * x[i] + gx * delta) / r4
                    + 8.0 * gx * x[i] * x[j] / r6;
                hf[i * m + j] = quad + second;
                hf[j * m + i] = quad + second;
            }
        }
        Ok((
            InversionPieces {
                p,
                r2,
                g,
                dg,
                value,
                df,
            },
            hf,
        ))
    }
}
