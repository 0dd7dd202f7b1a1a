//! Adaptive Dormand-Prince 5(4) integration for small first-order systems.

use alloc::vec::Vec;

// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step size.
    pub h0: f64,
    /// Steps are capped at `max_step_ratio * |t|` (0 disables the cap). Useful near
    /// a singular point at `t = 0`.
    pub max_step_ratio: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            h0: 1e-4,
            max_step_ratio: 0.0,
            max_steps: 200_000,
        }
    }
}

/// Accepted nodes `(t_i, y_i)` of an integration, starting with the initial value.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub nodes: Vec<(f64, [f64; N])>,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the 5th-order and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction).
pub fn dormand_prince<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: OdeOptions,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h0.abs().min((t_end - t0).abs()) * dir;
    let mut nodes = Vec::new();
    nodes.push((t, y));
    if t0 == t_end {
        return Ok(Trajectory { nodes });
    }
    let mut k1 = f(t, &y);
    let mut steps = 0;
    while (t_end - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::OdeFailed {
                t,
                reason: "maximum number of steps exceeded",
            });
        }
        if opts.max_step_ratio > 0.0 {
            let cap = opts.max_step_ratio * t.abs();
            if cap > 0.0 && h.abs() > cap {
                h = cap * dir;
            }
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() < 1e-14 * t.abs().max(1e-300) {
            return Err(Error::OdeFailed {
                t,
                reason: "step size underflow",
            });
        }
        let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        );
        let y_new = axpy(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = f(t + h, &y_new);
        let mut err_norm = 0.0_f64;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_norm = err_norm.max((e / sc).abs());
        }
        if !err_norm.is_finite() {
            h *= 0.25;
            continue;
        }
        if err_norm <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7;
            nodes.push((t, y));
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(Trajectory { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let traj = dormand_prince(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            10.0,
            OdeOptions::default(),
        )
        .unwrap();
        let (t, y) = *traj.nodes.last().unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - 10.0f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10.0f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let traj = dormand_prince(
            |_, y: &[f64; 1]| [y[0]],
            1.0,
            [1.0],
            0.0,
            OdeOptions::default(),
        )
        .unwrap();
        let (_, y) = *traj.nodes.last().unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-12);
    }
}
