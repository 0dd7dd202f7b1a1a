//! Globally adaptive 10/21-point Gauss-Kronrod quadrature on finite intervals, for
//! scalar and small vector-valued integrands.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Stopping rule: converged when the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)` (componentwise for vector integrands).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn absolute(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 0.0,
            max_intervals: 4000,
        }
    }

    pub const fn relative(rel_tol: f64) -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol,
            max_intervals: 4000,
        }
    }

    pub const fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Vec<f64>,
    pub error: Vec<f64>,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    floor: Vec<f64>,
}

type PanelRule = (Vec<f64>, Vec<f64>, Vec<f64>);

/// Returns the Kronrod value, the error estimate and a rounding floor per component.
fn gk21<F>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> PanelRule
where
    F: FnMut(f64, &mut [f64]),
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    let mut absolute = vec![0.0; dim];
    f(c, buf);
    for d in 0..dim {
        kron[d] = WGK[10] * buf[d];
        absolute[d] = WGK[10] * buf[d].abs();
    }
    for (j, (&x, &wk)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = h * x;
        for s in [-1.0, 1.0] {
            f(c + s * dx, buf);
            for d in 0..dim {
                kron[d] += wk * buf[d];
                absolute[d] += wk * buf[d].abs();
                if j % 2 == 1 {
                    gauss[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    let mut err = vec![0.0; dim];
    let mut floor = vec![0.0; dim];
    for d in 0..dim {
        kron[d] *= h;
        gauss[d] *= h;
        // Rounding in the weighted sum limits what any subdivision can achieve.
        floor[d] = 50.0 * f64::EPSILON * (absolute[d] * h).abs();
        err[d] = (kron[d] - gauss[d]).abs().max(floor[d]);
    }
    (kron, err, floor)
}

/// Integrates a vector-valued function `f(x, out)` over `[a, b]`.
///
/// The interval with the largest (normalised) error is bisected until every
/// component meets `tol`. Targets below the rounding floor of the rule are raised
/// to that floor.
pub fn integrate_vec<F>(mut f: F, dim: usize, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut buf = vec![0.0; dim];
    if a == b {
        return Ok(Estimate {
            value: vec![0.0; dim],
            error: vec![0.0; dim],
            intervals: 0,
        });
    }
    let (value, error, floor) = gk21(&mut f, a, b, dim, &mut buf);
    let mut panels = vec![Panel {
        a,
        b,
        value,
        error,
        floor,
    }];
    loop {
        let mut value = vec![0.0; dim];
        let mut error = vec![0.0; dim];
        let mut floor = vec![0.0; dim];
        for p in &panels {
            for d in 0..dim {
                value[d] += p.value[d];
                error[d] += p.error[d];
                floor[d] += p.floor[d];
            }
        }
        let target: Vec<f64> = value
            .iter()
            .zip(&floor)
            .map(|(v, fl)| tol.abs_tol.max(tol.rel_tol * v.abs()).max(2.0 * fl))
            .collect();
        let converged = error.iter().zip(&target).all(|(e, t)| e <= t);
        if converged {
            return Ok(Estimate {
                value,
                error,
                intervals: panels.len(),
            });
        }
        if panels.len() >= tol.max_intervals {
            let worst = error
                .iter()
                .zip(&target)
                .map(|(e, t)| e - t)
                .fold(f64::NEG_INFINITY, f64::max);
            return Err(Error::QuadratureFailed {
                error: worst,
                intervals: panels.len(),
            });
        }
        // Split the panel whose error is worst relative to the component targets.
        let score = |p: &Panel| -> f64 {
            p.error
                .iter()
                .zip(&target)
                .map(|(e, t)| {
                    if *t > 0.0 {
                        e / t
                    } else if *e > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max)
        };
        let (idx, _) = panels.iter().enumerate().map(|(i, p)| (i, score(p))).fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            return Err(Error::QuadratureFailed {
                error: p.error.iter().copied().fold(0.0, f64::max),
                intervals: panels.len() + 1,
            });
        }
        let (value, error, floor) = gk21(&mut f, p.a, mid, dim, &mut buf);
        panels.push(Panel {
            a: p.a,
            b: mid,
            value,
            error,
            floor,
        });
        let (value, error, floor) = gk21(&mut f, mid, p.b, dim, &mut buf);
        panels.push(Panel {
            a: mid,
            b: p.b,
            value,
            error,
            floor,
        });
    }
}

/// Scalar convenience wrapper around [`integrate_vec`]; returns `(value, error)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, a, b, tol)?;
    Ok((est.value[0], est.error[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate(
            |x| x.powi(5) - 3.0 * x * x,
            -1.0,
            2.0,
            Tolerance::absolute(1e-15),
        )
        .unwrap();
        assert!((v - (63.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let (v, _) = integrate(
            |x| 1.0 / (1e-4 + x * x),
            -1.0,
            1.0,
            Tolerance::absolute(1e-10),
        )
        .unwrap();
        let exact = 2.0 * (1.0 / 1e-4f64).sqrt() * (1.0 / 1e-2f64).atan();
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn relative_tolerance_resolves_tiny_values() {
        let (v, _) = integrate(|x| (-x * x).exp(), 8.0, 40.0, Tolerance::relative(1e-12)).unwrap();
        // erfc(8) * sqrt(pi) / 2
        let exact = 1.122_429_717_298_292_7e-29 * PI.sqrt() / 2.0;
        assert!(((v - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn vector_components() {
        let est = integrate_vec(
            |x, out: &mut [f64]| {
                out[0] = x.sin();
                out[1] = x.cos();
            },
            2,
            0.0,
            PI,
            Tolerance::absolute(1e-13),
        )
        .unwrap();
        assert!((est.value[0] - 2.0).abs() < 1e-13);
        assert!(est.value[1].abs() < 1e-13);
    }
}
