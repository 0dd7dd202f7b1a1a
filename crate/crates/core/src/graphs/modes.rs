//! Radial modes of the linearised expander equation
//! `Delta f + alpha (x . grad f - 2 f) = 0` near infinity.
//!
//! Writing `f = r^beta e^{-alpha r^2 / 2} p_k(x / r) A(r^{-2})` with `p_k` harmonic and
//! homogeneous of degree `k` turns the equation into
//! `t [4 t^2 A'' + 2 (alpha + (m + 8) t) A' + (4 (m + 2) - k (m + k - 2)) A] - alpha (beta + m + 2) A = 0`,
//! so `beta = -(m + 2)` is the exponent for which `A` solves a second order ODE with
//! a regular solution at `t = 0`.

use alloc::vec;
use alloc::vec::Vec;

// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use super::field::{check_dim, norm, Polynomial, ScalarField};
use super::harmonic::harmonic_basis;
use crate::error::{Error, Result};
use crate::ode::{dormand_prince, OdeOptions};

/// Required agreement between the series and the integrated solution on `[t0, 2 t0]`.
pub const OVERLAP_TOL: f64 = 1e-8;
/// Slack allowed in the log-derivative bound.
pub const BOUND_SLACK: f64 = 1e-9;

const MAX_SERIES_TERMS: usize = 4000;
const MIN_T0: f64 = 1e-6;

/// `4 t^2 A'' + 2 (alpha + drift t) A' + (constant - k (m + k - 2)) A = 0`, the
/// radial equation paired with the field `r^radial_power e^{-alpha r^2/2} p_k(x/r) A(r^-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOde {
    pub m: usize,
    pub k: u32,
    pub alpha: f64,
    pub drift: f64,
    pub constant: f64,
    pub radial_power: f64,
}

impl ModeOde {
    /// The radial equation of the linearised expander operator.
    pub fn linearized_expander(m: usize, k: u32, alpha: f64) -> Result<Self> {
        Self::with_coefficients(
            m,
            k,
            alpha,
            m as f64 + 8.0,
            4.0 * (m as f64 + 2.0),
            -(m as f64) - 2.0,
        )
    }

    /// An arbitrary equation of the same shape, e.g. to measure how far another
    /// ansatz is from solving the linearised operator.
    pub fn with_coefficients(
        m: usize,
        k: u32,
        alpha: f64,
        drift: f64,
        constant: f64,
        radial_power: f64,
    ) -> Result<Self> {
        if m < 3 {
            return Err(Error::UnsupportedDimension(m));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha must be positive (got {alpha})"
            )));
        }
        Ok(Self {
            m,
            k,
            alpha,
            drift,
            constant,
            radial_power,
        })
    }

    /// `k (m + k - 2)`, the eigenvalue of `p_k` on the sphere.
    pub fn eigenvalue(&self) -> f64 {
        (self.k as f64) * (self.m as f64 + self.k as f64 - 2.0)
    }

    /// `A'(0) = (k (m + k - 2) - constant) / (2 alpha)`, from the equation at `t = 0`.
    pub fn c1(&self) -> f64 {
        (self.eigenvalue() - self.constant) / (2.0 * self.alpha)
    }

    /// Whether `A` is increasing with `0 <= A'/A <= c1`.
    pub fn is_growing(&self) -> bool {
        self.eigenvalue() > self.constant
    }

    /// `c_{l+1} = -c_l [4 l^2 + (2 drift - 4) l + constant - K] / (2 alpha (l + 1))`,
    /// from matching powers of `t` in the equation.
    pub fn next_coefficient(&self, l: usize, c_l: f64) -> f64 {
        let l = l as f64;
        let bracket =
            4.0 * l * l + (2.0 * self.drift - 4.0) * l + self.constant - self.eigenvalue();
        -c_l * bracket / (2.0 * self.alpha * (l + 1.0))
    }

    fn rhs(&self, t: f64, y: &[f64; 2]) -> [f64; 2] {
        let (a, da) = (y[0], y[1]);
        let dda = -(2.0 * (self.alpha + self.drift * t) * da
            + (self.constant - self.eigenvalue()) * a)
            / (4.0 * t * t);
        [da, dda]
    }
}

/// Partial sums of the asymptotic series at `t`, truncated before its smallest
/// term: `(A, A', size of the first omitted term)`.
fn series_eval(coeffs: &[f64], t: f64) -> (f64, f64, f64) {
    if t == 0.0 {
        return (coeffs[0], coeffs.get(1).copied().unwrap_or(0.0), 0.0);
    }
    let mut best = f64::INFINITY;
    let mut cut = coeffs.len();
    for (l, c) in coeffs.iter().enumerate() {
        let term = (c * t.powi(l as i32)).abs();
        if term < best {
            best = term;
            cut = l;
        } else if term > 2.0 * best && l > cut + 2 {
            break;
        }
        if *c == 0.0 && coeffs[l..].iter().all(|v| *v == 0.0) {
            cut = l;
            best = 0.0;
            break;
        }
    }
    let mut a = 0.0;
    let mut da = 0.0;
    for l in (0..cut).rev() {
        a = a * t + coeffs[l];
        if l > 0 {
            da = da * t + l as f64 * coeffs[l];
        }
    }
    (a, da, best)
}

/// The solution `A` with `A(0) = 1`: the asymptotic series near 0 and an adaptive
/// Runge-Kutta continuation on `[t0, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub ode: ModeOde,
    /// Taylor coefficients `c_0 = 1, c_1, ...` of the series at `t = 0`.
    pub coefficients: Vec<f64>,
    pub t0: f64,
    pub t_end: f64,
    /// Accepted `(t, [A, A'])` nodes on `[t0, t_end]`.
    pub nodes: Vec<(f64, [f64; 2])>,
    /// Largest series/integration disagreement on `[t0, 2 t0]`.
    pub overlap_error: f64,
}

impl RadialSolution {
    /// `(A(t), A'(t))`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= 0.0) || t > self.t_end * (1.0 + 1e-12) {
            return Err(Error::Precondition(alloc::format!(
                "t = {t} outside the solved range [0, {}]",
                self.t_end
            )));
        }
        if t <= self.t0 {
            let (a, da, _) = series_eval(&self.coefficients, t);
            return Ok((a, da));
        }
        let idx = self.nodes.partition_point(|n| n.0 < t);
        let i = if idx == 0 {
            0
        } else if idx >= self.nodes.len() {
            self.nodes.len() - 1
        } else if t - self.nodes[idx - 1].0 <= self.nodes[idx].0 - t {
            idx - 1
        } else {
            idx
        };
        Ok(self.local_taylor(i, t))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.0)
    }

    /// Taylor expansion about node `i`, whose radius of convergence is `t_i`.
    fn local_taylor(&self, i: usize, t: f64) -> (f64, f64) {
        let ode = &self.ode;
        let (ti, [a0, a1]) = self.nodes[i];
        let s = t - ti;
        let c = ode.constant - ode.eigenvalue();
        let (mut b0, mut b1) = (a0, a1);
        let mut value = a0 + a1 * s;
        let mut deriv = a1;
        let mut sp = s;
        let mut small = 0;
        for n in 0..200usize {
            let nf = n as f64;
            let b2 = -((8.0 * ti * nf * (nf + 1.0)
                + 2.0 * (ode.alpha + ode.drift * ti) * (nf + 1.0))
                * b1
                + (4.0 * nf * (nf - 1.0) + 2.0 * ode.drift * nf + c) * b0)
                / (4.0 * ti * ti * (nf + 1.0) * (nf + 2.0));
            // b2 multiplies s^{n+2}.
            deriv += (nf + 2.0) * b2 * sp;
            sp *= s;
            let term = b2 * sp;
            value += term;
            if term.abs() <= 1e-17 * value.abs().max(1e-300) {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            b0 = b1;
            b1 = b2;
        }
        (value, deriv)
    }
}

fn series_coefficients(ode: &ModeOde) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for l in 0..MAX_SERIES_TERMS {
        let next = ode.next_coefficient(l, coeffs[l]);
        coeffs.push(next);
        if next == 0.0 || !next.is_finite() {
            break;
        }
    }
    while coeffs.last().is_some_and(|c| !c.is_finite()) {
        coeffs.pop();
    }
    coeffs
}

/// Solves for `A` on `[0, t_end]`, starting the integration at
/// `t0 = min(0.01, alpha / 10)`, halved until the series is accurate on `[t0, 2 t0]`.
pub fn solve_ak(ode: ModeOde, t_end: f64) -> Result<RadialSolution> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "T must be positive (got {t_end})"
        )));
    }
    let coefficients = series_coefficients(&ode);
    let mut t0 = (0.01f64).min(ode.alpha / 10.0).min(t_end / 2.0);
    loop {
        let (a, _, omitted) = series_eval(&coefficients, 2.0 * t0);
        if omitted <= 1e-3 * OVERLAP_TOL * a.abs().max(1.0) {
            break;
        }
        t0 *= 0.5;
        if t0 < MIN_T0 {
            return Err(Error::SeriesDiverged {
                t0,
                smallest: omitted,
            });
        }
    }
    let (a0, da0, _) = series_eval(&coefficients, t0);
    let opts = OdeOptions {
        rtol: 1e-12,
        atol: 1e-15,
        h0: 0.01 * t0,
        max_step_ratio: 0.25,
        max_steps: 200_000,
    };
    let traj = dormand_prince(|t, y| ode.rhs(t, y), t0, [a0, da0], t_end, opts)?;
    let mut sol = RadialSolution {
        ode,
        coefficients,
        t0,
        t_end,
        nodes: traj.nodes,
        overlap_error: 0.0,
    };
    let mut worst = 0.0f64;
    for &(t, [a, _]) in sol.nodes.iter().filter(|n| n.0 <= 2.0 * t0) {
        let (s, _, _) = series_eval(&sol.coefficients, t);
        worst = worst.max((s - a).abs() / a.abs().max(1.0));
    }
    sol.overlap_error = worst;
    if worst > OVERLAP_TOL {
        return Err(Error::OdeFailed {
            t: 2.0 * t0,
            reason: "series and integration disagree on the overlap",
        });
    }
    Ok(sol)
}

/// Checks `0 <= A'/A <= (k (m + k - 2) - constant) / (2 alpha)` on a grid of `t`.
pub fn check_ak_log_derivative_bound(sol: &RadialSolution, grid: &[f64]) -> Result<bool> {
    let ode = &sol.ode;
    if !ode.is_growing() {
        return Err(Error::Precondition(alloc::format!(
            "bound needs k(m+k-2) > {} (got {})",
            ode.constant,
            ode.eigenvalue()
        )));
    }
    let bound = ode.c1();
    for &t in grid {
        let (a, da) = sol.eval(t)?;
        let ratio = da / a;
        if !(ratio >= -BOUND_SLACK && ratio <= bound + BOUND_SLACK * bound.max(1.0)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A harmonic polynomial `p_k` with its radial solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionMode {
    pub k: u32,
    pub poly: Polynomial,
    pub radial: RadialSolution,
}

impl ExpansionMode {
    pub fn new(poly: Polynomial, radial: RadialSolution) -> Result<Self> {
        let k = radial.ode.k;
        if poly.dim() != radial.ode.m {
            return Err(Error::DimensionMismatch {
                expected: radial.ode.m,
                got: poly.dim(),
            });
        }
        if poly.terms().iter().any(|(e, _)| e.iter().sum::<u32>() != k) {
            return Err(Error::InvalidParameter(alloc::format!(
                "polynomial is not homogeneous of degree {k}"
            )));
        }
        if poly.laplacian_poly().max_abs_coefficient() > 1e-9 * poly.max_abs_coefficient().max(1.0)
        {
            return Err(Error::InvalidParameter("polynomial is not harmonic".into()));
        }
        Ok(Self { k, poly, radial })
    }

    /// The `index`-th orthonormal harmonic of degree `k` with the linearised
    /// expander radial solution on `[0, t_end]`.
    pub fn linearized(m: usize, k: u32, alpha: f64, index: usize, t_end: f64) -> Result<Self> {
        let basis = harmonic_basis(m, k)?;
        let poly = basis.get(index).cloned().ok_or_else(|| {
            Error::InvalidParameter(alloc::format!(
                "degree {k} has only {} harmonics",
                basis.len()
            ))
        })?;
        Self::new(
            poly,
            solve_ak(ModeOde::linearized_expander(m, k, alpha)?, t_end)?,
        )
    }
}

/// `f(x) = r^beta e^{-alpha r^2 / 2} sum_k p_k(x / r) A_k(r^{-2})` over the modes, which
/// must share `m`, `alpha` and `beta`.
pub fn assemble_expansion(modes: &[ExpansionMode], x: &[f64]) -> Result<f64> {
    let Some(first) = modes.first() else {
        return Ok(0.0);
    };
    let ode = first.radial.ode;
    check_dim(ode.m, x)?;
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::ExcludedOrigin);
    }
    let y: Vec<f64> = x.iter().map(|v| v / r).collect();
    let t = 1.0 / (r * r);
    let mut sum = 0.0;
    for mode in modes {
        let o = &mode.radial.ode;
        if o.m != ode.m || o.alpha != ode.alpha || o.radial_power != ode.radial_power {
            return Err(Error::InvalidParameter(
                "modes must share m, alpha and the radial power".into(),
            ));
        }
        sum += mode.poly.eval(&y) * mode.radial.value(t)?;
    }
    Ok(r.powf(ode.radial_power) * (-0.5 * ode.alpha * r * r).exp() * sum)
}

/// [`assemble_expansion`] as a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub modes: Vec<ExpansionMode>,
    m: usize,
}

impl Expansion {
    pub fn new(m: usize, modes: Vec<ExpansionMode>) -> Self {
        Self { modes, m }
    }
}

impl ScalarField for Expansion {
    fn dim(&self) -> usize {
        self.m
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.m, x)?;
        assemble_expansion(&self.modes, x)
    }

    fn fd_step(&self, x: &[f64]) -> f64 {
        1e-3 * (1.0 + norm(x)).min(2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::FnField;
    use super::super::residual::linearized_expander_residual;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, m: usize, r: f64) -> Vec<f64> {
        let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&x);
        x.iter_mut().for_each(|v| *v *= r / n);
        x
    }

    #[test]
    fn ansatz_exponent_is_forced() {
        // With p_4 harmonic and A = 1 the field r^{-m-6} e^{-alpha r^2/2} p_4(x) solves
        // the linearised equation (A = 1 is the polynomial solution for k = 4), and
        // changing the radial power by one leaves an alpha-sized defect.
        let m = 3;
        let alpha = 0.8;
        let p4 = harmonic_basis(m, 4).unwrap().remove(2);
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for (power, should_vanish) in [(-(m as i32) - 6, true), (-(m as i32) - 5, false)] {
            let p = p4.clone();
            let f = FnField::new(m, move |x: &[f64]| {
                let r = norm(x);
                r.powi(power) * (-0.5 * alpha * r * r).exp() * p.eval(x)
            })
            .with_step(1e-3);
            let x = random_point(&mut rng, m, 2.5);
            let res = linearized_expander_residual(&f, alpha, &x).unwrap();
            let scale = f.value(&x).unwrap().abs();
            assert_eq!(
                res.abs() < 1e-7 * scale.max(1e-3),
                should_vanish,
                "power {power}: {res}"
            );
        }
    }

    #[test]
    fn series_start_and_c1() {
        for (m, k, alpha) in [(3usize, 0u32, 1.0), (3, 5, 1.0), (4, 2, 0.5), (5, 7, 2.0)] {
            let ode = ModeOde::linearized_expander(m, k, alpha).unwrap();
            let coeffs = series_coefficients(&ode);
            assert_eq!(coeffs[0], 1.0);
            let want = ((k * (m as u32 + k - 2)) as f64 - 4.0 * (m as f64 + 2.0)) / (2.0 * alpha);
            assert!((coeffs[1] - want).abs() < 1e-14 * want.abs().max(1.0));
            assert_eq!(ode.c1(), coeffs[1]);
        }
    }

    #[test]
    fn series_satisfies_the_equation_coefficientwise() {
        // Substitute the truncated series and collect powers of t directly.
        let ode = ModeOde::linearized_expander(4, 3, 0.7).unwrap();
        let c = series_coefficients(&ode);
        let n = 12;
        for l in 0..n {
            let mut coeff = 4.0 * (l as f64) * (l as f64 - 1.0) * c[l];
            coeff += 2.0 * ode.alpha * (l as f64 + 1.0) * c[l + 1];
            coeff += 2.0 * ode.drift * l as f64 * c[l];
            coeff += (ode.constant - ode.eigenvalue()) * c[l];
            assert!(coeff.abs() < 1e-10 * c[l].abs().max(c[l + 1].abs()).max(1.0));
        }
    }

    #[test]
    fn polynomial_cases_terminate() {
        // k = 4: A = 1; k = 6, m = 3: A is linear.
        let ode = ModeOde::linearized_expander(3, 4, 1.0).unwrap();
        assert_eq!(series_coefficients(&ode), vec![1.0, 0.0]);
        let sol = solve_ak(ode, 2.0).unwrap();
        assert!((sol.value(1.7).unwrap() - 1.0).abs() < 1e-12);
        let ode6 = ModeOde::linearized_expander(3, 6, 1.5).unwrap();
        let c = series_coefficients(&ode6);
        assert_eq!(c.len(), 3);
        let sol6 = solve_ak(ode6, 2.0).unwrap();
        assert!((sol6.value(1.3).unwrap() - (1.0 + c[1] * 1.3)).abs() < 1e-10);
    }

    #[test]
    fn overlap_agreement_across_parameters() {
        for m in 3..6 {
            for k in 0..9 {
                for alpha in [0.5, 1.0, 2.0] {
                    let sol =
                        solve_ak(ModeOde::linearized_expander(m, k, alpha).unwrap(), 1.0).unwrap();
                    assert!(sol.overlap_error < OVERLAP_TOL);
                    assert_eq!(sol.value(0.0).unwrap(), 1.0);
                }
            }
        }
    }

    #[test]
    fn dense_output_matches_nodes_and_the_equation() {
        let sol = solve_ak(ModeOde::linearized_expander(3, 5, 1.0).unwrap(), 2.0).unwrap();
        for &(t, [a, da]) in sol.nodes.iter().step_by(7) {
            let (v, d) = sol.eval(t).unwrap();
            assert!(
                (v - a).abs() < 1e-13 * a.abs().max(1.0)
                    && (d - da).abs() < 1e-12 * da.abs().max(1.0)
            );
        }
        // Second derivative from differences of A' against the equation.
        let ode = sol.ode;
        for t in [0.05, 0.3, 1.1, 1.9] {
            let h = 1e-5;
            let (a, da) = sol.eval(t).unwrap();
            let dda = (sol.eval(t + h).unwrap().1 - sol.eval(t - h).unwrap().1) / (2.0 * h);
            let res = 4.0 * t * t * dda
                + 2.0 * (ode.alpha + ode.drift * t) * da
                + (ode.constant - ode.eigenvalue()) * a;
            assert!(res.abs() < 1e-6 * a.abs().max(1.0));
        }
    }

    #[test]
    fn growing_mode_is_increasing_and_bounded() {
        let sol = solve_ak(ModeOde::linearized_expander(3, 5, 1.0).unwrap(), 2.0).unwrap();
        let mut prev = 1.0;
        for i in 1..=100 {
            let v = sol.value(i as f64 / 100.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(sol.value(1.0).unwrap() > 1.0);
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 100.0).collect();
        assert!(check_ak_log_derivative_bound(&sol, &grid).unwrap());
        // At t = 0 the bound is attained.
        let (a, da) = sol.eval(0.0).unwrap();
        assert!((da / a - sol.ode.c1()).abs() < 1e-14);
        let low = solve_ak(ModeOde::linearized_expander(3, 1, 1.0).unwrap(), 1.0).unwrap();
        assert!(matches!(
            check_ak_log_derivative_bound(&low, &grid[..10]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_modes_solve_the_linearised_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for k in 0..=4u32 {
            let mode = ExpansionMode::linearized(3, k, 1.0, 0, 0.3).unwrap();
            let field = Expansion::new(3, vec![mode]);
            for _ in 0..20 {
                let r = rng.gen_range(2.0..6.0);
                let x = random_point(&mut rng, 3, r);
                let res = linearized_expander_residual(&field, 1.0, &x).unwrap();
                assert!(res.abs() < 1e-6, "k = {k}: {res}");
            }
        }
    }

    #[test]
    fn radial_mode_is_radially_symmetric() {
        let mode = ExpansionMode::linearized(4, 0, 0.5, 0, 0.3).unwrap();
        let a = assemble_expansion(core::slice::from_ref(&mode), &[2.0, 0.0, 0.0, 0.0]).unwrap();
        let b = assemble_expansion(&[mode], &[0.0, 1.2, -1.6, 0.0]).unwrap();
        assert!((a - b).abs() < 1e-15 * a.abs());
    }

    #[test]
    fn superposition() {
        let m1 = ExpansionMode::linearized(3, 2, 1.0, 1, 0.3).unwrap();
        let m2 = ExpansionMode::linearized(3, 5, 1.0, 3, 0.3).unwrap();
        let x = [1.5, -2.0, 0.7];
        let both = assemble_expansion(&[m1.clone(), m2.clone()], &x).unwrap();
        let sum = assemble_expansion(&[m1], &x).unwrap() + assemble_expansion(&[m2], &x).unwrap();
        assert!((both - sum).abs() <= 1e-15 * both.abs().max(1e-300));
        assert_eq!(assemble_expansion(&[], &x).unwrap(), 0.0);
    }
}
