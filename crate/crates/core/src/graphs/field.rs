//! Scalar fields on `R^m` with value, gradient and Hessian access.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A smooth function `R^m -> R`.
///
/// Derivatives default to fourth-order central differences with step
/// `fd_step(x)`; closed-form fields override them.
pub trait ScalarField {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    /// Finite-difference step at `x`.
    fn fd_step(&self, x: &[f64]) -> f64 {
        1e-4 * (1.0 + norm(x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        let h = self.fd_step(x);
        let mut g = vec![0.0; x.len()];
        let mut p = x.to_vec();
        for i in 0..x.len() {
            let mut at = |d: f64| -> Result<f64> {
                p[i] = x[i] + d;
                self.value(&p)
            };
            let v = (8.0 * (at(h)? - at(-h)?) - (at(2.0 * h)? - at(-2.0 * h)?)) / (12.0 * h);
            p[i] = x[i];
            g[i] = v;
        }
        Ok(g)
    }

    /// Row-major `m x m` Hessian.
    fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        let m = x.len();
        let h = self.fd_step(x);
        let f0 = self.value(x)?;
        let mut out = vec![0.0; m * m];
        let mut p = x.to_vec();
        for i in 0..m {
            let mut at = |d: f64| -> Result<f64> {
                p[i] = x[i] + d;
                self.value(&p)
            };
            let d2 = (-at(2.0 * h)? + 16.0 * at(h)? - 30.0 * f0 + 16.0 * at(-h)? - at(-2.0 * h)?)
                / (12.0 * h * h);
            p[i] = x[i];
            out[i * m + i] = d2;
        }
        for i in 0..m {
            for j in i + 1..m {
                let mut at = |di: f64, dj: f64| -> Result<f64> {
                    p[i] = x[i] + di;
                    p[j] = x[j] + dj;
                    self.value(&p)
                };
                let mixed = |s: f64, a: &mut dyn FnMut(f64, f64) -> Result<f64>| -> Result<f64> {
                    Ok(a(s, s)? - a(s, -s)? - a(-s, s)? + a(-s, -s)?)
                };
                let d1 = mixed(h, &mut at)?;
                let d2 = mixed(2.0 * h, &mut at)?;
                p[i] = x[i];
                p[j] = x[j];
                let v = (16.0 * d1 - d2) / (48.0 * h * h);
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        Ok(out)
    }

    fn laplacian(&self, x: &[f64]) -> Result<f64> {
        let m = self.dim();
        let h = self.hessian(x)?;
        Ok((0..m).map(|i| h[i * m + i]).sum())
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn check_dim(m: usize, x: &[f64]) -> Result<()> {
    if x.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: x.len(),
        });
    }
    Ok(())
}

/// A field given by a closure, differentiated numerically.
pub struct FnField<F> {
    m: usize,
    f: F,
    step: f64,
}

impl<F: Fn(&[f64]) -> f64> FnField<F> {
    pub fn new(m: usize, f: F) -> Self {
        Self { m, f, step: 1e-4 }
    }

    /// Uses `step * (1 + |x|)` as the difference step.
    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }
}

impl<F: Fn(&[f64]) -> f64> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.m
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.m, x)?;
        Ok((self.f)(x))
    }

    fn fd_step(&self, x: &[f64]) -> f64 {
        self.step * (1.0 + norm(x))
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        (**self).value(x)
    }
    fn fd_step(&self, x: &[f64]) -> f64 {
        (**self).fd_step(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).hessian(x)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        (**self).value(x)
    }
    fn fd_step(&self, x: &[f64]) -> f64 {
        (**self).fd_step(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).hessian(x)
    }
}

/// A polynomial `sum_a c_a x^a` with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    m: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn new(m: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        for (e, _) in &terms {
            if e.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: e.len(),
                });
            }
        }
        let mut p = Self {
            m,
            terms: Vec::new(),
        };
        for (e, c) in terms {
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn zero(m: usize) -> Self {
        Self {
            m,
            terms: Vec::new(),
        }
    }

    pub fn constant(m: usize, c: f64) -> Self {
        Self {
            m,
            terms: vec![(vec![0; m], c)],
        }
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.0 == e) {
            t.1 += c;
        } else {
            self.terms.push((e, c));
        }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    /// Euclidean Laplacian `sum_i d^2 / dx_i^2`.
    pub fn laplacian_poly(&self) -> Self {
        let mut out = Self::zero(self.m);
        for i in 0..self.m {
            for (e, c) in self.partial(i).partial(i).terms {
                out.add_term(e, c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(k, v)| v.powi(*k as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().fold(0.0, |a, t| a.max(t.1.abs()))
    }
}

impl ScalarField for Polynomial {
    fn dim(&self) -> usize {
        self.m
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.m, x)?;
        Ok(self.eval(x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.m, x)?;
        Ok((0..self.m).map(|i| self.partial(i).eval(x)).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.m, x)?;
        let m = self.m;
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            let di = self.partial(i);
            for j in i..m {
                let v = di.partial(j).eval(x);
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> Polynomial {
        Polynomial::new(
            3,
            vec![
                (vec![3, 0, 0], 0.5),
                (vec![1, 1, 1], -2.0),
                (vec![0, 2, 0], 1.5),
                (vec![0, 0, 1], 0.25),
                (vec![0, 0, 0], 3.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn polynomial_derivatives_match_finite_differences() {
        let p = cubic();
        let wrapped = FnField::new(3, |x: &[f64]| cubic().eval(x)).with_step(1e-3);
        let x = [0.3, -1.2, 0.7];
        let (ga, gf) = (p.gradient(&x).unwrap(), wrapped.gradient(&x).unwrap());
        for (a, b) in ga.iter().zip(&gf) {
            assert!((a - b).abs() < 1e-9);
        }
        let (ha, hf) = (p.hessian(&x).unwrap(), wrapped.hessian(&x).unwrap());
        for (a, b) in ha.iter().zip(&hf) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn polynomial_laplacian() {
        // Laplacian of the cubic: 3 x + 3.
        let l = cubic().laplacian_poly();
        assert!((l.eval(&[2.0, 5.0, -1.0]) - 9.0).abs() < 1e-14);
        assert_eq!(l.degree(), Some(1));
        let x = [0.1, 0.2, 0.3];
        assert!((cubic().laplacian(&x).unwrap() - l.eval(&x)).abs() < 1e-14);
    }

    #[test]
    fn dimension_is_checked() {
        assert!(cubic().value(&[1.0, 2.0]).is_err());
        assert!(Polynomial::new(2, vec![(vec![1, 1, 0], 1.0)]).is_err());
    }
}
