//! Small dense linear algebra over `f64` and `Complex<f64>`.
//!
//! Everything here is sized for m x m problems with m in the single digits, so the
//! algorithms favour robustness (partial pivoting, re-orthogonalised Gram-Schmidt,
//! cyclic Jacobi) over asymptotic speed.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Diagonal matrix `diag(e^{i phi_1}, ..., e^{i phi_n})`.
    pub fn phase_diagonal(phis: &[f64]) -> Self {
        let entries: Vec<Complex64> = phis
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect();
        Self::diagonal(&entries)
    }

    /// Builds a matrix whose j-th column is `columns[j]`.
    ///
    /// Panics if the columns are not all of length `columns.len()`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let n = columns.len();
        let mut m = Self::zeros(n);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column {j} has the wrong length");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entry of `|U^H U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn det(&self) -> Complex64 {
        let lu = ComplexLu::new(self);
        lu.det()
    }

    pub fn lu(&self) -> ComplexLu {
        ComplexLu::new(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorisation with partial pivoting, kept only for determinants.
#[derive(Debug, Clone)]
pub struct ComplexLu {
    pivots: Vec<Complex64>,
    odd_permutation: bool,
}

impl ComplexLu {
    pub fn new(a: &CMatrix) -> Self {
        let n = a.n;
        let mut m = a.clone();
        let mut odd = false;
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let mut best = col;
            let mut best_abs = m[(col, col)].norm();
            for row in col + 1..n {
                let v = m[(row, col)].norm();
                if v > best_abs {
                    best = row;
                    best_abs = v;
                }
            }
            if best != col {
                for j in 0..n {
                    let tmp = m[(col, j)];
                    m[(col, j)] = m[(best, j)];
                    m[(best, j)] = tmp;
                }
                odd = !odd;
            }
            let p = m[(col, col)];
            pivots.push(p);
            if p.is_zero() {
                continue;
            }
            for row in col + 1..n {
                let factor = m[(row, col)] / p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m[(col, j)];
                    m[(row, j)] -= factor * v;
                }
            }
        }
        Self {
            pivots,
            odd_permutation: odd,
        }
    }

    pub fn det(&self) -> Complex64 {
        let prod: Complex64 = self.pivots.iter().copied().product();
        if self.odd_permutation {
            -prod
        } else {
            prod
        }
    }

    pub fn is_singular(&self) -> bool {
        self.pivots.iter().any(|p| p.is_zero())
    }

    /// `ln |det|`, accumulated pivot by pivot so it cannot overflow.
    pub fn log_abs_det(&self) -> f64 {
        self.pivots.iter().map(|p| p.norm().ln()).sum()
    }

    /// Principal argument of the determinant in `(-pi, pi]`, accumulated from the
    /// pivot phases.
    pub fn arg_det(&self) -> f64 {
        let mut phase: f64 = self.pivots.iter().map(|p| p.arg()).sum();
        if self.odd_permutation {
            phase += PI;
        }
        wrap_to_pi(phase)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_to_pi(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t <= -PI {
        t += two_pi;
    } else if t > PI {
        t -= two_pi;
    }
    t
}

/// Returns the representative of `theta + 2 pi n` nearest to `hint`.
pub fn nearest_branch(theta: f64, hint: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let n = ((hint - theta) / two_pi).round();
    theta + n * two_pi
}

/// Real inner product `Re <u, v>` on `C^m`, i.e. the Euclidean product on `R^{2m}`.
pub fn real_dot(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum()
}

pub fn hermitian_dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn complex_norm(u: &[Complex64]) -> f64 {
    real_dot(u, u).sqrt()
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass, using the real inner
/// product on `C^m = R^{2m}`. Returns `None` if the vectors are (numerically)
/// linearly dependent over `R`.
pub fn gram_schmidt_real(vectors: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    let scale = vectors.iter().map(|v| complex_norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = real_dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= qi * c;
                }
            }
        }
        let norm = complex_norm(&w);
        if norm <= 1e-13 * scale {
            return None;
        }
        for wi in &mut w {
            *wi /= norm;
        }
        out.push(w);
    }
    Some(out)
}

/// Complex (Hermitian) Gram-Schmidt on the columns of `a`; returns the unitary factor
/// of a QR decomposition. Used to turn random matrices into random unitaries.
pub fn unitary_from_columns(a: &CMatrix) -> Option<CMatrix> {
    let n = a.dim();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = a.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = hermitian_dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= qi * c;
                }
            }
        }
        let norm = complex_norm(&w);
        if norm < 1e-12 {
            return None;
        }
        for wi in &mut w {
            *wi /= norm;
        }
        cols.push(w);
    }
    Some(CMatrix::from_columns(&cols))
}

/// Determinant of a small row-major real matrix by partial-pivot elimination.
pub fn real_det(n: usize, a: &[f64]) -> f64 {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut best = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[best * n + col].abs() {
                best = row;
            }
        }
        if m[best * n + col] == 0.0 {
            return 0.0;
        }
        if best != col {
            for j in 0..n {
                m.swap(col * n + j, best * n + j);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            for j in col..n {
                m[row * n + j] -= f * m[col * n + j];
            }
        }
    }
    det
}

/// Solves `A x = b` for a small row-major real matrix; `None` if singular.
pub fn solve_real(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for col in 0..n {
        let mut best = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[best * n + col].abs() {
                best = row;
            }
        }
        if m[best * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if best != col {
            for j in 0..n {
                m.swap(col * n + j, best * n + j);
            }
            x.swap(col, best);
        }
        let p = m[col * n + col];
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            for j in col..n {
                m[row * n + j] -= f * m[col * n + j];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for j in col + 1..n {
            acc -= m[col * n + j] * x[j];
        }
        x[col] = acc / m[col * n + col];
    }
    Some(x)
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with the eigenvectors stored as columns of a
/// row-major `n x n` array.
pub fn symmetric_eigen(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| m[i * n + i]).collect();
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_phase_diagonal() {
        let phis = [0.3, 1.1, 2.0];
        let d = CMatrix::phase_diagonal(&phis).det();
        let expected = Complex64::from_polar(1.0, 3.4);
        assert!((d - expected).norm() < 1e-14);
    }

    #[test]
    fn lu_arg_matches_det_arg() {
        let a = CMatrix::from_row_major(
            3,
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(2.0, 0.5),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, -1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.3, 0.2),
                Complex64::new(0.5, 0.5),
                Complex64::new(1.0, 1.0),
                Complex64::new(2.0, -3.0),
            ],
        );
        let lu = a.lu();
        let d = lu.det();
        assert!((lu.arg_det() - d.arg()).abs() < 1e-12);
        assert!((lu.log_abs_det() - d.norm().ln()).abs() < 1e-12);
    }

    #[test]
    fn jacobi_diagonalises() {
        let a = [4.0, 1.0, -2.0, 1.0, 3.0, 0.5, -2.0, 0.5, 1.0];
        let (vals, vecs) = symmetric_eigen(3, &a);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * vecs[j * 3 + k]).sum();
                assert!((av - vals[k] * vecs[i * 3 + k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wrap_and_branch() {
        assert!((wrap_to_pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_to_pi(-PI) - PI).abs() < 1e-12);
        assert!((nearest_branch(0.1, 13.0) - (0.1 + 4.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_rejects_dependent() {
        let u = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let w = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(gram_schmidt_real(&[u, w]).is_none());
    }

    #[test]
    fn solve_small_system() {
        let x = solve_real(
            3,
            &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0],
            &[3.0, 5.0, 5.0],
        )
        .unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(solve_real(2, &[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn real_det_small() {
        assert!((real_det(2, &[1.0, 2.0, 3.0, 4.0]) + 2.0).abs() < 1e-14);
    }
}
