//! Homogeneous harmonic polynomials on `R^m`, orthonormal in `L^2(S^{m-1})`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_rational::Ratio;
// Shadowed by std's inherent methods whenever std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use super::field::Polynomial;
use crate::error::{Error, Result};

type Q = Ratio<i128>;

/// Exponent vectors of all degree-`k` monomials in `m` variables, in
/// lexicographically decreasing order.
pub fn monomials(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(m, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, k, &mut Vec::new(), &mut out);
    }
    out
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(m+k-1, k) - C(m+k-3, k-2)`.
pub fn harmonic_dimension(m: usize, k: u32) -> usize {
    let (m, k) = (m as i64, k as i64);
    (binomial(m + k - 1, k) - binomial(m + k - 3, k - 2)) as usize
}

/// `Gamma(n / 2)` for a positive integer `n`.
fn gamma_half(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        (1..n / 2).fold(1.0, |acc, j| acc * j as f64)
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(x + 1) = x Gamma(x).
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// `int_{S^{m-1}} x^a dsigma = 2 prod_i Gamma((a_i + 1)/2) / Gamma((|a| + m)/2)`, zero
/// unless every exponent is even.
pub fn sphere_moment(a: &[u32]) -> f64 {
    if a.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let total: u32 = a.iter().sum();
    let num: f64 = a.iter().map(|e| gamma_half(e + 1)).product();
    2.0 * num / gamma_half(total + a.len() as u32)
}

/// `<p, q>_{L^2(S^{m-1})}` from exact monomial moments.
pub fn sphere_inner(p: &Polynomial, q: &Polynomial) -> f64 {
    let mut s = 0.0;
    for (ea, ca) in p.terms() {
        for (eb, cb) in q.terms() {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            s += ca * cb * sphere_moment(&e);
        }
    }
    s
}

/// Kernel of the Laplacian on degree-`k` monomials, as exact rational coefficient
/// vectors (reduced row echelon form of the Laplacian matrix).
fn laplacian_kernel(m: usize, k: u32) -> (Vec<Vec<u32>>, Vec<Vec<Q>>) {
    let cols = monomials(m, k);
    if k < 2 {
        let n = cols.len();
        let basis = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        return (cols, basis);
    }
    let rows = monomials(m, k - 2);
    let n = cols.len();
    let mut a = vec![vec![Q::zero(); n]; rows.len()];
    for (j, e) in cols.iter().enumerate() {
        for i in 0..m {
            if e[i] >= 2 {
                let mut d = e.clone();
                d[i] -= 2;
                let r = rows
                    .iter()
                    .position(|x| *x == d)
                    .expect("lower-degree monomial");
                a[r][j] += Q::from_integer((e[i] * (e[i] - 1)) as i128);
            }
        }
    }
    // Gauss-Jordan elimination.
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col];
                for c in 0..n {
                    let sub = factor * a[row][c];
                    a[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f];
            }
            v
        })
        .collect();
    (cols, basis)
}

/// Basis of the degree-`k` homogeneous harmonic polynomials on `R^m`,
/// orthonormal in `L^2(S^{m-1})`.
pub fn harmonic_basis(m: usize, k: u32) -> Result<Vec<Polynomial>> {
    if m < 3 {
        return Err(Error::UnsupportedDimension(m));
    }
    let (cols, kernel) = laplacian_kernel(m, k);
    let raw: Vec<Polynomial> = kernel
        .iter()
        .map(|v| {
            let terms = cols
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e.clone(), *c.numer() as f64 / *c.denom() as f64))
                .collect();
            Polynomial::new(m, terms)
        })
        .collect::<Result<_>>()?;
    // Modified Gram-Schmidt in the sphere inner product.
    let mut out: Vec<Polynomial> = Vec::with_capacity(raw.len());
    for p in raw {
        let mut terms: Vec<(Vec<u32>, f64)> = p.terms().to_vec();
        for q in &out {
            let c = sphere_inner(&Polynomial::new(m, terms.clone())?, q);
            for (e, cq) in q.terms() {
                terms.push((e.clone(), -c * cq));
            }
        }
        let v = Polynomial::new(m, terms)?;
        let n = sphere_inner(&v, &v).sqrt();
        let scaled = v
            .terms()
            .iter()
            .filter(|t| t.1.abs() > 1e-15 * n)
            .map(|(e, c)| (e.clone(), c / n))
            .collect();
        out.push(Polynomial::new(m, scaled)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::field::{FnField, ScalarField};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_degrees() {
        let b0 = harmonic_basis(3, 0).unwrap();
        assert_eq!(b0.len(), 1);
        // 1 / sqrt(area of S^2).
        assert!((b0[0].eval(&[0.3, 0.1, 0.2]) - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-14);
        let b1 = harmonic_basis(4, 1).unwrap();
        assert_eq!(b1.len(), 4);
        for p in &b1 {
            assert_eq!(p.terms().len(), 1);
            assert_eq!(p.degree(), Some(1));
        }
        assert_eq!(harmonic_basis(3, 2).unwrap().len(), 5);
    }

    #[test]
    fn moments_match_known_values() {
        // Area of S^2, int x^2 = 4 pi / 3, int x^2 y^2 = 4 pi / 15.
        assert!((sphere_moment(&[0, 0, 0]) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_moment(&[2, 0, 0]) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_moment(&[2, 2, 0]) - 4.0 * PI / 15.0).abs() < 1e-13);
        // Area of S^3 = 2 pi^2.
        assert!((sphere_moment(&[0; 4]) - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(sphere_moment(&[1, 2, 0]), 0.0);
    }

    #[test]
    fn dimension_matches_rank_of_laplacian_matrix() {
        for m in 3..6 {
            for k in 0..7u32 {
                let cols = monomials(m, k);
                let expected = if k < 2 {
                    cols.len()
                } else {
                    let rows = monomials(m, k - 2);
                    let mat = nalgebra::DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
                        let e = &cols[c];
                        (0..m)
                            .filter(|&i| e[i] >= 2)
                            .filter(|&i| {
                                let mut d = e.clone();
                                d[i] -= 2;
                                d == rows[r]
                            })
                            .map(|i| (e[i] * (e[i] - 1)) as f64)
                            .sum::<f64>()
                    });
                    cols.len() - mat.rank(1e-9)
                };
                assert_eq!(harmonic_basis(m, k).unwrap().len(), expected);
                assert_eq!(harmonic_dimension(m, k), expected);
            }
        }
    }

    #[test]
    fn basis_is_harmonic_homogeneous_and_orthonormal() {
        for (m, k) in [(3, 3), (4, 2), (5, 4)] {
            let basis = harmonic_basis(m, k).unwrap();
            for (i, p) in basis.iter().enumerate() {
                assert!(p.laplacian_poly().max_abs_coefficient() < 1e-12);
                assert!(p.terms().iter().all(|(e, _)| e.iter().sum::<u32>() == k));
                for (j, q) in basis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((sphere_inner(p, q) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spherical_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (m, k) in [(3usize, 2u32), (3, 4), (4, 3)] {
            let eig = (k * (m as u32 + k - 2)) as f64;
            for p in harmonic_basis(m, k).unwrap() {
                // The degree-0 extension p(x / |x|) has Euclidean Laplacian equal to
                // the (negative) sphere Laplacian on S^{m-1}.
                let pc = p.clone();
                let ext = FnField::new(m, move |x: &[f64]| {
                    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let y: Vec<f64> = x.iter().map(|v| v / r).collect();
                    pc.eval(&y)
                })
                .with_step(1e-3);
                let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v /= r);
                let lap = ext.laplacian(&x).unwrap();
                assert!((-lap - eig * p.eval(&x)).abs() < 1e-4);
            }
        }
    }
}
