//! Harmonic bases, inversion and asymptotic expander modes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slag_core::graphs::{
    harmonic_basis, harmonic_dimension, inversion_transform, linearized_expander_residual,
    Expansion, ExpansionMode, InversionDirection, ScalarField,
};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn point(rng: &mut ChaCha8Rng, m: usize, r: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    v.iter().map(|t| t * r / n).collect()
}

#[test]
fn harmonic_bases_have_the_right_size_and_are_harmonic() {
    for m in 3..=5usize {
        for k in 0..=5u32 {
            let (n, kk) = (m as u64, k as u64);
            let want = binomial(n + kk - 1, kk)
                - if k >= 2 {
                    binomial(n + kk - 3, kk - 2)
                } else {
                    0
                };
            assert_eq!(harmonic_dimension(m, k) as u64, want);
            let basis = harmonic_basis(m, k).unwrap();
            assert_eq!(basis.len() as u64, want);
            for p in &basis {
                assert!(p.laplacian_poly().max_abs_coefficient() < 1e-10);
                assert_eq!(p.degree(), Some(k));
            }
        }
    }
}

#[test]
fn inversion_keeps_harmonic_fields_harmonic() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for m in 3..=5usize {
        for p in harmonic_basis(m, 3).unwrap() {
            let f = inversion_transform(&p, InversionDirection::Forward);
            for _ in 0..10 {
                let r = rng.gen_range(1.0..20.0);
                let x = point(&mut rng, m, r);
                let scale =
                    f.value(&x).unwrap().abs() / x.iter().map(|v| v * v).sum::<f64>() + 1e-30;
                assert!(f.laplacian(&x).unwrap().abs() < 1e-9 * scale.max(1e-12));
            }
        }
    }
}

#[test]
fn sums_of_modes_solve_the_linearised_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let (m, alpha) = (4, 0.5);
    let modes: Vec<ExpansionMode> = [(0, 0), (2, 1), (3, 4), (5, 2)]
        .iter()
        .map(|&(k, i)| ExpansionMode::linearized(m, k, alpha, i, 0.5).unwrap())
        .collect();
    let field = Expansion::new(m, modes);
    for _ in 0..50 {
        let r = rng.gen_range(1.5..5.0);
        let x = point(&mut rng, m, r);
        assert!(
            linearized_expander_residual(&field, alpha, &x)
                .unwrap()
                .abs()
                < 1e-6
        );
    }
}

#[test]
fn too_few_harmonics_is_an_error() {
    assert!(ExpansionMode::linearized(3, 1, 1.0, 3, 0.5).is_err());
}
