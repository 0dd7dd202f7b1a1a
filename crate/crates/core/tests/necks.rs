//! Lawlor necks and expanders through the public API, checked against
//! independent quadrature of the Liouville form along the profile curves.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slag_core::cm::{self, AngleVector, GradedPointPair, LagrangianPlane};
use slag_core::jlt::{self, JltExpander, JltParams};
use slag_core::lawlor::{self, LawlorNeck, LawlorParams};
use slag_core::neck::{NeckFamily, NeckPoint};

fn unit(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
    let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    v.iter().map(|t| t / n).collect()
}

/// `int_{y0}^{y1} lambda(d/dy) dy` by tanh-sinh quadrature on the sampled curve.
fn liouville_between(family: &NeckFamily, x: &[f64], y0: f64, y1: f64) -> f64 {
    quadrature::double_exponential::integrate(
        |y| {
            let s = family.sample(y, x).unwrap();
            cm::liouville_form(s.point.coords(), &s.tangent_y).unwrap()
        },
        y0,
        y1,
        1e-12,
    )
    .integral
}

#[test]
fn lawlor_potential_is_a_primitive_of_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for a in [vec![1.0, 2.0, 3.0], vec![0.4, 0.9, 1.7, 2.2]] {
        let neck = LawlorNeck::new(LawlorParams::new(a.clone()).unwrap()).unwrap();
        let x = unit(&mut rng, a.len());
        for (y0, y1) in [(-2.0, 0.5), (-0.3, 3.0)] {
            let want = liouville_between(neck.family(), &x, y0, y1);
            let got = neck.potential(y1).unwrap() - neck.potential(y0).unwrap();
            assert!(
                (got - want).abs() < 1e-10,
                "{a:?} [{y0}, {y1}]: {got} vs {want}"
            );
        }
    }
}

#[test]
fn expander_phase_is_minus_two_alpha_times_potential() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for (alpha, a) in [(0.5, vec![1.0, 1.0, 2.0]), (2.0, vec![0.3, 1.1, 0.8, 1.9])] {
        let exp = JltExpander::new(JltParams::new(a.clone(), alpha).unwrap()).unwrap();
        let x = unit(&mut rng, a.len());
        for y in [-1.5, -0.2, 0.0, 0.7, 2.5] {
            let s = exp.family().sample(y, &x).unwrap();
            let theta = exp.theta(y).unwrap();
            assert!(
                (theta + 2.0 * alpha * s.liouville).abs() < 1e-9,
                "alpha {alpha}, y {y}"
            );
            assert!((s.theta - theta).abs() < 1e-9);
        }
        // The phase moves from 0 to sum phi - pi, so the potential gap is the invariant.
        let (lo, hi) = exp.theta_limits().unwrap();
        let inv = jlt::jlt_invariant_a(&exp).unwrap();
        assert!(lo.abs() < 1e-9);
        assert!((-(hi - lo) / (2.0 * alpha) - inv.closed_form).abs() < 1e-9);
    }
}

#[test]
fn neck_frames_are_lagrangian_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let neck = LawlorNeck::new(LawlorParams::new(vec![0.6, 1.4, 2.0, 0.9, 1.2]).unwrap()).unwrap();
    let exp =
        JltExpander::new(JltParams::new(vec![0.6, 1.4, 2.0, 0.9, 1.2], 1.3).unwrap()).unwrap();
    for _ in 0..100 {
        let pt = NeckPoint::new(rng.gen_range(-8.0..8.0), unit(&mut rng, 5)).unwrap();
        let s = lawlor::lawlor_point(&neck, &pt).unwrap();
        assert!(s.frame.lagrangian_residual() < 1e-10);
        assert!(cm::holomorphic_volume(&s.frame).unwrap().im.abs() < 1e-10);
        let e = jlt::jlt_point(&exp, &pt).unwrap();
        assert!(e.frame.lagrangian_residual() < 1e-10);
        assert!(jlt::jlt_expander_residual_at(&exp, &pt).unwrap() < 1e-9);
    }
}

#[test]
fn plane_pairs_recover_their_angles() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for m in 3..=6 {
        let mut phis: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..PI - 0.1)).collect();
        let got = cm::characteristic_angles(
            &LagrangianPlane::real(m).unwrap(),
            &LagrangianPlane::from_angles(&phis).unwrap(),
        )
        .unwrap();
        let mut got = got.phis().to_vec();
        phis.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in phis.iter().zip(&got) {
            assert!((a - b).abs() < 1e-10);
        }
    }
    // The Lawlor cone planes form a special Lagrangian pair of degree 1.
    let angles = lawlor::lawlor_angles(&LawlorParams::new(vec![1.0, 2.0, 3.0]).unwrap()).unwrap();
    let pair = GradedPointPair::new(0.0, 0.0, 0.0, 0.0);
    assert_eq!(cm::maslov_degree(&angles.phis, &pair).unwrap(), 1);
    let back = AngleVector::new(angles.phis.complement().phis().to_vec()).unwrap();
    assert_eq!(cm::maslov_degree(&back, &pair).unwrap(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lawlor_inversion_round_trip(a in proptest::collection::vec(0.3f64..3.0, 3..=5)) {
        let angles = lawlor::lawlor_angles(&LawlorParams::new(a.clone()).unwrap()).unwrap();
        prop_assert!((angles.phis.sum() - PI).abs() < 1e-8);
        prop_assert!(angles.area > 0.0);
        let (params, _) = lawlor::lawlor_invert(&angles).unwrap();
        for (x, y) in params.a().iter().zip(&a) {
            prop_assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn expander_angles_shrink_with_alpha(a in proptest::collection::vec(0.3f64..3.0, 3..=4), alpha in 0.1f64..3.0) {
        let small = jlt::jlt_angles(&JltParams::new(a.clone(), alpha).unwrap()).unwrap();
        let big = jlt::jlt_angles(&JltParams::new(a.clone(), 2.0 * alpha).unwrap()).unwrap();
        prop_assert!(small.phis.sum() < PI);
        prop_assert!(big.phis.sum() < small.phis.sum());
        prop_assert!(small.area > 0.0);
        prop_assert!((small.area - jlt::closed_form_invariant(small.phis.sum(), alpha)).abs() < 1e-9);
    }
}
