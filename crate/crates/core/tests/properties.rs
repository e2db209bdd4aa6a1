//! Property tests over random speeds, scales and points.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use wavesplit::analyzer::{fit_growth_order, GrowthFit};
use wavesplit::coefficient::{JumpSpeed, RegularizedSpeed, ScaleRule, T_JUMP};
use wavesplit::mollifier::MollifierProfile;
use wavesplit::oracle::{delta_solution, match_jumps, TestFunction};
use wavesplit::runner::preset;

fn canonical() -> Arc<MollifierProfile> {
    Arc::new(MollifierProfile::canonical())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_symmetric_and_monotone(x in -1.5f64..1.5, dx in 0.0f64..0.5) {
        let m = canonical();
        prop_assert!((m.antiderivative(x) + m.antiderivative(-x) - 1.0).abs() < 1e-10);
        prop_assert!(m.antiderivative(x) <= m.antiderivative(x + dx));
    }

    #[test]
    fn cdf_derivative_is_the_density(x in -0.9f64..0.9) {
        let m = canonical();
        let fd = |h: f64| (m.antiderivative(x + h) - m.antiderivative(x - h)) / (2.0 * h);
        let e1 = (fd(1e-2) - m.density(x)).abs();
        let e2 = (fd(5e-3) - m.density(x)).abs();
        prop_assert!(e2 <= e1 / 3.0 || e2 < 1e-9, "{e1} {e2}");
    }

    #[test]
    fn speed_stays_between_the_limits(
        c0 in 0.2f64..5.0, c1 in 0.2f64..5.0, eps in 0.01f64..1.0, t in 0.0f64..3.0, dt in 0.0f64..0.3
    ) {
        let rs = RegularizedSpeed::new(JumpSpeed::new(c0, c1).unwrap(), canonical(), ScaleRule::Same, eps).unwrap();
        let (lo, hi) = (c0.min(c1), c0.max(c1));
        let (a, b) = (rs.speed(t), rs.speed(t + dt));
        prop_assert!(a >= lo - 1e-12 && a <= hi + 1e-12);
        let monotone = if c1 >= c0 { b >= a - 1e-12 } else { b <= a + 1e-12 };
        prop_assert!(monotone);
        prop_assert!(rs.primitive(t + dt) >= rs.primitive(t));
    }

    #[test]
    fn coupling_integrates_to_half_log_ratio(c0 in 0.2f64..5.0, c1 in 0.2f64..5.0, eps in 0.01f64..1.0) {
        let rs = RegularizedSpeed::new(JumpSpeed::new(c0, c1).unwrap(), canonical(), ScaleRule::Same, eps).unwrap();
        let (a, b) = rs.transition();
        let total = common::gauss_legendre(|t| rs.mu(t), a.max(0.0), b, 400);
        let expect = 0.5 * (rs.speed(b) / rs.speed(a.max(0.0))).ln();
        prop_assert!((total - expect).abs() < 1e-8 * (1.0 + expect.abs()), "{total} vs {expect}");
        if a >= 0.0 {
            prop_assert!((total - 0.5 * (c1 / c0).ln()).abs() < 1e-8);
        }
    }

    #[test]
    fn matching_conserves_and_inverts(
        c0 in 0.2f64..5.0, c1 in 0.2f64..5.0, jp in -2.0f64..2.0, jm in -2.0f64..2.0
    ) {
        let [tp, tm] = match_jumps(c0, c1, [jp, jm]);
        prop_assert!((tp + tm - jp - jm).abs() < 1e-12);
        prop_assert!((c1 * (tp - tm) - c0 * (jp - jm)).abs() < 1e-12);
        let [bp, bm] = match_jumps(c1, c0, [tp, tm]);
        prop_assert!((bp - jp).abs() < 1e-12 && (bm - jm).abs() < 1e-12);
    }

    #[test]
    fn front_solution_defects_vanish(c0 in 0.2f64..5.0, c1 in 0.2f64..5.0) {
        let sol = delta_solution(JumpSpeed::new(c0, c1).unwrap(), 1.0);
        prop_assert!(sol.amplitude_defect() <= 1e-12);
        prop_assert!(sol.reciprocity_defect() <= 1e-10);
        // Total mass of u grows like t before the jump: int u(t, .) = t.
        let t = 0.7 * T_JUMP;
        let mass = common::gauss_legendre(|x| sol.u(t, x), -c0 * t - 0.1, c0 * t + 0.1, 2000);
        prop_assert!((mass - t).abs() < 1e-3);
    }

    #[test]
    fn test_functions_have_unit_mass(center in -2.0f64..2.0, width in 0.05f64..1.5) {
        let psi = TestFunction::new(center, width, canonical()).unwrap();
        let (a, b) = psi.support();
        let mass = common::gauss_legendre(|x| psi.eval(x), a, b, 400);
        prop_assert!((mass - 1.0).abs() < 1e-9);
        prop_assert!((psi.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_laws_fit_exactly(p in -1.0f64..5.0, a in 0.1f64..10.0) {
        let eps = [0.1f64, 0.05, 0.025, 0.0125];
        let sups: Vec<f64> = eps.iter().map(|e| a * e.powf(-p)).collect();
        match fit_growth_order(&eps, &sups, 0.0) {
            GrowthFit::Fitted { p: q, residual } => {
                prop_assert!((q - p).abs() < 1e-9);
                prop_assert!(residual < 1e-9);
            }
            GrowthFit::BelowNoiseFloor => prop_assert!(false, "fit refused"),
        }
    }

    #[test]
    fn hash_ignores_jobs_but_not_physics(jobs in 1usize..64, c1 in 1.5f64..3.0) {
        let base = preset("figure1").unwrap();
        let mut other = base.clone();
        other.jobs = Some(jobs);
        prop_assert_eq!(base.hash(), other.hash());
        other.jump = JumpSpeed::new(1.0, c1).unwrap();
        prop_assert_ne!(base.hash(), other.hash());
    }
}
