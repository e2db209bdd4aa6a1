//! Derived constants checked against quadrature written in the test helpers
//! and against hand-solved matching problems.

mod common;

use std::sync::Arc;

use approx::assert_relative_eq;
use wavesplit::coefficient::{JumpSpeed, RegularizedSpeed, ScaleRule};
use wavesplit::mollifier::MollifierProfile;
use wavesplit::oracle::{delta_solution, match_jumps};

fn canonical() -> Arc<MollifierProfile> {
    Arc::new(MollifierProfile::canonical())
}

fn speed(eps: f64) -> RegularizedSpeed {
    RegularizedSpeed::new(JumpSpeed::new(1.0, 2.0).unwrap(), canonical(), ScaleRule::Same, eps).unwrap()
}

#[test]
fn normalization_constant() {
    let mass = common::bump_mass();
    let m = canonical();
    assert_relative_eq!(m.normalization(), 1.0 / mass, max_relative = 1e-11);
    // 1 / 0.443993816168079 (30-digit quadrature)
    assert_relative_eq!(m.normalization(), 2.252283621043581, max_relative = 1e-10);
    assert_relative_eq!(m.peak(), (-1.0f64).exp() / mass, max_relative = 1e-11);
}

#[test]
fn scaled_density_has_unit_mass() {
    let m = canonical();
    for eps in [0.1, 0.01] {
        let total = common::gauss_legendre(|x| m.eval_scaled(eps, x), -eps, eps, 2000);
        assert!((total - 1.0).abs() < 1e-9, "eps {eps}: {total}");
    }
}

#[test]
fn cdf_at_one_half() {
    let mass = common::bump_mass();
    let reference = common::bump_cdf(0.5, mass);
    let m = canonical();
    assert!((m.antiderivative(0.5) - reference).abs() < 1e-12, "{} vs {reference}", m.antiderivative(0.5));
    assert!((m.antiderivative(0.0) - 0.5).abs() < 1e-12);
}

#[test]
fn second_antiderivative_at_zero() {
    let mass = common::bump_mass();
    let reference = common::gauss_legendre(|y| common::bump_cdf(y, mass), -1.0, 0.0, 400);
    let m = canonical();
    assert!((m.second_antiderivative(0.0) - reference).abs() < 1e-11);
    // Phi(y) + Phi(-y) = 1 makes the full integral exactly 1.
    assert!((m.second_antiderivative(1.0) - 1.0).abs() < 1e-11);
}

#[test]
fn speed_inside_the_transition() {
    let mass = common::bump_mass();
    let rs = speed(0.1);
    assert!((rs.speed(1.05) - (1.0 + common::bump_cdf(0.5, mass))).abs() < 1e-12);
}

#[test]
fn sup_of_the_coupling_rate() {
    // mu(t) = phi(y) / (2 eps (1 + Phi(y))), y = (t - 1) / eps; maximize on a
    // fine grid, then refine by golden section.
    let mass = common::bump_mass();
    let eps = 0.1;
    let mu = |y: f64| common::raw_bump(y) / mass / (2.0 * eps * (1.0 + common::bump_cdf(y, mass)));
    let n = 20_000;
    let (mut best, mut arg) = (0.0, 0.0);
    for k in 1..n {
        let y = -1.0 + 2.0 * k as f64 / n as f64;
        let v = mu(y);
        if v > best {
            (best, arg) = (v, y);
        }
    }
    let (mut a, mut b) = (arg - 2.0 / n as f64, arg + 2.0 / n as f64);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if mu(c) > mu(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let reference = mu(0.5 * (a + b));
    assert!(arg < 0.0, "the maximum sits left of the midpoint where c is smaller");
    assert_relative_eq!(speed(eps).sup_abs_mu(), reference, max_relative = 1e-6);
}

#[test]
fn primitive_at_two() {
    let mass = common::bump_mass();
    let eps = 0.1;
    let c = |t: f64| 1.0 + common::bump_cdf((t - 1.0) / eps, mass);
    let reference = common::gauss_legendre(c, 0.0, 0.9, 10)
        + common::gauss_legendre(c, 0.9, 1.1, 400)
        + common::gauss_legendre(c, 1.1, 2.0, 10);
    assert!((speed(eps).primitive(2.0) - reference).abs() < 1e-10);
    // Symmetry of phi gives X(2) = c0 + c1 exactly.
    assert!((reference - 3.0).abs() < 1e-10);
}

#[test]
fn front_amplitudes_for_one_to_two() {
    // u(1, .) = 1/2 on (-1, 1) and u_t(1, .) = (delta(x - 1) + delta(x + 1)) / 2.
    // d'Alembert with c = 2 from t = 1 gives, at t = 2,
    //   1/4 on |x| < 1, 3/8 on 1 < |x| < 3, 0 beyond.
    let sol = delta_solution(JumpSpeed::new(1.0, 2.0).unwrap(), 1.0);
    for (x, expected) in [(0.0, 0.25), (0.5, 0.25), (-0.9, 0.25), (1.5, 0.375), (-2.9, 0.375), (3.2, 0.0)] {
        assert!((sol.u(2.0, x) - expected).abs() < 1e-14, "u(2, {x}) = {}", sol.u(2.0, x));
    }
    // Outward jump -1/2 at x = 1 splits into -3/8 (transmitted) and -1/8 (reflected).
    let [jt, jr] = match_jumps(1.0, 2.0, [-0.5, 0.0]);
    assert!((jt + 0.375).abs() < 1e-15 && (jr + 0.125).abs() < 1e-15, "{jt} {jr}");
}

#[test]
fn kernel_plateau_before_the_jump() {
    let sol = delta_solution(JumpSpeed::new(1.0, 2.0).unwrap(), 1.0);
    assert_eq!(sol.u(0.5, 0.2), 0.5);
    assert_eq!(sol.u(0.5, 0.7), 0.0);
}
