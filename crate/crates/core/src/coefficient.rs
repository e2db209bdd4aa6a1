//! The regularized speed `c_eps(t) = c0 + (c1 - c0) Phi((t - 1) / s(eps))`.
//!
//! `s(eps)` is either `eps` itself (same scale) or a slow-scale net `h(eps)`.
//! Everything needed by the solver is closed form given the mollifier tables:
//! the speed, its derivative, the source rate `mu = c' / (2c)` and the
//! primitive `X(t) = int_0^t c`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mollifier::MollifierProfile;
use crate::quadrature::adaptive_simpson;

/// Time of the coefficient jump.
pub const T_JUMP: f64 = 1.0;

/// Piecewise constant speed `c0` before `t = 1`, `c1` after.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpSpeed {
    pub c0: f64,
    pub c1: f64,
}

impl JumpSpeed {
    pub fn new(c0: f64, c1: f64) -> Result<Self> {
        let j = Self { c0, c1 };
        j.validate()?;
        Ok(j)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return Err(invalid("c0", format!("{} must be positive", self.c0)));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(invalid("c1", format!("{} must be positive", self.c1)));
        }
        Ok(())
    }

    pub fn min(&self) -> f64 {
        self.c0.min(self.c1)
    }

    pub fn max(&self) -> f64 {
        self.c0.max(self.c1)
    }

    /// Unregularized speed (right-continuous at the jump).
    pub fn speed(&self, t: f64) -> f64 {
        if t < T_JUMP {
            self.c0
        } else {
            self.c1
        }
    }

    /// `X(t) = int_0^t c` for the unregularized speed.
    pub fn primitive(&self, t: f64) -> f64 {
        if t <= T_JUMP {
            self.c0 * t
        } else {
            self.c0 * T_JUMP + self.c1 * (t - T_JUMP)
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.c0 == self.c1
    }
}

/// Slow-scale net `1 / h(eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "net", rename_all = "snake_case")]
pub enum SlowNet {
    /// `h = 1 / log(e + 1/eps)`.
    #[default]
    Log,
    /// `h = 1 / (1 + log(1 + log(1/eps)))`.
    IteratedLog,
    /// `h = eps^exponent`. Not slow scale; kept for negative controls.
    Power { exponent: f64 },
}

impl SlowNet {
    pub fn h(&self, eps: f64) -> f64 {
        match *self {
            SlowNet::Log => 1.0 / (std::f64::consts::E + 1.0 / eps).ln(),
            SlowNet::IteratedLog => 1.0 / (1.0 + (1.0 + (1.0 / eps).ln()).ln()),
            SlowNet::Power { exponent } => eps.powf(exponent),
        }
    }
}

fn one() -> f64 {
    1.0
}

/// How the transition half-width `s(eps)` depends on `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScaleRule {
    /// `s = eps`.
    #[default]
    Same,
    /// `s = prefactor * h(eps)`.
    Slow {
        #[serde(default, flatten)]
        net: SlowNet,
        #[serde(default = "one")]
        prefactor: f64,
    },
}

impl ScaleRule {
    pub fn slow() -> Self {
        ScaleRule::Slow {
            net: SlowNet::Log,
            prefactor: 1.0,
        }
    }

    pub fn width(&self, eps: f64) -> f64 {
        match *self {
            ScaleRule::Same => eps,
            ScaleRule::Slow { net, prefactor } => prefactor * net.h(eps),
        }
    }

    pub fn is_slow(&self) -> bool {
        matches!(self, ScaleRule::Slow { .. })
    }

    pub fn label(&self) -> String {
        match self {
            ScaleRule::Same => "same".into(),
            ScaleRule::Slow { net, prefactor } => match net {
                SlowNet::Log => format!("slow(log, {prefactor})"),
                SlowNet::IteratedLog => format!("slow(iterated_log, {prefactor})"),
                SlowNet::Power { exponent } => format!("slow(power {exponent}, {prefactor})"),
            },
        }
    }
}

/// One entry of [`SlowScaleReport`].
#[derive(Debug, Clone, Serialize)]
pub struct SlowScaleEntry {
    pub p: f64,
    pub slope: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlowScaleReport {
    pub entries: Vec<SlowScaleEntry>,
    pub pass: bool,
}

/// Reference ladder for [`slow_scale_check`]. Slow-scale behaviour only
/// shows at very small eps, so the check runs far below any solved ladder.
pub const SLOW_REFERENCE_LADDER: [f64; 8] =
    [1e-8, 1e-16, 1e-24, 1e-32, 1e-48, 1e-64, 1e-96, 1e-128];

/// Exponents `p` checked by [`slow_scale_check`] at load time.
pub const SLOW_SCALE_POWERS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Fit the slope of `p log(1/h(eps))` against `log(1/eps)` for each `p`.
///
/// Passes iff every slope is at most 1.1, i.e. `(1/h)^p = O(eps^-1)` on the
/// ladder.
pub fn slow_scale_check(
    rule: &ScaleRule,
    ladder: &[f64],
    p_list: &[f64],
) -> Result<SlowScaleReport> {
    if ladder.len() < 4 {
        return Err(Error::LadderTooShort(ladder.len()));
    }
    for w in ladder.windows(2) {
        if !(w[1] < w[0]) {
            return Err(invalid("eps_ladder", "must be strictly decreasing"));
        }
    }
    if ladder.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return Err(invalid("eps_ladder", "values must lie in (0, 1]"));
    }
    let xs: Vec<f64> = ladder.iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = ladder.iter().map(|e| (1.0 / rule.width(*e)).ln()).collect();
    let base = crate::analyzer::least_squares(&xs, &ys).0;
    let entries: Vec<SlowScaleEntry> = p_list
        .iter()
        .map(|&p| {
            let slope = p * base;
            SlowScaleEntry {
                p,
                slope,
                pass: slope <= 1.1,
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    Ok(SlowScaleReport { entries, pass })
}

/// The regularized speed for one `eps`.
#[derive(Debug, Clone)]
pub struct RegularizedSpeed {
    jump: JumpSpeed,
    mollifier: Arc<MollifierProfile>,
    scale: ScaleRule,
    eps: f64,
    s: f64,
}

/// JSON summary of a [`RegularizedSpeed`].
#[derive(Debug, Clone, Serialize)]
pub struct SpeedSummary {
    pub c0: f64,
    pub c1: f64,
    pub scale: String,
    pub eps: f64,
    pub width: f64,
    pub total_variation: f64,
    pub integral_abs_mu: f64,
    pub beta_a: f64,
    pub beta: f64,
}

impl RegularizedSpeed {
    pub fn new(
        jump: JumpSpeed,
        mollifier: Arc<MollifierProfile>,
        scale: ScaleRule,
        eps: f64,
    ) -> Result<Self> {
        jump.validate()?;
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(invalid("eps", format!("{eps} not in (0, 1]")));
        }
        let s = scale.width(eps);
        if !(s > 0.0 && s < T_JUMP) {
            return Err(invalid(
                "scale",
                format!("transition half-width {s} must lie in (0, 1) so that c(0) = c0"),
            ));
        }
        Ok(Self {
            jump,
            mollifier,
            scale,
            eps,
            s,
        })
    }

    pub fn jump(&self) -> JumpSpeed {
        self.jump
    }

    pub fn mollifier(&self) -> &MollifierProfile {
        &self.mollifier
    }

    pub fn scale(&self) -> ScaleRule {
        self.scale
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Transition half-width `s(eps)`.
    pub fn width(&self) -> f64 {
        self.s
    }

    /// Support of `mu`: `[1 - s, 1 + s]`.
    pub fn transition(&self) -> (f64, f64) {
        (T_JUMP - self.s, T_JUMP + self.s)
    }

    pub fn speed(&self, t: f64) -> f64 {
        let j = self.jump;
        j.c0 + (j.c1 - j.c0) * self.mollifier.antiderivative((t - T_JUMP) / self.s)
    }

    /// `c_eps'(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        let j = self.jump;
        (j.c1 - j.c0) * self.mollifier.density((t - T_JUMP) / self.s) / self.s
    }

    /// `mu(t) = c'(t) / (2 c(t))`.
    pub fn mu(&self, t: f64) -> f64 {
        let d = self.derivative(t);
        if d == 0.0 {
            0.0
        } else {
            d / (2.0 * self.speed(t))
        }
    }

    /// `X(t) = int_0^t c_eps`.
    pub fn primitive(&self, t: f64) -> f64 {
        let j = self.jump;
        let (lo, hi) = self.transition();
        if t <= lo {
            j.c0 * t
        } else if t >= hi {
            j.c0 * T_JUMP + j.c1 * (t - T_JUMP)
        } else {
            j.c0 * t
                + (j.c1 - j.c0)
                    * self.s
                    * self.mollifier.second_antiderivative((t - T_JUMP) / self.s)
        }
    }

    /// Characteristic feet `(gamma_plus, gamma_minus)` of the curves through
    /// `(t, x)` evaluated at time `s`.
    pub fn characteristics(&self, t: f64, x: f64, s: f64) -> (f64, f64) {
        let d = self.primitive(t) - self.primitive(s);
        (x - d, x + d)
    }

    /// `int_0^inf |c'|` by quadrature over the transition.
    pub fn total_variation(&self) -> f64 {
        let (lo, hi) = self.transition();
        adaptive_simpson(&|t| self.derivative(t).abs(), lo, hi, 1e-13)
    }

    /// `int_0^t |mu|` by quadrature.
    pub fn integral_abs_mu_to(&self, t: f64) -> f64 {
        let (lo, hi) = self.transition();
        let b = t.min(hi);
        if b <= lo {
            return 0.0;
        }
        adaptive_simpson(&|t| self.mu(t).abs(), lo, b, 1e-13)
    }

    pub fn integral_abs_mu(&self) -> f64 {
        self.integral_abs_mu_to(f64::INFINITY)
    }

    /// `int_0^t |c c'| / min(c0, c1)^2`, the exponent of the energy ceiling (halved).
    pub fn energy_rate_integral(&self, t: f64) -> f64 {
        let (lo, hi) = self.transition();
        let b = t.min(hi);
        if b <= lo {
            return 0.0;
        }
        let m = self.jump.min();
        adaptive_simpson(
            &|t| (self.speed(t) * self.derivative(t)).abs() / (m * m),
            lo,
            b,
            1e-13,
        )
    }

    /// `sup |mu|` on a grid of 20001 points over the transition.
    pub fn sup_abs_mu(&self) -> f64 {
        let (lo, hi) = self.transition();
        let n = 20000;
        (0..=n)
            .map(|k| self.mu(lo + (hi - lo) * k as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Default `a` for [`Self::beta`]: `min(1/2, c1)`, inside the support of `phi`.
    pub fn default_beta_a(&self) -> f64 {
        0.5f64.min(self.jump.c1)
    }

    /// `beta = c(1 + a s / (2 c1)) / c(1 - a s / (2 c1))`, independent of `eps`.
    pub fn beta(&self, a: f64) -> f64 {
        let j = self.jump;
        let y = a / (2.0 * j.c1);
        let m = &self.mollifier;
        (j.c0 + (j.c1 - j.c0) * m.antiderivative(y)) / (j.c0 + (j.c1 - j.c0) * m.antiderivative(-y))
    }

    pub fn summary(&self) -> SpeedSummary {
        let a = self.default_beta_a();
        SpeedSummary {
            c0: self.jump.c0,
            c1: self.jump.c1,
            scale: self.scale.label(),
            eps: self.eps,
            width: self.s,
            total_variation: self.total_variation(),
            integral_abs_mu: self.integral_abs_mu(),
            beta_a: a,
            beta: self.beta(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(c0: f64, c1: f64, eps: f64) -> RegularizedSpeed {
        RegularizedSpeed::new(
            JumpSpeed::new(c0, c1).unwrap(),
            Arc::new(MollifierProfile::canonical()),
            ScaleRule::Same,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn midpoint_and_plateaus() {
        let r = rs(1.0, 2.0, 0.1);
        assert!((r.speed(1.0) - 1.5).abs() < 1e-10);
        assert_eq!(r.speed(0.9), 1.0);
        assert_eq!(r.speed(1.1), 2.0);
        assert_eq!(r.mu(0.9), 0.0);
        assert_eq!(r.mu(1.1), 0.0);
    }

    #[test]
    fn integrals_are_eps_independent() {
        for eps in [0.1, 0.03] {
            let r = rs(1.0, 2.0, eps);
            assert!((r.total_variation() - 1.0).abs() < 1e-9);
            assert!((r.integral_abs_mu() - 0.5 * 2f64.ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn primitive_is_continuous_and_increasing() {
        let r = rs(1.0, 3.0, 0.2);
        let mut prev = -1.0;
        for k in 0..=3000 {
            let t = k as f64 * 1e-3;
            let x = r.primitive(t);
            assert!(x > prev);
            prev = x;
        }
        let (lo, hi) = r.transition();
        for t in [lo, hi] {
            assert!((r.primitive(t - 1e-12) - r.primitive(t + 1e-12)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_eps() {
        let j = JumpSpeed::new(1.0, 2.0).unwrap();
        let m = Arc::new(MollifierProfile::canonical());
        assert!(RegularizedSpeed::new(j, m.clone(), ScaleRule::Same, 0.0).is_err());
        assert!(RegularizedSpeed::new(j, m, ScaleRule::Same, 1.5).is_err());
    }

    #[test]
    fn slow_scale_examples() {
        let ladder = [0.1, 0.05, 0.025, 0.0125];
        let same = slow_scale_check(&ScaleRule::Same, &ladder, &[2.0]).unwrap();
        assert!(!same.pass);
        assert!((same.entries[0].slope - 2.0).abs() < 1e-12);
        let quarter = ScaleRule::Slow {
            net: SlowNet::Power { exponent: 0.25 },
            prefactor: 1.0,
        };
        let r = slow_scale_check(&quarter, &ladder, &[8.0]).unwrap();
        assert!(!r.pass && (r.entries[0].slope - 2.0).abs() < 1e-12);
        assert!(matches!(
            slow_scale_check(&ScaleRule::Same, &ladder[..3], &[1.0]),
            Err(Error::LadderTooShort(3))
        ));
    }

    #[test]
    fn scale_rule_json() {
        let r: ScaleRule = serde_json::from_str(r#"{"kind":"slow","net":"iterated_log"}"#).unwrap();
        assert_eq!(
            r,
            ScaleRule::Slow {
                net: SlowNet::IteratedLog,
                prefactor: 1.0
            }
        );
        let r: ScaleRule = serde_json::from_str(r#"{"kind":"same"}"#).unwrap();
        assert_eq!(r, ScaleRule::Same);
    }
}
