use serde::{Deserialize, Serialize};

use crate::coefficient::RegularizedSpeed;
use crate::error::{invalid, Error, Result};
use crate::interp::Interpolation;

/// Time steps per unit time are a multiple of this, so that every
/// `0.0025` is a grid time.
pub const STEP_QUANTUM: usize = 400;

fn default_half_width() -> f64 {
    4.0
}
fn default_horizon() -> f64 {
    2.0
}
fn default_tol_num() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Output window is `|x| <= half_width`.
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// Defaults to the largest divisor of `half_width` not above `eps_data / 20`.
    #[serde(default)]
    pub label_spacing: Option<f64>,
    /// Defaults to the largest `1 / (400 k)` meeting the step bounds.
    #[serde(default)]
    pub time_step: Option<f64>,
    #[serde(default)]
    pub interpolation: Interpolation,
    /// Relative numerical tolerance (against the data peak).
    #[serde(default = "default_tol_num")]
    pub tol_num: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            half_width: default_half_width(),
            horizon: default_horizon(),
            label_spacing: None,
            time_step: None,
            interpolation: Interpolation::default(),
            tol_num: default_tol_num(),
        }
    }
}

/// Concrete grids for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discretization {
    pub dx: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// Output nodes are `(i - k_out) dx`, `i <= 2 k_out`.
    pub k_out: usize,
    /// Label nodes are `(j - k_label) dx`, `j <= 2 k_label`.
    pub k_label: usize,
}

impl Discretization {
    pub fn n_labels(&self) -> usize {
        2 * self.k_label + 1
    }

    pub fn n_out(&self) -> usize {
        2 * self.k_out + 1
    }

    pub fn label(&self, j: usize) -> f64 {
        (j as f64 - self.k_label as f64) * self.dx
    }

    pub fn out_x(&self, i: usize) -> f64 {
        (i as f64 - self.k_out as f64) * self.dx
    }

    pub fn label_half_width(&self) -> f64 {
        self.k_label as f64 * self.dx
    }

    pub fn half_width(&self) -> f64 {
        self.k_out as f64 * self.dx
    }

    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.n_steps)
    }

    /// Grid index of time `t`, if `t` is a grid time in `[0, T]`.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        let q = t / self.dt;
        let m = q.round();
        if (q - m).abs() > 1e-6 || m < 0.0 || m as usize > self.n_steps {
            None
        } else {
            Some(m as usize)
        }
    }
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0)
}

impl SolverConfig {
    pub fn validate_basic(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(invalid("half_width", "must be positive"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(invalid("horizon", "must be positive"));
        }
        if !is_integer(self.horizon * STEP_QUANTUM as f64) {
            return Err(invalid(
                "horizon",
                format!("must be a multiple of 1/{STEP_QUANTUM}"),
            ));
        }
        if !(self.tol_num > 0.0 && self.tol_num < 1e-3) {
            return Err(invalid("tol_num", "must lie in (0, 1e-3)"));
        }
        Ok(())
    }

    /// Choose and check grids for a coefficient and a data scale.
    pub fn discretize(&self, rs: &RegularizedSpeed, eps_data: f64) -> Result<Discretization> {
        self.validate_basic()?;
        let r = self.half_width;
        let dx_bound = eps_data / 20.0;
        let dx = match self.label_spacing {
            Some(dx) => {
                if !(dx > 0.0) {
                    return Err(invalid("label_spacing", "must be positive"));
                }
                if dx > dx_bound * (1.0 + 1e-12) {
                    return Err(Error::UnderResolved {
                        dx,
                        bound: dx_bound,
                    });
                }
                if !is_integer(r / dx) {
                    return Err(invalid("label_spacing", "must divide half_width"));
                }
                dx
            }
            None => r / (r / dx_bound - 1e-9).ceil(),
        };
        let k_out = (r / dx).round() as usize;

        let c_max = rs.jump().max();
        let s_bound = rs.width() / 10.0;
        let cfl_bound = dx / (2.0 * c_max);
        let dt = match self.time_step {
            Some(dt) => {
                if !(dt > 0.0) {
                    return Err(invalid("time_step", "must be positive"));
                }
                if dt > s_bound * (1.0 + 1e-12) {
                    return Err(Error::StepTooLarge {
                        dt,
                        bound: s_bound,
                        which: "s(eps)/10",
                    });
                }
                if dt > cfl_bound * (1.0 + 1e-12) {
                    return Err(Error::StepTooLarge {
                        dt,
                        bound: cfl_bound,
                        which: "dx/(2 max(c0, c1))",
                    });
                }
                if !is_integer(1.0 / dt) || !is_integer(self.horizon / dt) {
                    return Err(invalid(
                        "time_step",
                        "must be 1/M with M*horizon an integer",
                    ));
                }
                dt
            }
            None => {
                let bound = s_bound.min(cfl_bound);
                let k = (1.0 / (STEP_QUANTUM as f64 * bound) - 1e-9).ceil().max(1.0);
                1.0 / (k * STEP_QUANTUM as f64)
            }
        };
        let n_steps = (self.horizon / dt).round() as usize;
        let reach = rs.primitive(self.horizon);
        let k_label = k_out + ((reach + 4.0 * dx) / dx).ceil() as usize;
        Ok(Discretization {
            dx,
            dt,
            n_steps,
            k_out,
            k_label,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::{JumpSpeed, ScaleRule};
    use crate::mollifier::MollifierProfile;
    use std::sync::Arc;

    fn rs(eps: f64) -> RegularizedSpeed {
        RegularizedSpeed::new(
            JumpSpeed::new(1.0, 2.0).unwrap(),
            Arc::new(MollifierProfile::canonical()),
            ScaleRule::Same,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn default_grids_meet_bounds() {
        for eps in [0.1, 0.05, 0.025, 0.0125] {
            let r = rs(eps);
            let d = SolverConfig::default().discretize(&r, eps).unwrap();
            assert!(d.dx <= eps / 20.0 * (1.0 + 1e-12));
            assert!(d.dt <= (eps / 10.0).min(d.dx / 4.0) * (1.0 + 1e-12));
            assert!(is_integer(1.0 / d.dt / 400.0));
            assert_eq!(d.time_index(1.0).map(|m| d.time(m)), Some(1.0));
            assert!(d.label_half_width() >= 4.0 + 3.0);
        }
    }

    #[test]
    fn rejects_large_step() {
        let r = rs(0.1);
        let cfg = SolverConfig {
            time_step: Some(0.02),
            ..Default::default()
        };
        match cfg.discretize(&r, 0.1) {
            Err(Error::StepTooLarge { which, .. }) => assert_eq!(which, "s(eps)/10"),
            other => panic!("{other:?}"),
        }
        let cfg = SolverConfig {
            time_step: Some(0.0025),
            ..Default::default()
        };
        match cfg.discretize(&r, 0.1) {
            Err(Error::StepTooLarge { which, .. }) => assert_eq!(which, "dx/(2 max(c0, c1))"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_coarse_labels() {
        let cfg = SolverConfig {
            label_spacing: Some(0.01),
            ..Default::default()
        };
        assert!(matches!(
            cfg.discretize(&rs(0.1), 0.1),
            Err(Error::UnderResolved { .. })
        ));
    }
}
