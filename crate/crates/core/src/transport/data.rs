//! Initial data `(u0, u1)` and their conversion to characteristic data
//! `v0 = u1 - c(0) u0'`, `w0 = u1 + c(0) u0'`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{self, Interpolation};
use crate::mollifier::MollifierProfile;

/// Samples on a uniform grid `x0 + i dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl Table {
    pub fn support(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.dx * (self.values.len() - 1) as f64)
    }

    fn eval(&self, x: f64) -> f64 {
        let q = (x - self.x0) / self.dx;
        interp::eval_uniform(
            |i| self.values[i],
            self.values.len(),
            q,
            Interpolation::MonotoneCubic,
        )
        .unwrap_or(0.0)
    }

    /// Fourth-order differences at the nodes, interpolated in between.
    fn derivative(&self, x: f64) -> f64 {
        let q = (x - self.x0) / self.dx;
        let n = self.values.len();
        let get = |i: isize| -> f64 {
            if i < 0 || i as usize >= n {
                0.0
            } else {
                self.values[i as usize]
            }
        };
        let d = |i: usize| {
            let i = i as isize;
            (-get(i + 2) + 8.0 * get(i + 1) - 8.0 * get(i - 1) + get(i - 2)) / (12.0 * self.dx)
        };
        interp::eval_uniform(d, n, q, Interpolation::MonotoneCubic).unwrap_or(0.0)
    }

    /// Rejects tables that are not compactly supported or not resolved.
    pub fn check_smooth(&self, name: &str) -> Result<()> {
        let v = &self.values;
        let n = v.len();
        let bad = |m: String| Err(Error::NonSmoothData(format!("{name}: {m}")));
        if n < 8 || !(self.dx > 0.0) {
            return bad("need at least 8 samples and dx > 0".into());
        }
        if v.iter().any(|x| !x.is_finite()) {
            return bad("non-finite sample".into());
        }
        if v[0] != 0.0 || v[1] != 0.0 || v[n - 1] != 0.0 || v[n - 2] != 0.0 {
            return bad("not compactly supported (two zero samples required at each end)".into());
        }
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let d1 = v.windows(2).fold(0.0f64, |m, w| m.max((w[1] - w[0]).abs()));
        let d2 = v
            .windows(3)
            .fold(0.0f64, |m, w| m.max((w[2] - 2.0 * w[1] + w[0]).abs()));
        if d1 > 0.2 * peak {
            return bad(format!(
                "jump of {d1:e} against peak {peak:e}; mollify the data first"
            ));
        }
        if d2 > 0.5 * d1 {
            return bad(format!(
                "kink: second difference {d2:e} against first difference {d1:e}"
            ));
        }
        Ok(())
    }
}

/// Initial displacement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum U0Spec {
    #[default]
    Zero,
    /// `amplitude * phi((x - center) / width)`.
    Bump {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    /// `amplitude * Phi(x / eps_data)`, a mollified step.
    SmoothedStep {
        amplitude: f64,
    },
    Tabulated(Table),
}

/// Initial velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum U1Spec {
    /// `phi_eps`, the regularized delta.
    #[default]
    Delta,
    /// `phi_eps^power`.
    DeltaPower {
        power: u32,
    },
    Bump {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    Tabulated(Table),
}

/// Scale of the data mollifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataScale {
    /// Same `eps` as the coefficient run.
    #[default]
    Run,
    Fixed {
        eps: f64,
    },
}

/// Which characteristic families carry the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    /// `(v0, w0)` as derived from `(u0, u1)`.
    #[default]
    Full,
    /// `(v0, 0)`.
    PlusOnly,
    /// `(0, w0)`.
    MinusOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct InitialData {
    #[serde(default)]
    pub u0: U0Spec,
    #[serde(default)]
    pub u1: U1Spec,
    #[serde(default)]
    pub scale: DataScale,
    #[serde(default)]
    pub splitting: Splitting,
}

impl InitialData {
    /// `u0 = 0`, `u1 = phi_eps`.
    pub fn delta() -> Self {
        Self::default()
    }

    pub fn delta_power(power: u32) -> Self {
        Self {
            u1: U1Spec::DeltaPower { power },
            ..Self::default()
        }
    }

    pub fn with_splitting(mut self, splitting: Splitting) -> Self {
        self.splitting = splitting;
        self
    }

    pub fn data_eps(&self, run_eps: f64) -> f64 {
        match self.scale {
            DataScale::Run => run_eps,
            DataScale::Fixed { eps } => eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let DataScale::Fixed { eps } = self.scale {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(crate::error::invalid(
                    "data.scale.eps",
                    format!("{eps} not in (0, 1]"),
                ));
            }
        }
        match &self.u0 {
            U0Spec::Bump { width, .. } if !(*width > 0.0) => {
                return Err(crate::error::invalid("u0.width", "must be positive"))
            }
            U0Spec::Tabulated(t) => t.check_smooth("u0")?,
            _ => {}
        }
        match &self.u1 {
            U1Spec::DeltaPower { power } if *power < 1 => {
                return Err(crate::error::invalid("u1.power", "must be at least 1"))
            }
            U1Spec::Bump { width, .. } if !(*width > 0.0) => {
                return Err(crate::error::invalid("u1.width", "must be positive"))
            }
            U1Spec::Tabulated(t) => t.check_smooth("u1")?,
            _ => {}
        }
        Ok(())
    }

    /// Bind the data to a mollifier and a data scale.
    pub fn resolve(&self, mollifier: Arc<MollifierProfile>, run_eps: f64) -> Result<ResolvedData> {
        self.validate()?;
        Ok(ResolvedData {
            spec: self.clone(),
            mollifier,
            eps: self.data_eps(run_eps),
        })
    }
}

/// Initial data evaluated with a concrete mollifier and scale.
#[derive(Debug, Clone)]
pub struct ResolvedData {
    spec: InitialData,
    mollifier: Arc<MollifierProfile>,
    eps: f64,
}

impl ResolvedData {
    pub fn spec(&self) -> &InitialData {
        &self.spec
    }

    /// Scale of the data mollifier.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn splitting(&self) -> Splitting {
        self.spec.splitting
    }

    pub fn u0(&self, x: f64) -> f64 {
        let m = &self.mollifier;
        match &self.spec.u0 {
            U0Spec::Zero => 0.0,
            U0Spec::Bump {
                center,
                width,
                amplitude,
            } => amplitude * m.density((x - center) / width),
            U0Spec::SmoothedStep { amplitude } => amplitude * m.antiderivative(x / self.eps),
            U0Spec::Tabulated(t) => t.eval(x),
        }
    }

    pub fn u0_prime(&self, x: f64) -> f64 {
        let m = &self.mollifier;
        match &self.spec.u0 {
            U0Spec::Zero => 0.0,
            U0Spec::Bump {
                center,
                width,
                amplitude,
            } => amplitude * m.derivative((x - center) / width) / width,
            U0Spec::SmoothedStep { amplitude } => amplitude * m.eval_scaled(self.eps, x),
            U0Spec::Tabulated(t) => t.derivative(x),
        }
    }

    pub fn u1(&self, x: f64) -> f64 {
        let m = &self.mollifier;
        match &self.spec.u1 {
            U1Spec::Delta => m.eval_scaled(self.eps, x),
            U1Spec::DeltaPower { power } => m.eval_scaled(self.eps, x).powi(*power as i32),
            U1Spec::Bump {
                center,
                width,
                amplitude,
            } => amplitude * m.density((x - center) / width),
            U1Spec::Tabulated(t) => t.eval(x),
        }
    }

    /// Interval outside which `u0'` and `u1` vanish.
    pub fn support(&self) -> (f64, f64) {
        let a = match &self.spec.u0 {
            U0Spec::Zero => None,
            U0Spec::Bump { center, width, .. } => Some((center - width, center + width)),
            U0Spec::SmoothedStep { .. } => Some((-self.eps, self.eps)),
            U0Spec::Tabulated(t) => Some(t.support()),
        };
        let b = match &self.spec.u1 {
            U1Spec::Delta | U1Spec::DeltaPower { .. } => (-self.eps, self.eps),
            U1Spec::Bump { center, width, .. } => (center - width, center + width),
            U1Spec::Tabulated(t) => t.support(),
        };
        match a {
            Some(a) => (a.0.min(b.0), a.1.max(b.1)),
            None => b,
        }
    }

    /// `(v0(x), w0(x))` with the splitting applied.
    pub fn characteristic(&self, c0: f64, x: f64) -> (f64, f64) {
        let u1 = self.u1(x);
        let du = c0 * self.u0_prime(x);
        let (v, w) = (u1 - du, u1 + du);
        match self.spec.splitting {
            Splitting::Full => (v, w),
            Splitting::PlusOnly => (v, 0.0),
            Splitting::MinusOnly => (0.0, w),
        }
    }
}

/// Sample `(v0, w0)` on the nodes `origin + j dx`, `j < n`.
///
/// Fails if the data support is not inside `[-half_width, half_width]`.
pub fn wave_to_system(
    data: &ResolvedData,
    c0: f64,
    origin: f64,
    dx: f64,
    n: usize,
    half_width: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (a, b) = data.support();
    if a < -half_width || b > half_width {
        return Err(Error::DomainTooSmall(format!(
            "data support [{a}, {b}] exceeds [-{half_width}, {half_width}]"
        )));
    }
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let j0 = (((a - origin) / dx).floor() as isize - 2).max(0) as usize;
    let j1 = ((((b - origin) / dx).ceil() as isize + 3).max(0) as usize).min(n);
    for j in j0..j1 {
        let (vj, wj) = data.characteristic(c0, origin + j as f64 * dx);
        v[j] = vj;
        w[j] = wj;
    }
    Ok((v, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon() -> Arc<MollifierProfile> {
        Arc::new(MollifierProfile::canonical())
    }

    #[test]
    fn delta_mode_is_symmetric() {
        let d = InitialData::delta().resolve(canon(), 0.1).unwrap();
        let (v, w) = d.characteristic(1.0, 0.03);
        assert_eq!(v, w);
        assert!((v - d.u1(0.03)).abs() < 1e-15);
        let d = InitialData::delta()
            .with_splitting(Splitting::PlusOnly)
            .resolve(canon(), 0.1)
            .unwrap();
        assert_eq!(d.characteristic(1.0, 0.03).1, 0.0);
    }

    #[test]
    fn displacement_splits_antisymmetrically() {
        let spec = InitialData {
            u0: U0Spec::Bump {
                center: 0.0,
                width: 0.5,
                amplitude: 1.0,
            },
            u1: U1Spec::Bump {
                center: 0.0,
                width: 0.5,
                amplitude: 0.0,
            },
            ..Default::default()
        };
        let d = spec.resolve(canon(), 0.1).unwrap();
        let (v, w) = d.characteristic(2.0, 0.2);
        assert!((v + w).abs() < 1e-15);
        assert!((w - 2.0 * d.u0_prime(0.2)).abs() < 1e-15);
    }

    #[test]
    fn power_mode_squares() {
        let d = InitialData::delta_power(2).resolve(canon(), 0.05).unwrap();
        let p = d.u1(0.0);
        let m = MollifierProfile::canonical();
        assert!((p - (m.peak() / 0.05).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn rejects_unmollified_table() {
        let mut values = vec![0.0; 40];
        for v in values.iter_mut().take(30).skip(10) {
            *v = 1.0;
        }
        let t = Table {
            x0: -1.0,
            dx: 0.05,
            values,
        };
        assert!(matches!(t.check_smooth("u1"), Err(Error::NonSmoothData(_))));
        let hat: Vec<f64> = (0..41)
            .map(|i| (1.0 - ((i as f64 - 20.0) / 15.0).abs()).max(0.0))
            .collect();
        let t = Table {
            x0: -1.0,
            dx: 0.05,
            values: hat,
        };
        assert!(t.check_smooth("u1").is_err());
    }

    #[test]
    fn accepts_resolved_table() {
        let m = MollifierProfile::canonical();
        let values: Vec<f64> = (0..201)
            .map(|i| m.density(-1.2 + i as f64 * 0.012))
            .collect();
        let t = Table {
            x0: -1.2,
            dx: 0.012,
            values,
        };
        t.check_smooth("u1").unwrap();
        assert!((t.eval(0.3) - m.density(0.3)).abs() < 1e-5);
        assert!((t.derivative(0.3) - m.derivative(0.3)).abs() < 1e-3);
    }

    #[test]
    fn support_check() {
        let d = InitialData::delta().resolve(canon(), 0.1).unwrap();
        assert!(wave_to_system(&d, 1.0, -1.0, 0.01, 201, 0.05).is_err());
        let (v, w) = wave_to_system(&d, 1.0, -1.0, 0.001, 2001, 1.0).unwrap();
        assert_eq!(v, w);
        let mass: f64 = v.iter().sum::<f64>() * 0.001;
        assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    }
}
