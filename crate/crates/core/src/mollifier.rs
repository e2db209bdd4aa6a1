//! Mollifier profiles: a symmetric bump supported in `[-1, 1]` with unit mass,
//! its scalings `phi_eps(x) = phi(x / eps) / eps`, and tabulated primitives.
//!
//! The primitive `Phi(x) = int_{-1}^x phi` is stored on a dense uniform table
//! and evaluated with monotone cubic Hermite interpolation, so evaluation is
//! O(1) and nondecreasing. A second primitive `Psi(x) = int_{-1}^x Phi` is
//! tabulated alongside; it gives the closed form of the regularized speed's
//! primitive inside the transition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{self, hermite, hermite_integral, limit_slopes};
use crate::quadrature::adaptive_simpson;

/// Number of nodes of the primitive table.
pub const TABLE_NODES: usize = 2048;

/// Which bump to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MollifierKind {
    /// `K exp(-1 / (1 - x^2))` on `(-1, 1)`, normalized to unit mass.
    #[default]
    Canonical,
    /// Samples on a uniform grid spanning `[-1, 1]` (endpoints included),
    /// interpolated with monotone cubics.
    Tabulated { samples: Vec<f64> },
}

#[derive(Debug, Clone)]
enum Shape {
    Canonical,
    Tabulated { samples: Vec<f64>, spacing: f64 },
}

/// An immutable mollifier profile with its primitive tables.
#[derive(Debug, Clone)]
pub struct MollifierProfile {
    shape: Shape,
    norm: f64,
    tol: f64,
    spacing: f64,
    primitive: Vec<f64>,
    density: Vec<f64>,
    second: Vec<f64>,
}

fn unnormalized_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

impl MollifierProfile {
    /// Canonical bump with quadrature tolerance `1e-13`.
    pub fn canonical() -> Self {
        Self::build(MollifierKind::Canonical, 1e-13).expect("canonical profile is valid")
    }

    /// Build a profile. `tol` must lie in `(0, 1e-6]`.
    pub fn build(kind: MollifierKind, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(crate::error::invalid(
                "tol",
                format!("{tol:e} not in (0, 1e-6]"),
            ));
        }
        let (shape, raw): (Shape, Box<dyn Fn(f64) -> f64>) = match kind {
            MollifierKind::Canonical => (Shape::Canonical, Box::new(unnormalized_bump)),
            MollifierKind::Tabulated { samples } => {
                validate_samples(&samples)?;
                let spacing = 2.0 / (samples.len() - 1) as f64;
                let s = samples.clone();
                let shape = Shape::Tabulated { samples, spacing };
                let f = move |x: f64| tabulated_value(&s, spacing, x);
                (shape, Box::new(f))
            }
        };

        let n = TABLE_NODES;
        let h = 2.0 / (n - 1) as f64;
        let node = |i: usize| -1.0 + i as f64 * h;
        let cell_tol = tol * h / 2.0;
        let cells: Vec<f64> = (0..n - 1)
            .map(|i| adaptive_simpson(&raw, node(i), node(i + 1), cell_tol))
            .collect();
        let mut cumulative = vec![0.0; n];
        for i in 0..n - 1 {
            cumulative[i + 1] = cumulative[i] + cells[i];
        }
        let total = cumulative[n - 1];
        if !(total > 0.0) {
            return Err(Error::InvalidMollifier {
                invariant: "unit mass",
                detail: "profile has no mass".into(),
            });
        }
        // symmetric profile: fold the left and right accumulations together
        let primitive: Vec<f64> = (0..n)
            .map(|i| 0.5 * (cumulative[i] + (total - cumulative[n - 1 - i])) / total)
            .collect();
        let norm = 1.0 / total;
        let density: Vec<f64> = (0..n).map(|i| norm * raw(node(i))).collect();

        let mut profile = Self {
            shape,
            norm,
            tol,
            spacing: h,
            primitive,
            density,
            second: Vec::new(),
        };
        let mut second = vec![0.0; n];
        for i in 0..n - 1 {
            let (y0, y1, m0, m1) = profile.cell(i);
            second[i + 1] = second[i] + h * hermite_integral(y0, y1, m0, m1, 1.0);
        }
        profile.second = second;
        Ok(profile)
    }

    /// Normalization constant applied to the raw shape.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Quadrature tolerance used to build the tables.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.shape, Shape::Canonical)
    }

    /// `phi(x)`; zero for `|x| >= 1`.
    pub fn density(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Canonical => self.norm * unnormalized_bump(x),
            Shape::Tabulated { samples, spacing } => {
                self.norm * tabulated_value(samples, *spacing, x)
            }
        }
    }

    /// `phi'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Canonical => {
                let d = 1.0 - x * x;
                self.norm * unnormalized_bump(x) * (-2.0 * x / (d * d))
            }
            Shape::Tabulated { samples, spacing } => {
                let q = (x + 1.0) / spacing;
                self.norm
                    * interp::derivative_uniform(|i| samples[i], samples.len(), q).unwrap_or(0.0)
                    / spacing
            }
        }
    }

    /// Peak value `phi(0)`, which is also the supremum.
    pub fn peak(&self) -> f64 {
        self.density(0.0)
    }

    /// `phi_eps(x) = phi(x / eps) / eps`.
    pub fn eval_scaled(&self, eps: f64, x: f64) -> f64 {
        debug_assert!(eps > 0.0);
        self.density(x / eps) / eps
    }

    /// Derivative of `phi_eps`.
    pub fn eval_scaled_derivative(&self, eps: f64, x: f64) -> f64 {
        self.derivative(x / eps) / (eps * eps)
    }

    /// `Phi(x) = int_{-1}^x phi`; 0 below the support, 1 above it.
    pub fn antiderivative(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let (i, t) = self.locate(x);
        let (y0, y1, m0, m1) = self.cell(i);
        hermite(y0, y1, m0, m1, t).clamp(0.0, 1.0)
    }

    /// `Psi(x) = int_{-1}^x Phi`; equals `Psi(1) + (x - 1)` beyond the support.
    pub fn second_antiderivative(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 0.0;
        }
        let n = self.second.len();
        if x >= 1.0 {
            return self.second[n - 1] + (x - 1.0);
        }
        let (i, t) = self.locate(x);
        let (y0, y1, m0, m1) = self.cell(i);
        self.second[i] + self.spacing * hermite_integral(y0, y1, m0, m1, t)
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let q = (x + 1.0) / self.spacing;
        let i = (q.floor() as usize).min(self.primitive.len() - 2);
        (i, q - i as f64)
    }

    /// Hermite data of table cell `i` in index units, slopes limited for monotonicity.
    fn cell(&self, i: usize) -> (f64, f64, f64, f64) {
        let y0 = self.primitive[i];
        let y1 = self.primitive[i + 1];
        let (m0, m1) = limit_slopes(
            y1 - y0,
            self.density[i] * self.spacing,
            self.density[i + 1] * self.spacing,
        );
        (y0, y1, m0, m1)
    }
}

fn tabulated_value(samples: &[f64], spacing: f64, x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    let q = (x + 1.0) / spacing;
    interp::eval_uniform(
        |i| samples[i],
        samples.len(),
        q,
        interp::Interpolation::MonotoneCubic,
    )
    .unwrap_or(0.0)
}

fn validate_samples(samples: &[f64]) -> Result<()> {
    let n = samples.len();
    let fail = |invariant: &'static str, detail: String| {
        Err(Error::InvalidMollifier { invariant, detail })
    };
    if n < 5 {
        return fail("support", format!("need at least 5 samples, got {n}"));
    }
    if samples.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return fail("support", "samples must be finite and nonnegative".into());
    }
    if samples[0] != 0.0 || samples[n - 1] != 0.0 {
        return fail("support", "profile must vanish at x = -1 and x = 1".into());
    }
    for i in 0..n / 2 {
        let d = (samples[i] - samples[n - 1 - i]).abs();
        if d > 1e-12 {
            return fail(
                "symmetry",
                format!("|phi(x) - phi(-x)| = {d:e} at node {i}"),
            );
        }
    }
    let spacing = 2.0 / (n - 1) as f64;
    for i in 0..n - 1 {
        let x_next = -1.0 + (i + 1) as f64 * spacing;
        if x_next <= 1e-12 && samples[i + 1] < samples[i] {
            return fail(
                "monotone rise",
                format!("decrease between nodes {i} and {}", i + 1),
            );
        }
    }
    let slopes = interp::pchip_slopes(samples);
    let mass: f64 = (0..n - 1)
        .map(|i| {
            spacing * hermite_integral(samples[i], samples[i + 1], slopes[i], slopes[i + 1], 1.0)
        })
        .sum();
    if (mass - 1.0).abs() > 1e-10 {
        return fail("unit mass", format!("integral = {mass:.15}"));
    }
    Ok(())
}

/// Rescale samples so that their monotone-cubic interpolant has unit mass.
pub fn normalize_samples(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    if n < 2 {
        return samples.to_vec();
    }
    let spacing = 2.0 / (n - 1) as f64;
    let slopes = interp::pchip_slopes(samples);
    let mass: f64 = (0..n - 1)
        .map(|i| {
            spacing * hermite_integral(samples[i], samples[i + 1], slopes[i], slopes[i + 1], 1.0)
        })
        .sum();
    samples.iter().map(|v| v / mass).collect()
}
