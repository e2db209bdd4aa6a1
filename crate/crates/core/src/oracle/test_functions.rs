//! Rescaled canonical bumps used as test functions.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::mollifier::MollifierProfile;

/// `psi(x) = phi((x - center) / width) / width`, unit mass, support
/// `[center - width, center + width]`.
#[derive(Debug, Clone, Serialize)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
    #[serde(skip)]
    profile: Arc<MollifierProfile>,
}

impl TestFunction {
    pub fn new(center: f64, width: f64, profile: Arc<MollifierProfile>) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite()) {
            return Err(invalid(
                "test function",
                "width must be positive and center finite",
            ));
        }
        Ok(Self {
            center,
            width,
            profile,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.profile.density((x - self.center) / self.width) / self.width
    }

    /// `int_{-inf}^x psi`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.profile.antiderivative((x - self.center) / self.width)
    }

    /// `int psi`, one by construction.
    pub fn mass(&self) -> f64 {
        self.cdf(self.center + self.width)
    }
}

/// Bumps of a common width at the given centers.
pub fn test_function_set(
    centers: &[f64],
    width: f64,
    profile: Arc<MollifierProfile>,
) -> Result<Vec<TestFunction>> {
    centers
        .iter()
        .map(|&c| TestFunction::new(c, width, profile.clone()))
        .collect()
}
