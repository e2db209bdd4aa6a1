use serde::Serialize;

/// Ordinary least squares `y = a x + b`; returns `(a, b, rms residual)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a * x - b).powi(2))
        .sum();
    (a, b, (rss / n).sqrt())
}

/// Fitted growth order of a sup sequence over an eps ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GrowthFit {
    Fitted { p: f64, residual: f64 },
    BelowNoiseFloor,
}

impl GrowthFit {
    pub fn exponent(&self) -> Option<f64> {
        match self {
            GrowthFit::Fitted { p, .. } => Some(*p),
            GrowthFit::BelowNoiseFloor => None,
        }
    }

    pub fn residual(&self) -> Option<f64> {
        match self {
            GrowthFit::Fitted { residual, .. } => Some(*residual),
            GrowthFit::BelowNoiseFloor => None,
        }
    }
}

/// Slope of `log sup` against `log(1/eps)` with RMS residual.
///
/// Any sup at or below `floor` (or non-positive) yields
/// [`GrowthFit::BelowNoiseFloor`].
pub fn fit_growth_order(eps: &[f64], sups: &[f64], floor: f64) -> GrowthFit {
    assert_eq!(eps.len(), sups.len());
    if sups.len() < 2
        || sups
            .iter()
            .any(|s| !(*s > floor.max(0.0)) || !s.is_finite())
    {
        return GrowthFit::BelowNoiseFloor;
    }
    let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = sups.iter().map(|s| s.ln()).collect();
    let (p, _, residual) = least_squares(&xs, &ys);
    GrowthFit::Fitted { p, residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

    #[test]
    fn inverse_eps_has_order_one() {
        let sups: Vec<f64> = LADDER.iter().map(|e| 1.0 / e).collect();
        match fit_growth_order(&LADDER, &sups, 0.0) {
            GrowthFit::Fitted { p, residual } => {
                assert!((p - 1.0).abs() < 1e-12);
                assert!(residual < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_has_order_zero() {
        let f = fit_growth_order(&LADDER, &[3.0; 4], 0.0);
        assert!(f.exponent().unwrap().abs() < 1e-12);
    }

    #[test]
    fn floor_blocks_fit() {
        assert_eq!(
            fit_growth_order(&LADDER, &[1.0, 1.0, 0.0, 1.0], 0.0),
            GrowthFit::BelowNoiseFloor
        );
        assert_eq!(
            fit_growth_order(&LADDER, &[1.0, 1.0, 1e-9, 1.0], 1e-8),
            GrowthFit::BelowNoiseFloor
        );
    }
}
