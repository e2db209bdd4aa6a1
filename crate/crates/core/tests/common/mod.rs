//! Independent reference values for the integration tests: the canonical
//! bump is integrated here by composite Gauss-Legendre, without the crate's
//! tables or quadrature.
#![allow(dead_code)]

const GL_NODES: [f64; 5] = [
    0.0,
    0.538_469_310_105_683_1,
    -0.538_469_310_105_683_1,
    0.906_179_845_938_664,
    -0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Unnormalized bump `exp(-1/(1 - y^2))` on `(-1, 1)`.
pub fn raw_bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

/// `int_{-1}^{1} exp(-1/(1 - y^2)) dy`.
pub fn bump_mass() -> f64 {
    gauss_legendre(raw_bump, -1.0, 1.0, 4000)
}

/// Normalized bump cdf at `z`, given the mass.
pub fn bump_cdf(z: f64, mass: f64) -> f64 {
    if z <= -1.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else {
        gauss_legendre(raw_bump, -1.0, z, 400) / mass
    }
}

/// Observed convergence order from errors at successive halvings.
pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
