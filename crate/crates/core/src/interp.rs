//! Interpolation on uniform grids.
//!
//! All routines work in index units: a node spacing of one, slopes expressed
//! per index step. Callers convert to physical units.

use serde::{Deserialize, Serialize};

/// Interpolation scheme used for label-grid lookups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    Linear,
    /// Piecewise cubic Hermite with Fritsch-Carlson limited slopes.
    #[default]
    MonotoneCubic,
}

/// Interior PCHIP slope from the two adjacent secants (harmonic mean,
/// zero at local extrema).
#[inline]
pub fn pchip_slope(left: f64, right: f64) -> f64 {
    if left * right <= 0.0 {
        0.0
    } else {
        2.0 * left * right / (left + right)
    }
}

/// One-sided end slope for PCHIP from the first two secants.
#[inline]
pub fn pchip_end_slope(d0: f64, d1: f64) -> f64 {
    let s = 0.5 * (3.0 * d0 - d1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Cubic Hermite value on the unit interval.
#[inline]
pub fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1
}

/// Derivative (per index unit) of the cubic Hermite on the unit interval.
#[inline]
pub fn hermite_derivative(y0: f64, y1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * m1
}

/// Integral of the cubic Hermite from 0 to `t` (index units).
#[inline]
pub fn hermite_integral(y0: f64, y1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    (0.5 * t4 - t3 + t) * y0
        + (0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2) * m0
        + (-0.5 * t4 + t3) * y1
        + (0.25 * t4 - t3 / 3.0) * m1
}

/// Fritsch-Carlson limiter applied to prescribed end slopes of one interval.
#[inline]
pub fn limit_slopes(secant: f64, m0: f64, m1: f64) -> (f64, f64) {
    if secant == 0.0 {
        return (0.0, 0.0);
    }
    let a = m0 / secant;
    let b = m1 / secant;
    let a = a.max(0.0);
    let b = b.max(0.0);
    let r = a * a + b * b;
    if r > 9.0 {
        let tau = 3.0 / r.sqrt();
        (tau * a * secant, tau * b * secant)
    } else {
        (a * secant, b * secant)
    }
}

/// PCHIP evaluation from a four-point neighbourhood.
///
/// `ym1` and `y2` are `None` at the ends of the grid, in which case a
/// one-sided end slope is used.
#[inline]
pub fn pchip4(ym1: Option<f64>, y0: f64, y1: f64, y2: Option<f64>, t: f64) -> f64 {
    let d = y1 - y0;
    let m0 = match ym1 {
        Some(a) => pchip_slope(y0 - a, d),
        None => match y2 {
            Some(c) => pchip_end_slope(d, c - y1),
            None => d,
        },
    };
    let m1 = match y2 {
        Some(c) => pchip_slope(d, c - y1),
        None => match ym1 {
            Some(a) => pchip_end_slope(d, y0 - a),
            None => d,
        },
    };
    hermite(y0, y1, m0, m1, t)
}

/// Evaluate the interpolant of `get` at fractional index `q`.
///
/// `get` returns the node value, `n` is the number of nodes. Positions
/// outside `[0, n-1]` return `None`.
pub fn eval_uniform<G: Fn(usize) -> f64>(
    get: G,
    n: usize,
    q: f64,
    kind: Interpolation,
) -> Option<f64> {
    if n == 0 || !(q >= 0.0 && q <= (n - 1) as f64) {
        return None;
    }
    if n == 1 {
        return Some(get(0));
    }
    let mut i = q.floor() as usize;
    if i >= n - 1 {
        i = n - 2;
    }
    let t = q - i as f64;
    let y0 = get(i);
    let y1 = get(i + 1);
    Some(match kind {
        Interpolation::Linear => y0 + t * (y1 - y0),
        Interpolation::MonotoneCubic => {
            let ym1 = if i > 0 { Some(get(i - 1)) } else { None };
            let y2 = if i + 2 < n { Some(get(i + 2)) } else { None };
            pchip4(ym1, y0, y1, y2, t)
        }
    })
}

/// PCHIP derivative (per index unit) at fractional index `q`.
pub fn derivative_uniform<G: Fn(usize) -> f64>(get: G, n: usize, q: f64) -> Option<f64> {
    if n < 2 || !(q >= 0.0 && q <= (n - 1) as f64) {
        return None;
    }
    let mut i = q.floor() as usize;
    if i >= n - 1 {
        i = n - 2;
    }
    let t = q - i as f64;
    let y0 = get(i);
    let y1 = get(i + 1);
    let d = y1 - y0;
    let ym1 = if i > 0 { Some(get(i - 1)) } else { None };
    let y2 = if i + 2 < n { Some(get(i + 2)) } else { None };
    let m0 = match (ym1, y2) {
        (Some(a), _) => pchip_slope(y0 - a, d),
        (None, Some(c)) => pchip_end_slope(d, c - y1),
        _ => d,
    };
    let m1 = match (y2, ym1) {
        (Some(c), _) => pchip_slope(d, c - y1),
        (None, Some(a)) => pchip_end_slope(d, y0 - a),
        _ => d,
    };
    Some(hermite_derivative(y0, y1, m0, m1, t))
}

/// Slopes (per index unit) of the PCHIP interpolant at every node.
pub fn pchip_slopes(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let sec: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = sec[0];
        m[1] = sec[0];
        return m;
    }
    m[0] = pchip_end_slope(sec[0], sec[1]);
    m[n - 1] = pchip_end_slope(sec[n - 2], sec[n - 3]);
    for i in 1..n - 1 {
        m[i] = pchip_slope(sec[i - 1], sec[i]);
    }
    m
}
