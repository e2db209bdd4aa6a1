//! Numerical integration helpers.
//!
//! Adaptive Simpson is used wherever a smooth integrand is available as a
//! function; composite Simpson is used for data already sampled on a uniform
//! grid (solver rows, pairings, energies).

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Composite Simpson rule for uniformly spaced samples.
///
/// An odd number of intervals is closed with Simpson's 3/8 rule on the last
/// three intervals; two samples fall back to the trapezoid rule.
pub fn simpson_uniform(values: &[f64], dx: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * dx * (values[0] + values[1]),
        3 => dx / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            if intervals.is_multiple_of(2) {
                simpson_even(values, dx)
            } else {
                let head = &values[..n - 3];
                let tail = &values[n - 4..];
                simpson_even(head, dx)
                    + 3.0 * dx / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3])
            }
        }
    }
}

fn simpson_even(values: &[f64], dx: f64) -> f64 {
    let n = values.len();
    if n < 3 {
        return if n == 2 {
            0.5 * dx * (values[0] + values[1])
        } else {
            0.0
        };
    }
    let mut sum = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    sum * dx / 3.0
}

/// Trapezoid rule for uniformly spaced samples.
pub fn trapezoid_uniform(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dx * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_simpson_integrates_gaussian() {
        let got = adaptive_simpson(&|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-13);
        assert!((got - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [5usize, 6, 9, 10] {
            let dx = 2.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n)
                .map(|i| {
                    let x = -1.0 + i as f64 * dx;
                    x * x * x + 2.0 * x * x + 1.0
                })
                .collect();
            assert!(
                (simpson_uniform(&v, dx) - (4.0 / 3.0 + 2.0)).abs() < 1e-13,
                "n={n}"
            );
        }
    }

    #[test]
    fn zero_width_interval() {
        assert_eq!(adaptive_simpson(&|x: f64| x, 1.0, 1.0, 1e-10), 0.0);
    }
}
