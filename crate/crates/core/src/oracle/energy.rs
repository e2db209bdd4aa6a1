//! Energy `E(t) = int (u_t^2 + c^2 u_x^2) dx` and the Gronwall ceiling
//! `E(0) exp(2 int_0^t |c c'| / min(c0, c1)^2)`.

use serde::Serialize;

use crate::coefficient::RegularizedSpeed;
use crate::error::{Error, Result};
use crate::quadrature::simpson_uniform;
use crate::transport::SolutionField;

/// Relative slack on the ceiling.
pub const CEILING_SLACK: f64 = 0.05;
/// Allowed relative drift where the speed is constant.
pub const FLAT_TOL: f64 = 0.01;
/// Fraction of the window at each end that must stay quiet.
const BOUNDARY_STRIP: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct EnergyTrace {
    pub eps: f64,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub ceiling: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub trace: EnergyTrace,
    /// Largest `|E(t) / E(t_a) - 1|` over rows in `[0, 1 - s]` and `[1 + s, T]`.
    pub flat_deviation: f64,
    /// Largest `E(t) / ceiling(t)`.
    pub ceiling_ratio: f64,
    /// Largest `|E(t) / E(0) - 1|`.
    pub drift: f64,
    pub flat: bool,
    pub under_ceiling: bool,
}

fn energy_of(field: &SolutionField, k: usize, c: f64) -> f64 {
    let r = &field.rows[k];
    let dens: Vec<f64> =
        r.ut.iter()
            .zip(&r.ux)
            .map(|(a, b)| a * a + c * c * b * b)
            .collect();
    simpson_uniform(&dens, field.dx)
}

/// Energy trace and verdicts. Rows must be in increasing time and include `t = 0`.
pub fn energy_check(field: &SolutionField, rs: &RegularizedSpeed) -> Result<EnergyReport> {
    if field.rows.first().map(|r| r.t) != Some(0.0) {
        return Err(Error::OutsideWindow(
            "energy trace needs a row at t = 0".into(),
        ));
    }
    let n = field.nx();
    let strip = ((n as f64 * BOUNDARY_STRIP).ceil() as usize).max(1);
    let peak = field
        .rows
        .iter()
        .flat_map(|r| r.ut.iter().chain(&r.ux))
        .fold(0.0f64, |m, v| m.max(v.abs()));
    for r in &field.rows {
        let edge = (0..strip)
            .chain(n - strip..n)
            .map(|i| r.ut[i].abs().max(r.ux[i].abs()))
            .fold(0.0f64, f64::max);
        if edge > 1e-12 * peak {
            return Err(Error::OutsideWindow(format!(
                "support touches the boundary at t = {} (energy flux)",
                r.t
            )));
        }
    }

    let times: Vec<f64> = field.rows.iter().map(|r| r.t).collect();
    let energy: Vec<f64> = (0..field.rows.len())
        .map(|k| energy_of(field, k, rs.speed(times[k])))
        .collect();
    let e0 = energy[0];
    let ceiling: Vec<f64> = times
        .iter()
        .map(|&t| e0 * (2.0 * rs.energy_rate_integral(t)).exp())
        .collect();

    let (lo, hi) = rs.transition();
    let horizon = *times.last().expect("rows");
    let mut flat_deviation = 0.0f64;
    for (a, b) in [(0.0, lo), (hi, horizon)] {
        let idx: Vec<usize> = (0..times.len())
            .filter(|&k| times[k] >= a && times[k] <= b)
            .collect();
        if let Some(&first) = idx.first() {
            for &k in &idx {
                flat_deviation = flat_deviation.max((energy[k] / energy[first] - 1.0).abs());
            }
        }
    }
    let ceiling_ratio = energy
        .iter()
        .zip(&ceiling)
        .map(|(e, c)| e / c)
        .fold(0.0f64, f64::max);
    let drift = energy
        .iter()
        .map(|e| (e / e0 - 1.0).abs())
        .fold(0.0f64, f64::max);
    Ok(EnergyReport {
        trace: EnergyTrace {
            eps: rs.eps(),
            times,
            energy,
            ceiling,
        },
        flat_deviation,
        ceiling_ratio,
        drift,
        flat: flat_deviation <= FLAT_TOL,
        under_ceiling: ceiling_ratio <= 1.0 + CEILING_SLACK,
    })
}
