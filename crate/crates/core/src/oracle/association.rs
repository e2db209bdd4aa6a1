//! Weak pairings of regularized fields against the oracle.

use serde::Serialize;

use super::fronts::FrontSolution;
use super::smooth::SmoothSolution;
use super::test_functions::TestFunction;
use crate::error::{Error, Result};
use crate::quadrature::simpson_uniform;
use crate::transport::SolutionField;

/// Absolute difference treated as exact agreement.
pub const ASSOC_FLOOR: f64 = 1e-12;
/// Relative difference at the discretization level. With `dx = eps/20` the
/// sampled mollifier alone misses unit mass by about `4e-6`, for every eps.
pub const ASSOC_FLOOR_REL: f64 = 1e-5;

/// The distributional limit solution.
#[derive(Debug, Clone)]
pub enum PiecewiseSolution {
    Fronts(FrontSolution),
    Smooth(SmoothSolution),
}

impl PiecewiseSolution {
    pub fn u(&self, t: f64, x: f64) -> f64 {
        match self {
            Self::Fronts(f) => f.u(t, x),
            Self::Smooth(s) => s.u(t, x),
        }
    }

    pub fn pair(&self, psi: &TestFunction, t: f64) -> f64 {
        match self {
            Self::Fronts(f) => f.pair(psi, t),
            Self::Smooth(s) => s.pair(psi, t),
        }
    }
}

/// `int u(t, x) psi(x) dx` for a reconstructed field, composite Simpson on
/// the field's grid.
pub fn pair_field(field: &SolutionField, psi: &TestFunction, t: f64) -> Result<f64> {
    let (a, b) = psi.support();
    let n = field.nx();
    let x_hi = field.x(n.saturating_sub(1));
    if a < field.x0 || b > x_hi {
        return Err(Error::OutsideWindow(format!(
            "test function support [{a}, {b}] leaves [{}, {x_hi}]",
            field.x0
        )));
    }
    let row = field
        .row_at(t)
        .ok_or_else(|| Error::OutsideWindow(format!("no snapshot at t = {t}")))?;
    let i0 = ((a - field.x0) / field.dx).floor() as usize;
    let i1 = (((b - field.x0) / field.dx).ceil() as usize).min(n - 1);
    let vals: Vec<f64> = (i0..=i1).map(|i| row.u[i] * psi.eval(field.x(i))).collect();
    Ok(simpson_uniform(&vals, field.dx))
}

/// One `(psi, t)` entry of the convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct AssociationRow {
    pub test: usize,
    pub center: f64,
    pub width: f64,
    pub t: f64,
    pub oracle: f64,
    pub pairs: Vec<f64>,
    pub diffs: Vec<f64>,
    /// Final difference over `|oracle|`.
    pub relative: f64,
    pub monotone: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssociationTable {
    pub ladder: Vec<f64>,
    pub tol: f64,
    pub rows: Vec<AssociationRow>,
    pub pass: bool,
}

impl AssociationTable {
    pub fn worst_relative(&self) -> f64 {
        self.rows.iter().map(|r| r.relative).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

/// Non-increasing over the last three entries, with differences at the
/// floor counting as converged.
fn tail_monotone(diffs: &[f64], floor: f64) -> bool {
    let k = diffs.len().saturating_sub(3);
    diffs[k..].windows(2).all(|w| w[1] <= w[0] || w[1] <= floor)
}

/// Compare pairings of `fields` (one per ladder `eps`, decreasing) with the
/// oracle for every test function and time.
pub fn association_check(
    ladder: &[f64],
    fields: &[SolutionField],
    oracle: &PiecewiseSolution,
    tests: &[TestFunction],
    times: &[f64],
    tol: f64,
) -> Result<AssociationTable> {
    if ladder.len() != fields.len() {
        return Err(Error::MismatchedRuns(format!(
            "{} ladder points but {} fields",
            ladder.len(),
            fields.len()
        )));
    }
    if ladder.len() < 3 {
        return Err(Error::LadderTooShort(ladder.len()));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::MismatchedRuns(
            "ladder must be strictly decreasing".into(),
        ));
    }
    let mut rows = Vec::new();
    for (j, psi) in tests.iter().enumerate() {
        for &t in times {
            let oracle_value = oracle.pair(psi, t);
            let pairs = fields
                .iter()
                .map(|f| pair_field(f, psi, t))
                .collect::<Result<Vec<_>>>()?;
            let diffs: Vec<f64> = pairs.iter().map(|p| (p - oracle_value).abs()).collect();
            let last = *diffs.last().expect("nonempty ladder");
            let relative = if oracle_value != 0.0 {
                last / oracle_value.abs()
            } else if last <= ASSOC_FLOOR {
                0.0
            } else {
                f64::INFINITY
            };
            let floor = ASSOC_FLOOR.max(ASSOC_FLOOR_REL * oracle_value.abs());
            let monotone = tail_monotone(&diffs, floor);
            let pass = monotone && (last <= tol * oracle_value.abs() || last <= floor);
            rows.push(AssociationRow {
                test: j,
                center: psi.center,
                width: psi.width,
                t,
                oracle: oracle_value,
                pairs,
                diffs,
                relative,
                monotone,
                pass,
            });
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(AssociationTable {
        ladder: ladder.to_vec(),
        tol,
        rows,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_tail() {
        assert!(tail_monotone(&[5.0, 1.0, 0.5, 0.25], 1e-12));
        assert!(tail_monotone(&[0.1, 9.0, 0.5, 0.25], 1e-12));
        assert!(!tail_monotone(&[5.0, 1.0, 0.5, 0.6], 1e-12));
        assert!(tail_monotone(&[1.0, 1e-13, 2e-13], 1e-12));
    }
}
