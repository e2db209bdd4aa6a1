use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transport::{FieldPair, Profile, SolutionField, SparseRow};

/// Which quantity the growth orders are measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `max` over the characteristic variables `v` and `w`.
    #[default]
    Characteristic,
    U,
    Ut,
    Ux,
}

/// Uniform cells over `[0, T] x [-R, R]`, each sampled at a few interior times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellGrid {
    pub cell_t: f64,
    pub cell_x: f64,
    pub nt: usize,
    pub nx: usize,
    pub x_min: f64,
    pub rows_per_cell: usize,
}

impl CellGrid {
    pub fn new(
        horizon: f64,
        half_width: f64,
        cell_t: f64,
        cell_x: f64,
        rows_per_cell: usize,
    ) -> Result<Self> {
        let nt = (horizon / cell_t).round();
        let nx = (2.0 * half_width / cell_x).round();
        if !(cell_t > 0.0 && cell_x > 0.0)
            || (nt * cell_t - horizon).abs() > 1e-9
            || (nx * cell_x - 2.0 * half_width).abs() > 1e-9
        {
            return Err(Error::Config(format!(
                "cell size {cell_t} x {cell_x} must tile [0, {horizon}] x [-{half_width}, {half_width}]"
            )));
        }
        if rows_per_cell == 0 {
            return Err(Error::Config("rows_per_cell must be positive".into()));
        }
        Ok(Self {
            cell_t,
            cell_x,
            nt: nt as usize,
            nx: nx as usize,
            x_min: -half_width,
            rows_per_cell,
        })
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ti: usize, xi: usize) -> usize {
        ti * self.nx + xi
    }

    pub fn coords(&self, k: usize) -> (usize, usize) {
        (k / self.nx, k % self.nx)
    }

    pub fn t_bounds(&self, ti: usize) -> (f64, f64) {
        (ti as f64 * self.cell_t, (ti + 1) as f64 * self.cell_t)
    }

    pub fn x_bounds(&self, xi: usize) -> (f64, f64) {
        (
            self.x_min + xi as f64 * self.cell_x,
            self.x_min + (xi + 1) as f64 * self.cell_x,
        )
    }

    pub fn center(&self, k: usize) -> (f64, f64) {
        let (ti, xi) = self.coords(k);
        let (t0, t1) = self.t_bounds(ti);
        let (x0, x1) = self.x_bounds(xi);
        (0.5 * (t0 + t1), 0.5 * (x0 + x1))
    }

    /// Sample times of slab `ti`, at the midpoints of `rows_per_cell` sub-slabs.
    pub fn slab_times(&self, ti: usize) -> Vec<f64> {
        let (t0, _) = self.t_bounds(ti);
        let h = self.cell_t / self.rows_per_cell as f64;
        (0..self.rows_per_cell)
            .map(|r| t0 + (r as f64 + 0.5) * h)
            .collect()
    }

    pub fn all_times(&self) -> Vec<f64> {
        (0..self.nt).flat_map(|ti| self.slab_times(ti)).collect()
    }

    /// Slab containing `t` (half-open slabs).
    pub fn slab_of(&self, t: f64) -> Option<usize> {
        let k = (t / self.cell_t + 1e-9).floor();
        (k >= 0.0 && (k as usize) < self.nt).then_some(k as usize)
    }

    /// Column containing `x` (half-open columns).
    pub fn column_of(&self, x: f64) -> Option<usize> {
        let k = ((x - self.x_min) / self.cell_x + 1e-9).floor();
        (k >= 0.0 && (k as usize) < self.nx).then_some(k as usize)
    }
}

/// Fourth-order central difference of order `n <= 3` at index `i` of a padded buffer.
#[inline]
pub fn central_difference(f: &[f64], i: usize, n: usize, h: f64) -> f64 {
    match n {
        0 => f[i],
        1 => (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h),
        2 => {
            (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2])
                / (12.0 * h * h)
        }
        3 => {
            (-f[i + 3] + 8.0 * f[i + 2] - 13.0 * f[i + 1] + 13.0 * f[i - 1] - 8.0 * f[i - 2]
                + f[i - 3])
                / (8.0 * h * h * h)
        }
        _ => panic!("derivative order {n} not supported (max 3)"),
    }
}

pub const MAX_ORDER: usize = 3;
const PAD: usize = 6;
const REACH: usize = 3;

/// Visit every node where some difference of order `<= 3` may be nonzero,
/// passing `(x, [D0, D1, D2, D3])`.
fn for_each_difference<F: FnMut(f64, [f64; 4])>(p: &Profile, n_max: usize, mut visit: F) {
    let mut buf = Vec::new();
    for run in p.row.runs() {
        buf.clear();
        buf.extend(std::iter::repeat_n(0.0, PAD));
        buf.extend_from_slice(&run.values);
        buf.extend(std::iter::repeat_n(0.0, PAD));
        let first = run.start as isize - REACH as isize;
        let last = run.end() as isize + REACH as isize;
        for node in first.max(0)..last.min(p.row.len() as isize) {
            let b = (node - run.start as isize + PAD as isize) as usize;
            let mut d = [0.0; 4];
            for (n, dn) in d.iter_mut().enumerate().take(n_max + 1) {
                *dn = central_difference(&buf, b, n, p.dx).abs();
            }
            visit(p.x(node as usize), d);
        }
    }
}

/// `sup` over nodes of `p` with `x` in `[x_lo, x_hi)` of `|d^n p / dx^n|`.
pub fn derivative_sup(p: &Profile, x_lo: f64, x_hi: f64, n: usize) -> f64 {
    assert!(n <= MAX_ORDER);
    let mut sup = 0.0f64;
    for_each_difference(p, n, |x, d| {
        if x >= x_lo && x < x_hi {
            sup = sup.max(d[n]);
        }
    });
    sup
}

/// Per-cell sups for one eps: `out[cell][n]`.
///
/// `rows` holds, for every slab sample time, the profiles of every channel.
pub fn cell_sups(grid: &CellGrid, rows: &[Profile], n_max: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0f64; n_max + 1]; grid.len()];
    for p in rows {
        let Some(ti) = grid.slab_of(p.t) else {
            continue;
        };
        for_each_difference(p, n_max, |x, d| {
            if let Some(xi) = grid.column_of(x) {
                let (lo, hi) = grid.x_bounds(xi);
                // guard against the tolerance in column_of
                if x < lo - 1e-12 || x >= hi + 1e-12 {
                    return;
                }
                let cell = &mut out[grid.index(ti, xi)];
                for n in 0..=n_max {
                    cell[n] = cell[n].max(d[n]);
                }
            }
        });
    }
    out
}

/// Profiles of the chosen observable at the grid's sample times.
pub fn observable_profiles(
    grid: &CellGrid,
    fp: &FieldPair,
    field: Option<&SolutionField>,
    observable: Observable,
) -> Result<Vec<Profile>> {
    let d = fp.discretization();
    let mut out = Vec::new();
    for t in grid.all_times() {
        let m = d
            .time_index(t)
            .ok_or_else(|| Error::OutsideWindow(format!("sample time {t} is not a grid time")))?;
        match observable {
            Observable::Characteristic => {
                out.push(fp.v_profile(m));
                out.push(fp.w_profile(m));
            }
            _ => {
                let f = field.ok_or_else(|| {
                    Error::Config(format!(
                        "observable {observable:?} needs a reconstructed field"
                    ))
                })?;
                let row = f
                    .row_at(t)
                    .ok_or_else(|| Error::OutsideWindow(format!("no field row at t = {t}")))?;
                let values = match observable {
                    Observable::U => &row.u,
                    Observable::Ut => &row.ut,
                    _ => &row.ux,
                };
                out.push(Profile {
                    t,
                    x0: f.x0,
                    dx: f.dx,
                    row: SparseRow::from_dense(values),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(f: impl Fn(f64) -> f64, x0: f64, dx: f64, n: usize) -> Profile {
        let v: Vec<f64> = (0..n).map(|i| f(x0 + i as f64 * dx)).collect();
        Profile {
            t: 0.05,
            x0,
            dx,
            row: SparseRow::from_dense(&v),
        }
    }

    #[test]
    fn stencils_are_fourth_order_accurate() {
        let f = |x: f64| (x * 3.0).sin() * (-x * x).exp();
        let p = profile(f, -2.0, 1e-3, 4001);
        let x = 0.3;
        let i = ((x + 2.0) / 1e-3) as usize;
        let buf = p.row.to_dense();
        let h = 1e-3;
        let d1 = central_difference(&buf, i, 1, h);
        let d3 = central_difference(&buf, i, 3, h);
        let g = |x: f64| (x * 3.0).sin() * (-x * x).exp();
        let e = 1e-4;
        let d1_ref = (g(x + e) - g(x - e)) / (2.0 * e);
        let d3_ref =
            (g(x + 2.0 * e) - 2.0 * g(x + e) + 2.0 * g(x - e) - g(x - 2.0 * e)) / (2.0 * e * e * e);
        assert!((d1 - d1_ref).abs() < 1e-6);
        assert!((d3 - d3_ref).abs() / d3_ref.abs() < 1e-3);
    }

    #[test]
    fn sups_land_in_the_right_cells() {
        let grid = CellGrid::new(0.2, 1.0, 0.1, 0.1, 2).unwrap();
        let p = profile(
            |x| {
                if (x - 0.25).abs() < 0.02 {
                    1.0 - ((x - 0.25) / 0.02).powi(2)
                } else {
                    0.0
                }
            },
            -1.0,
            1e-3,
            2001,
        );
        let s = cell_sups(&grid, std::slice::from_ref(&p), 3);
        let k = grid.index(0, grid.column_of(0.25).unwrap());
        assert!((s[k][0] - 1.0).abs() < 1e-9);
        let empty = grid.index(0, grid.column_of(-0.5).unwrap());
        assert_eq!(s[empty], vec![0.0; 4]);
        assert!((derivative_sup(&p, 0.2, 0.3, 0) - 1.0).abs() < 1e-9);
        assert_eq!(derivative_sup(&p, 0.4, 0.5, 2), 0.0);
    }

    #[test]
    fn grid_geometry() {
        let g = CellGrid::new(2.0, 4.0, 0.1, 0.1, 4).unwrap();
        assert_eq!((g.nt, g.nx), (20, 80));
        assert_eq!(g.slab_of(1.5), Some(15));
        assert_eq!(g.column_of(0.0), Some(40));
        let times = g.slab_times(5);
        assert!((times[0] - 0.5125).abs() < 1e-12 && (times[3] - 0.5875).abs() < 1e-12);
        assert!(CellGrid::new(2.0, 4.0, 0.3, 0.1, 4).is_err());
    }
}
