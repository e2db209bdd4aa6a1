//! Recover `u`, `u_t`, `u_x` on a rectangular grid from `(v, w)`:
//! `u_t = (v + w) / 2`, `u_x = (w - v) / (2c)`, and `u` by trapezoid
//! accumulation of `u_t` in time at fixed `x`.

use serde::Serialize;

use super::data::{ResolvedData, Splitting};
use super::solver::FieldPair;
use super::sparse::SparseRow;
use crate::error::{Error, Result};
use crate::interp::eval_uniform;

/// One snapshot of the reconstructed solution.
#[derive(Debug, Clone, Serialize)]
pub struct FieldRow {
    pub t: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub ux: Vec<f64>,
}

/// `u`, `u_t`, `u_x` on `x_i = x0 + i dx` at the requested times.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionField {
    pub x0: f64,
    pub dx: f64,
    pub rows: Vec<FieldRow>,
}

impl SolutionField {
    pub fn nx(&self) -> usize {
        self.rows.first().map_or(0, |r| r.u.len())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn row_at(&self, t: f64) -> Option<&FieldRow> {
        self.rows.iter().find(|r| (r.t - t).abs() < 1e-9)
    }
}

/// Dense copies of the label state at one time.
struct DenseState {
    slot: Option<usize>,
    v: Vec<f64>,
    w: Vec<f64>,
    rows: Option<(SparseRow, SparseRow)>,
}

impl DenseState {
    fn new(n: usize) -> Self {
        Self {
            slot: None,
            v: vec![0.0; n],
            w: vec![0.0; n],
            rows: None,
        }
    }

    fn load(&mut self, fp: &FieldPair, t: f64) {
        let slot = node_slot(fp.node_times(), t);
        if slot.is_some() && self.slot == slot {
            return;
        }
        if let Some((v, w)) = &self.rows {
            v.clear_in(&mut self.v);
            w.clear_in(&mut self.w);
        }
        let (v, w) = fp.state_at(t);
        v.scatter(&mut self.v);
        w.scatter(&mut self.w);
        self.rows = Some((v.into_owned(), w.into_owned()));
        self.slot = slot;
    }

    /// Output-index ranges where `v` resp. `w` may be nonzero at time `t`.
    fn ranges(&self, fp: &FieldPair, t: f64) -> Vec<(usize, usize)> {
        let d = fp.discretization();
        let n_out = d.n_out();
        let off = (d.k_label - d.k_out) as f64;
        let shift = fp.speed().primitive(t) / d.dx;
        let (v, w) = self.rows.as_ref().expect("loaded");
        let mut out = Vec::new();
        // label q_v = i + off - shift, q_w = i + off + shift
        for (row, s) in [(v, -shift), (w, shift)] {
            for run in row.runs() {
                let (a, b) = (run.start, run.end());
                let lo = (a as f64 - off - s - 2.0).floor();
                let hi = (b as f64 - off - s + 2.0).ceil();
                let lo = lo.max(0.0) as usize;
                let hi = (hi.max(0.0) as usize).min(n_out);
                if lo < hi {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    #[inline]
    fn vw(&self, fp: &FieldPair, i: usize, shift: f64) -> (f64, f64) {
        let d = fp.discretization();
        let n = d.n_labels();
        let base = i as f64 + (d.k_label - d.k_out) as f64;
        let kind = fp.interpolation();
        (
            eval_uniform(|j| self.v[j], n, base - shift, kind).unwrap_or(0.0),
            eval_uniform(|j| self.w[j], n, base + shift, kind).unwrap_or(0.0),
        )
    }
}

/// Index of the stored state used verbatim at `t`, if any.
fn node_slot(nodes: &[f64], t: f64) -> Option<usize> {
    let last = nodes.len() - 1;
    if t <= nodes[0] {
        Some(0)
    } else if t >= nodes[last] {
        Some(last)
    } else {
        nodes.binary_search_by(|s| s.total_cmp(&t)).ok()
    }
}

/// `u(0, .)`: the data displacement, or for split data the primitive of
/// `u_x(0) = (w0 - v0) / (2 c0)`.
fn initial_displacement(fp: &FieldPair, data: &ResolvedData) -> Vec<f64> {
    let d = fp.discretization();
    let n_out = d.n_out();
    match data.splitting() {
        Splitting::Full => (0..n_out).map(|i| data.u0(d.out_x(i))).collect(),
        _ => {
            let (v0, w0) = fp.initial();
            let c0 = fp.speed().speed(0.0);
            let off = d.k_label - d.k_out;
            let mut acc = 0.0;
            let mut prev = 0.0;
            let mut cum = vec![0.0; d.n_labels()];
            for (j, c) in cum.iter_mut().enumerate() {
                let g = (w0.get(j) - v0.get(j)) / (2.0 * c0);
                if j > 0 {
                    acc += 0.5 * d.dx * (prev + g);
                }
                prev = g;
                *c = acc;
            }
            (0..n_out).map(|i| cum[i + off]).collect()
        }
    }
}

/// Reconstruct snapshots at `times` (grid times in `[0, T]`).
pub fn reconstruct(fp: &FieldPair, data: &ResolvedData, times: &[f64]) -> Result<SolutionField> {
    let d = *fp.discretization();
    let mut idx: Vec<usize> = Vec::with_capacity(times.len());
    for &t in times {
        match d.time_index(t) {
            Some(m) => idx.push(m),
            None => {
                return Err(Error::OutsideWindow(format!(
                    "t = {t} is not a grid time in [0, {}]",
                    d.horizon()
                )))
            }
        }
    }
    let m_max = idx.iter().copied().max().unwrap_or(0);
    let t_max = d.time(m_max);
    let nodes = fp.node_times();
    let (n_first, n_last) = (nodes[0], nodes[nodes.len() - 1]);
    // uniform times outside the stepped window, node times inside, and the
    // requested times
    let mut grid: Vec<f64> = (0..=m_max)
        .map(|m| d.time(m))
        .filter(|&t| t <= n_first || t >= n_last)
        .chain(nodes.iter().copied().filter(|&t| t > 0.0 && t < t_max))
        .chain(idx.iter().map(|&m| d.time(m)))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let n_out = d.n_out();
    let n = d.n_labels();
    let mut u = initial_displacement(fp, data);
    let mut rows: Vec<Option<FieldRow>> = vec![None; idx.len()];
    let mut cur = DenseState::new(n);
    let mut next = DenseState::new(n);
    cur.load(fp, grid[0]);

    let snapshot = |state: &DenseState, t: f64, u: &[f64]| -> FieldRow {
        let shift = fp.speed().primitive(t) / d.dx;
        let c = fp.speed().speed(t);
        let mut ut = vec![0.0; n_out];
        let mut ux = vec![0.0; n_out];
        for (a, b) in state.ranges(fp, t) {
            for i in a..b {
                let (v, w) = state.vw(fp, i, shift);
                ut[i] = 0.5 * (v + w);
                ux[i] = (w - v) / (2.0 * c);
            }
        }
        FieldRow {
            t,
            u: u.to_vec(),
            ut,
            ux,
        }
    };

    for (g, &t0) in grid.iter().enumerate() {
        for (k, &m) in idx.iter().enumerate() {
            if rows[k].is_none() && (d.time(m) - t0).abs() <= 1e-12 {
                rows[k] = Some(snapshot(&cur, d.time(m), &u));
            }
        }
        let Some(&t1) = grid.get(g + 1) else { break };
        next.load(fp, t1);
        let s0 = fp.speed().primitive(t0) / d.dx;
        let s1 = fp.speed().primitive(t1) / d.dx;
        let mut ranges = cur.ranges(fp, t0);
        ranges.extend(next.ranges(fp, t1));
        ranges.sort();
        let mut merged: Vec<(usize, usize)> = Vec::new();
        for r in ranges {
            match merged.last_mut() {
                Some(last) if r.0 <= last.1 => last.1 = last.1.max(r.1),
                _ => merged.push(r),
            }
        }
        let half = 0.5 * (t1 - t0);
        for (a, b) in merged {
            for (i, ui) in u.iter_mut().enumerate().take(b).skip(a) {
                let (v0, w0) = cur.vw(fp, i, s0);
                let (v1, w1) = next.vw(fp, i, s1);
                *ui += half * 0.5 * (v0 + w0 + v1 + w1);
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(SolutionField {
        x0: -d.half_width(),
        dx: d.dx,
        rows: rows
            .into_iter()
            .map(|r| r.expect("every time visited"))
            .collect(),
    })
}
