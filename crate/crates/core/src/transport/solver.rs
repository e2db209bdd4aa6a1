//! Classical RK4 along characteristics in label coordinates.
//!
//! With `xi = x - X(t)` and `eta = x + X(t)` the system becomes
//!
//! ```text
//! dV/ds (s, xi)  = mu(s) [V(s, xi)  - W(s, xi + 2X(s))]
//! dW/ds (s, eta) = mu(s) [W(s, eta) - V(s, eta - 2X(s))]
//! ```
//!
//! so advection is the identity and the state only changes while `mu` is
//! nonzero. Outside `[1 - s, 1 + s]` nothing is stepped.

use std::borrow::Cow;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Discretization, SolverConfig};
use super::data::ResolvedData;
use super::sparse::SparseRow;
use crate::coefficient::RegularizedSpeed;
use crate::error::Result;
use crate::interp::{eval_uniform, Interpolation};

const PAR_THRESHOLD: usize = 4096;

/// One time row of `v` or `w` on a uniform `x` grid `x0 + i dx`.
#[derive(Debug, Clone)]
pub struct Profile {
    pub t: f64,
    pub x0: f64,
    pub dx: f64,
    pub row: SparseRow,
}

impl Profile {
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }
}

/// Solution nets `(V, W)` for one eps.
///
/// States are stored at the node times of the transition stepping; before
/// the first node and after the last one the state is constant.
#[derive(Debug, Clone)]
pub struct FieldPair {
    speed: RegularizedSpeed,
    disc: Discretization,
    interpolation: Interpolation,
    tol_num: f64,
    v0: SparseRow,
    w0: SparseRow,
    times: Vec<f64>,
    states: Vec<(SparseRow, SparseRow)>,
    /// Steps per label of coupling shift.
    substeps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub eps: f64,
    pub dx: f64,
    pub dt: f64,
    pub steps_taken: usize,
    pub substeps_per_label: usize,
    pub data_peak: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub w_min: f64,
    pub w_max: f64,
    /// `sup_t (sup_x |v| + sup_x |w|)`, an upper bound for `sup (|v| + |w|)`.
    pub sup_sum: f64,
    pub gronwall_bound: f64,
}

impl FieldPair {
    pub fn speed(&self) -> &RegularizedSpeed {
        &self.speed
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn tol_num(&self) -> f64 {
        self.tol_num
    }

    pub fn initial(&self) -> (&SparseRow, &SparseRow) {
        (&self.v0, &self.w0)
    }

    /// `max(sup |v0|, sup |w0|)`.
    pub fn data_peak(&self) -> f64 {
        self.v0.max_abs().max(self.w0.max_abs())
    }

    pub fn steps_taken(&self) -> usize {
        self.states.len() - 1
    }

    pub fn substeps_per_label(&self) -> usize {
        self.substeps
    }

    /// Times of the stored states.
    pub fn node_times(&self) -> &[f64] {
        &self.times
    }

    pub fn stored_state(&self, k: usize) -> (&SparseRow, &SparseRow) {
        let s = &self.states[k];
        (&s.0, &s.1)
    }

    /// Label-grid state at time `t`; between nodes, four-point Lagrange
    /// interpolation in time with label-independent weights.
    pub fn state_at(&self, t: f64) -> (Cow<'_, SparseRow>, Cow<'_, SparseRow>) {
        let times = &self.times;
        let last = times.len() - 1;
        if t <= times[0] {
            let (v, w) = self.stored_state(0);
            return (Cow::Borrowed(v), Cow::Borrowed(w));
        }
        if t >= times[last] {
            let (v, w) = self.stored_state(last);
            return (Cow::Borrowed(v), Cow::Borrowed(w));
        }
        let k = times.partition_point(|&s| s <= t) - 1;
        if times[k] == t {
            let (v, w) = self.stored_state(k);
            return (Cow::Borrowed(v), Cow::Borrowed(w));
        }
        let width = 4.min(times.len());
        let k0 = k.saturating_sub(1).min(times.len() - width);
        let nodes = &times[k0..k0 + width];
        let weights: Vec<f64> = (0..width)
            .map(|i| {
                (0..width)
                    .filter(|&j| j != i)
                    .map(|j| (t - nodes[j]) / (nodes[i] - nodes[j]))
                    .product()
            })
            .collect();
        let vs: Vec<&SparseRow> = (k0..k0 + width).map(|i| &self.states[i].0).collect();
        let ws: Vec<&SparseRow> = (k0..k0 + width).map(|i| &self.states[i].1).collect();
        (
            Cow::Owned(combine(&vs, &weights)),
            Cow::Owned(combine(&ws, &weights)),
        )
    }

    /// State at grid time index `m`.
    pub fn state(&self, m: usize) -> (Cow<'_, SparseRow>, Cow<'_, SparseRow>) {
        self.state_at(self.disc.time(m))
    }

    /// `v(t_m, .)` as a row in `x`.
    pub fn v_profile(&self, m: usize) -> Profile {
        let t = self.disc.time(m);
        Profile {
            t,
            x0: -self.disc.label_half_width() + self.speed.primitive(t),
            dx: self.disc.dx,
            row: self.state_at(t).0.into_owned(),
        }
    }

    /// `w(t_m, .)` as a row in `x`.
    pub fn w_profile(&self, m: usize) -> Profile {
        let t = self.disc.time(m);
        Profile {
            t,
            x0: -self.disc.label_half_width() - self.speed.primitive(t),
            dx: self.disc.dx,
            row: self.state_at(t).1.into_owned(),
        }
    }

    /// Interpolated `(v, w)` at physical `(t_m, x)`.
    pub fn values_at(&self, m: usize, x: f64) -> (f64, f64) {
        let t = self.disc.time(m);
        let xt = self.speed.primitive(t);
        let (v, w) = self.state_at(t);
        let n = self.disc.n_labels();
        let l = self.disc.label_half_width();
        let dx = self.disc.dx;
        let qv = (x - xt + l) / dx;
        let qw = (x + xt + l) / dx;
        (
            eval_uniform(|i| v.get(i), n, qv, self.interpolation).unwrap_or(0.0),
            eval_uniform(|i| w.get(i), n, qw, self.interpolation).unwrap_or(0.0),
        )
    }

    /// A field with the same data and grids but identically zero states.
    pub fn zeroed(&self) -> Self {
        let n = self.disc.n_labels();
        let states = vec![(SparseRow::zeros(n), SparseRow::zeros(n)); self.states.len()];
        Self {
            states,
            ..self.clone()
        }
    }

    pub fn summary(&self) -> FieldSummary {
        let mut v_min = 0.0f64;
        let mut v_max = 0.0f64;
        let mut w_min = 0.0f64;
        let mut w_max = 0.0f64;
        let mut sup_sum = 0.0f64;
        for (v, w) in &self.states {
            v_min = v_min.min(v.min());
            v_max = v_max.max(v.max());
            w_min = w_min.min(w.min());
            w_max = w_max.max(w.max());
            sup_sum = sup_sum.max(v.max_abs() + w.max_abs());
        }
        let j = self.speed.jump();
        FieldSummary {
            eps: self.speed.eps(),
            dx: self.disc.dx,
            dt: self.disc.dt,
            steps_taken: self.steps_taken(),
            substeps_per_label: self.substeps,
            data_peak: self.data_peak(),
            v_min,
            v_max,
            w_min,
            w_max,
            sup_sum,
            gronwall_bound: (self.v0.max_abs() + self.w0.max_abs()) * j.max() / j.min(),
        }
    }
}

/// `sum_i weights[i] * rows[i]`.
fn combine(rows: &[&SparseRow], weights: &[f64]) -> SparseRow {
    let n = rows[0].len();
    let hull = rows
        .iter()
        .filter_map(|r| r.hull())
        .fold(None, |acc, h| union(acc, Some(h)));
    let Some((lo, hi)) = hull else {
        return SparseRow::zeros(n);
    };
    let mut dense = vec![0.0; n];
    for (r, &wt) in rows.iter().zip(weights) {
        for run in r.runs() {
            for (k, v) in run.values.iter().enumerate() {
                dense[run.start + k] += wt * v;
            }
        }
    }
    SparseRow::from_dense_range(&dense, lo, hi)
}

fn hull_of(dense: &[f64], lo: usize, hi: usize) -> Option<(usize, usize)> {
    let first = (lo..hi).find(|&j| dense[j] != 0.0)?;
    let last = (lo..hi).rev().find(|&j| dense[j] != 0.0)?;
    Some((first, last + 1))
}

fn union(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        (x, None) | (None, x) => x,
    }
}

/// Labels to update: own support plus the preimage of the other family's
/// support under the coupling shift, padded, clipped to `[0, active)`.
fn update_range(
    own: Option<(usize, usize)>,
    other: Option<(usize, usize)>,
    shift_lo: f64,
    shift_hi: f64,
    sign: f64,
    pad: usize,
    active: usize,
) -> Option<(usize, usize)> {
    let pre = other.map(|(a, b)| {
        // own label j reads other at j + sign * shift
        let (s0, s1) = if sign > 0.0 {
            (shift_hi, shift_lo)
        } else {
            (-shift_lo, -shift_hi)
        };
        let lo = a as f64 - s0;
        let hi = b as f64 - s1;
        (lo.floor().max(0.0) as usize, hi.ceil().max(0.0) as usize)
    });
    let (lo, hi) = union(own, pre)?;
    let lo = lo.saturating_sub(pad);
    let hi = (hi + pad).min(active);
    (lo < hi).then_some((lo, hi))
}

struct Stage<'a> {
    mu: f64,
    shift: f64,
    other: &'a [f64],
    own: &'a [f64],
    interpolation: Interpolation,
}

impl Stage<'_> {
    #[inline]
    fn rate(&self, j: usize) -> f64 {
        let n = self.other.len();
        let q = j as f64 + self.shift;
        let o = eval_uniform(|i| self.other[i], n, q, self.interpolation).unwrap_or(0.0);
        self.mu * (self.own[j] - o)
    }

    fn fill(&self, out: &mut [f64], lo: usize) {
        if out.len() >= PAR_THRESHOLD {
            out.par_iter_mut()
                .enumerate()
                .for_each(|(k, o)| *o = self.rate(lo + k));
        } else {
            out.iter_mut()
                .enumerate()
                .for_each(|(k, o)| *o = self.rate(lo + k));
        }
    }
}

/// Time `s` in `[lo, hi]` with `X(s) = target`, by safeguarded Newton.
fn invert_primitive(rs: &RegularizedSpeed, target: f64, guess: f64, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let mut s = guess.clamp(lo, hi);
    for _ in 0..60 {
        let f = rs.primitive(s) - target;
        if f > 0.0 {
            b = s;
        } else {
            a = s;
        }
        let mut next = s - f / rs.speed(s);
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - s).abs() <= 1e-15 * (1.0 + s.abs()) {
            return next;
        }
        s = next;
    }
    s
}

/// Integrate the characteristic system for one eps.
///
/// `v0`, `w0` are sampled on the label grid of `disc`.
pub fn solve_system(
    v0: Vec<f64>,
    w0: Vec<f64>,
    rs: &RegularizedSpeed,
    disc: Discretization,
    cfg: &SolverConfig,
) -> Result<FieldPair> {
    let n = disc.n_labels();
    assert_eq!(v0.len(), n);
    assert_eq!(w0.len(), n);
    let dx = disc.dx;
    let dt = disc.dt;
    let interpolation = cfg.interpolation;

    let v0_row = SparseRow::from_dense(&v0);
    let w0_row = SparseRow::from_dense(&w0);

    // Steps are uniform in the coupling shift tau = 2 X(s) / dx, so that
    // every label sees the same sampling of the transition.
    let (lo_t, hi_t) = rs.transition();
    let horizon = disc.horizon();
    let stepping = !rs.jump().is_degenerate() && lo_t < horizon;
    let substeps = (dx / (2.0 * rs.jump().min() * dt)).ceil().max(1.0) as usize;
    let h = 1.0 / substeps as f64;
    let tau_of = |t: f64| 2.0 * rs.primitive(t) / dx;
    let (tau_a, tau_b) = if stepping {
        (tau_of(lo_t), tau_of(hi_t.min(horizon)))
    } else {
        (0.0, 0.0)
    };
    let mut taus = Vec::new();
    if stepping {
        taus.push(tau_a);
        let mut k = (tau_a / h).floor() as i64 + 1;
        loop {
            let t = k as f64 * h;
            if t >= tau_b - 1e-9 * h {
                break;
            }
            taus.push(t);
            k += 1;
        }
        taus.push(tau_b);
    }
    let time_of = |tau: f64, guess: f64| invert_primitive(rs, 0.5 * tau * dx, guess, lo_t, hi_t);

    let mut times = vec![if stepping { lo_t } else { 0.0 }];
    let mut states = vec![(v0_row.clone(), w0_row.clone())];
    let mut v = v0;
    let mut w = w0;
    let mut sv = v.clone();
    let mut sw = w.clone();
    let mut kv = vec![0.0; n];
    let mut kw = vec![0.0; n];
    let mut av = vec![0.0; n];
    let mut aw = vec![0.0; n];
    let mut hv = v0_row.hull();
    let mut hw = w0_row.hull();

    const NODES: [(f64, f64, f64); 4] = [
        (0.0, 0.0, 1.0),
        (0.5, 0.5, 2.0),
        (0.5, 0.5, 2.0),
        (1.0, 1.0, 1.0),
    ];

    let mut s_prev = lo_t;
    for step in taus.windows(2) {
        let (shift_lo, shift_hi) = (step[0], step[1]);
        let ht = shift_hi - shift_lo;
        let pad = 4 * (3 + (shift_hi - shift_lo).ceil() as usize);
        // trapezoid rule: stop updating labels whose coupling point leaves the grid
        let active_v = ((n - 1) as f64 - shift_hi).floor().max(0.0) as usize + 1;
        let first_w = shift_hi.ceil() as usize;
        let rv = update_range(hv, hw, shift_lo, shift_hi, 1.0, pad, active_v);
        let rw = update_range(hw, hv, shift_lo, shift_hi, -1.0, pad, n)
            .and_then(|(a, b)| (a.max(first_w) < b).then_some((a.max(first_w), b)));

        for (stage, &(frac, coef, weight)) in NODES.iter().enumerate() {
            let shift = shift_lo + frac * ht;
            let st_time = time_of(shift, s_prev);
            let mu = rs.mu(st_time) * dx / (2.0 * rs.speed(st_time));
            if stage > 0 {
                let c = coef * ht;
                if let Some((a, b)) = rv {
                    for j in a..b {
                        sv[j] = v[j] + c * kv[j];
                    }
                }
                if let Some((a, b)) = rw {
                    for j in a..b {
                        sw[j] = w[j] + c * kw[j];
                    }
                }
            }
            if let Some((a, b)) = rv {
                let st = Stage {
                    mu,
                    shift,
                    other: &sw,
                    own: &sv,
                    interpolation,
                };
                let mut out = std::mem::take(&mut kv);
                st.fill(&mut out[a..b], a);
                kv = out;
            }
            if let Some((a, b)) = rw {
                let st = Stage {
                    mu,
                    shift: -shift,
                    other: &sv,
                    own: &sw,
                    interpolation,
                };
                let mut out = std::mem::take(&mut kw);
                st.fill(&mut out[a..b], a);
                kw = out;
            }
            if let Some((a, b)) = rv {
                for j in a..b {
                    av[j] += weight * kv[j];
                }
            }
            if let Some((a, b)) = rw {
                for j in a..b {
                    aw[j] += weight * kw[j];
                }
            }
        }
        let h6 = ht / 6.0;
        if let Some((a, b)) = rv {
            for j in a..b {
                v[j] += h6 * av[j];
                sv[j] = v[j];
                av[j] = 0.0;
                kv[j] = 0.0;
            }
            hv = union(hv, hull_of(&v, a, b));
        }
        if let Some((a, b)) = rw {
            for j in a..b {
                w[j] += h6 * aw[j];
                sw[j] = w[j];
                aw[j] = 0.0;
                kw[j] = 0.0;
            }
            hw = union(hw, hull_of(&w, a, b));
        }
        let vr = hv.map_or(SparseRow::zeros(n), |(a, b)| {
            SparseRow::from_dense_range(&v, a, b)
        });
        let wr = hw.map_or(SparseRow::zeros(n), |(a, b)| {
            SparseRow::from_dense_range(&w, a, b)
        });
        states.push((vr, wr));
        s_prev = time_of(shift_hi, s_prev);
        times.push(s_prev);
    }

    Ok(FieldPair {
        speed: rs.clone(),
        disc,
        interpolation,
        tol_num: cfg.tol_num,
        v0: v0_row,
        w0: w0_row,
        times,
        states,
        substeps,
    })
}

/// Sample the data, choose grids and solve.
pub fn solve(data: &ResolvedData, rs: &RegularizedSpeed, cfg: &SolverConfig) -> Result<FieldPair> {
    let disc = cfg.discretize(rs, data.eps())?;
    let (v0, w0) = super::data::wave_to_system(
        data,
        rs.speed(0.0),
        -disc.label_half_width(),
        disc.dx,
        disc.n_labels(),
        disc.half_width(),
    )?;
    solve_system(v0, w0, rs, disc, cfg)
}
