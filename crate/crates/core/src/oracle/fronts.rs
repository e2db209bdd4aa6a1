//! Front-list form of the transmission solution for `u0 = 0`, `u1 = A delta`.
//!
//! `u(t, x)` is the sum of the jumps of all fronts lying to the left of `x`.
//! Each front crossing the interface splits into a transmitted and a
//! reflected front; their jumps come from a 2x2 system expressing continuity
//! of `u` and `u_t`.

use serde::Serialize;

use super::test_functions::TestFunction;
use crate::coefficient::{JumpSpeed, T_JUMP};

/// A jump of `u` travelling at constant velocity on `[t_start, t_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Front {
    pub t_start: f64,
    pub x_start: f64,
    pub velocity: f64,
    /// `u(x+) - u(x-)` across the front.
    pub jump: f64,
    pub t_end: f64,
}

impl Front {
    pub fn position(&self, t: f64) -> f64 {
        self.x_start + self.velocity * (t - self.t_start)
    }

    fn active(&self, t: f64) -> bool {
        t >= self.t_start && t < self.t_end
    }
}

/// Outcome of splitting one incoming front at the interface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Split {
    pub incoming: f64,
    pub transmitted: f64,
    pub reflected: f64,
}

/// Solve `[[a, b], [c, d]] y = r` by Cramer's rule.
fn solve2(m: [[f64; 2]; 2], r: [f64; 2]) -> [f64; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        (r[0] * m[1][1] - m[0][1] * r[1]) / det,
        (m[0][0] * r[1] - r[0] * m[1][0]) / det,
    ]
}

/// Map the jumps `(J+, J-)` of a right/left moving front pair at one point
/// from speed `c_in` to speed `c_out`.
///
/// Continuity of `u` gives `J+' + J-' = J+ + J-`; continuity of
/// `u_t = -velocity * jump * delta` gives `c_out (J+' - J-') = c_in (J+ - J-)`.
pub fn match_jumps(c_in: f64, c_out: f64, jumps: [f64; 2]) -> [f64; 2] {
    let lhs = [[1.0, 1.0], [c_out, -c_out]];
    let rhs = [jumps[0] + jumps[1], c_in * (jumps[0] - jumps[1])];
    solve2(lhs, rhs)
}

/// Piecewise constant solution stored as fronts.
#[derive(Debug, Clone, Serialize)]
pub struct FrontSolution {
    pub jump: JumpSpeed,
    pub amplitude: f64,
    pub fronts: Vec<Front>,
    pub splits: Vec<Split>,
}

/// Transmission solution for `u0 = 0`, `u1 = amplitude * delta`, speed
/// `c0` before `t = 1` and `c1` after.
pub fn delta_solution(jump: JumpSpeed, amplitude: f64) -> FrontSolution {
    let (c0, c1) = (jump.c0, jump.c1);
    let h = amplitude / (2.0 * c0);
    let incoming = [
        Front {
            t_start: 0.0,
            x_start: 0.0,
            velocity: c0,
            jump: -h,
            t_end: T_JUMP,
        },
        Front {
            t_start: 0.0,
            x_start: 0.0,
            velocity: -c0,
            jump: h,
            t_end: T_JUMP,
        },
    ];
    let mut fronts = incoming.to_vec();
    let mut splits = Vec::new();
    for f in incoming {
        let x = f.position(T_JUMP);
        let outward = f.velocity.signum();
        // order (J along outward direction, J reversed)
        let jumps = if outward > 0.0 {
            [f.jump, 0.0]
        } else {
            [0.0, f.jump]
        };
        let out = match_jumps(c0, c1, jumps);
        let (tr, re) = if outward > 0.0 {
            (out[0], out[1])
        } else {
            (out[1], out[0])
        };
        splits.push(Split {
            incoming: f.jump,
            transmitted: tr,
            reflected: re,
        });
        for (v, j) in [(outward * c1, tr), (-outward * c1, re)] {
            fronts.push(Front {
                t_start: T_JUMP,
                x_start: x,
                velocity: v,
                jump: j,
                t_end: f64::INFINITY,
            });
        }
    }
    FrontSolution {
        jump,
        amplitude,
        fronts,
        splits,
    }
}

impl FrontSolution {
    fn active(&self, t: f64) -> impl Iterator<Item = &Front> {
        self.fronts.iter().filter(move |f| f.active(t))
    }

    /// `u(t, x)`; at a front the right value is returned.
    pub fn u(&self, t: f64, x: f64) -> f64 {
        self.active(t)
            .filter(|f| f.position(t) <= x)
            .map(|f| f.jump)
            .sum()
    }

    /// Plateaus `(x_lo, x_hi, value)` between consecutive fronts at `t`.
    pub fn plateaus(&self, t: f64) -> Vec<(f64, f64, f64)> {
        let mut fr: Vec<(f64, f64)> = self.active(t).map(|f| (f.position(t), f.jump)).collect();
        fr.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = Vec::new();
        let mut acc = 0.0;
        for k in 0..fr.len() {
            acc += fr[k].1;
            if k + 1 < fr.len() && fr[k + 1].0 > fr[k].0 {
                out.push((fr[k].0, fr[k + 1].0, acc));
            }
        }
        out
    }

    /// `int u(t, x) psi(x) dx`, exact up to the accuracy of `psi`'s cdf.
    pub fn pair(&self, psi: &TestFunction, t: f64) -> f64 {
        self.active(t)
            .map(|f| f.jump * (1.0 - psi.cdf(f.position(t))))
            .sum()
    }

    /// Pairing using the fronts alive just before (`before = true`) or at `t`.
    pub fn pair_one_sided(&self, psi: &TestFunction, t: f64, before: bool) -> f64 {
        self.fronts
            .iter()
            .filter(|f| {
                if before {
                    f.t_start < t && t <= f.t_end
                } else {
                    f.active(t)
                }
            })
            .map(|f| f.jump * (1.0 - psi.cdf(f.position(t))))
            .sum()
    }

    /// Time derivative of the pairing, one-sided as above.
    pub fn pair_rate_one_sided(&self, psi: &TestFunction, t: f64, before: bool) -> f64 {
        self.fronts
            .iter()
            .filter(|f| {
                if before {
                    f.t_start < t && t <= f.t_end
                } else {
                    f.active(t)
                }
            })
            .map(|f| -f.jump * f.velocity * psi.eval(f.position(t)))
            .sum()
    }

    /// `max |J_T + J_R - J_in|` over the splits.
    pub fn amplitude_defect(&self) -> f64 {
        self.splits
            .iter()
            .map(|s| (s.transmitted + s.reflected - s.incoming).abs())
            .fold(0.0, f64::max)
    }

    /// Round trip through the matching with the speeds swapped; returns the
    /// largest deviation from the incoming jumps.
    pub fn reciprocity_defect(&self) -> f64 {
        let (c0, c1) = (self.jump.c0, self.jump.c1);
        self.splits
            .iter()
            .map(|s| {
                let back = match_jumps(c1, c0, [s.transmitted, s.reflected]);
                (back[0] - s.incoming).abs().max(back[1].abs())
            })
            .fold(0.0, f64::max)
    }
}
