use serde::Serialize;

use super::cells::CellGrid;
use crate::coefficient::{JumpSpeed, T_JUMP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RayKind {
    Direct,
    Reflected,
}

/// Straight piece of a ray from `(t0, x0)` to `(t1, x1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub t0: f64,
    pub x0: f64,
    pub t1: f64,
    pub x1: f64,
}

impl Segment {
    fn distance(&self, t: f64, x: f64) -> f64 {
        let (dt, dx) = (self.t1 - self.t0, self.x1 - self.x0);
        let len2 = dt * dt + dx * dx;
        let s = if len2 > 0.0 {
            (((t - self.t0) * dt + (x - self.x0) * dx) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (pt, px) = (self.t0 + s * dt, self.x0 + s * dx);
        ((t - pt).powi(2) + (x - px).powi(2)).sqrt()
    }

    fn length(&self) -> f64 {
        ((self.t1 - self.t0).powi(2) + (self.x1 - self.x0).powi(2)).sqrt()
    }

    fn x_at(&self, t: f64) -> f64 {
        if self.t1 == self.t0 {
            self.x0
        } else {
            self.x0 + (t - self.t0) / (self.t1 - self.t0) * (self.x1 - self.x0)
        }
    }
}

/// A piecewise-linear path in the `(t, x)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ray {
    pub name: String,
    pub kind: RayKind,
    pub segments: Vec<Segment>,
}

impl Ray {
    pub fn distance(&self, t: f64, x: f64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance(t, x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Points spaced at most `ds` apart in arc length, endpoints included.
    pub fn samples(&self, ds: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for s in &self.segments {
            let k = (s.length() / ds).ceil().max(1.0) as usize;
            let start = if out.is_empty() { 0 } else { 1 };
            for i in start..=k {
                let f = i as f64 / k as f64;
                out.push((s.t0 + f * (s.t1 - s.t0), s.x0 + f * (s.x1 - s.x0)));
            }
        }
        out
    }

    /// `x`-extent of the ray over `[ta, tb]`, if it exists there.
    pub fn x_range(&self, ta: f64, tb: f64) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in &self.segments {
            let a = ta.max(s.t0);
            let b = tb.min(s.t1);
            if a > b {
                continue;
            }
            for t in [a, b] {
                let x = s.x_at(t);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Rays along which singularities are predicted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaySet {
    pub rays: Vec<Ray>,
    /// `c0 = c1`: the reflected rays carry no amplitude.
    pub degenerate: bool,
}

/// Direct rays `x = +-X(t)` and, for `t >= 1`, reflected rays
/// `x = +-(2X(1) - X(t))`, with `X` the primitive of the unregularized speed.
pub fn predicted_rays(jump: JumpSpeed, horizon: f64) -> RaySet {
    let big_x = |t: f64| jump.primitive(t);
    let t1 = horizon.min(T_JUMP);
    let mut rays = Vec::new();
    for (sign, name) in [(1.0, "direct+"), (-1.0, "direct-")] {
        let mut segments = vec![Segment {
            t0: 0.0,
            x0: 0.0,
            t1,
            x1: sign * big_x(t1),
        }];
        if horizon > T_JUMP {
            segments.push(Segment {
                t0: T_JUMP,
                x0: sign * big_x(T_JUMP),
                t1: horizon,
                x1: sign * big_x(horizon),
            });
        }
        rays.push(Ray {
            name: name.into(),
            kind: RayKind::Direct,
            segments,
        });
    }
    if horizon > T_JUMP {
        let vertex = big_x(T_JUMP);
        for (sign, name) in [(1.0, "reflected+"), (-1.0, "reflected-")] {
            rays.push(Ray {
                name: name.into(),
                kind: RayKind::Reflected,
                segments: vec![Segment {
                    t0: T_JUMP,
                    x0: sign * vertex,
                    t1: horizon,
                    x1: sign * (2.0 * vertex - big_x(horizon)),
                }],
            });
        }
    }
    RaySet {
        rays,
        degenerate: jump.is_degenerate(),
    }
}

impl RaySet {
    /// Only the direct pair.
    pub fn direct_only(&self) -> RaySet {
        RaySet {
            rays: self
                .rays
                .iter()
                .filter(|r| r.kind == RayKind::Direct)
                .cloned()
                .collect(),
            degenerate: self.degenerate,
        }
    }

    pub fn get(&self, name: &str) -> Option<&Ray> {
        self.rays.iter().find(|r| r.name == name)
    }

    pub fn distance(&self, t: f64, x: f64) -> f64 {
        self.rays
            .iter()
            .map(|r| r.distance(t, x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cells of the slab containing `t` whose open interior the ray crosses.
pub fn cells_straddling(grid: &CellGrid, ray: &Ray, t: f64) -> Vec<usize> {
    let Some(ti) = grid.slab_of(t) else {
        return Vec::new();
    };
    let (ta, tb) = grid.t_bounds(ti);
    let Some((lo, hi)) = ray.x_range(ta, tb) else {
        return Vec::new();
    };
    (0..grid.nx)
        .filter(|&xi| {
            let (a, b) = grid.x_bounds(xi);
            a < hi - 1e-9 && b > lo + 1e-9
        })
        .map(|xi| grid.index(ti, xi))
        .collect()
}
