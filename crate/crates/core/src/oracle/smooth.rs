//! Classical d'Alembert segments for smooth data and the restart at the
//! interface.

use std::sync::Arc;

use super::test_functions::TestFunction;
use crate::coefficient::{JumpSpeed, T_JUMP};
use crate::quadrature::adaptive_simpson;
use crate::transport::ResolvedData;

pub type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Cauchy data with the derivative of `u0` and the primitive of `u1`.
#[derive(Clone)]
pub struct Cauchy {
    pub u0: Scalar,
    pub u0_x: Scalar,
    pub u1: Scalar,
    /// `int_{-inf}^x u1`.
    pub u1_int: Scalar,
}

impl std::fmt::Debug for Cauchy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Cauchy { .. }")
    }
}

const PRIMITIVE_NODES: usize = 1024;
const PAIR_PANELS: usize = 64;

impl Cauchy {
    /// Closures over resolved solver data. The primitive of `u1` is
    /// tabulated at nodes by adaptive Simpson and completed between them.
    pub fn from_data(data: &ResolvedData) -> Self {
        let (a, b) = data.support();
        let h = (b - a) / PRIMITIVE_NODES as f64;
        let d = Arc::new(data.clone());
        let mut cum = vec![0.0; PRIMITIVE_NODES + 1];
        for k in 0..PRIMITIVE_NODES {
            let lo = a + k as f64 * h;
            cum[k + 1] = cum[k] + adaptive_simpson(&|x| d.u1(x), lo, lo + h, 1e-15);
        }
        let cum = Arc::new(cum);
        let (d0, d1, d2, d3) = (d.clone(), d.clone(), d.clone(), d);
        Self {
            u0: Arc::new(move |x| d0.u0(x)),
            u0_x: Arc::new(move |x| d1.u0_prime(x)),
            u1: Arc::new(move |x| d2.u1(x)),
            u1_int: Arc::new(move |x| {
                if x <= a {
                    return 0.0;
                }
                if x >= b {
                    return cum[PRIMITIVE_NODES];
                }
                let k = (((x - a) / h).floor() as usize).min(PRIMITIVE_NODES - 1);
                let lo = a + k as f64 * h;
                cum[k] + adaptive_simpson(&|y| d3.u1(y), lo, x, 1e-15)
            }),
        }
    }
}

/// `1/2 [u0(x + ct) + u0(x - ct)] + 1/(2c) int_{x-ct}^{x+ct} u1`.
pub fn dalembert(data: &Cauchy, c: f64, t: f64, x: f64) -> f64 {
    let (p, m) = (x + c * t, x - c * t);
    0.5 * ((data.u0)(p) + (data.u0)(m)) + ((data.u1_int)(p) - (data.u1_int)(m)) / (2.0 * c)
}

/// The constant-speed solution from Cauchy data at `t0`.
#[derive(Debug, Clone)]
pub struct SmoothSegment {
    pub t0: f64,
    pub c: f64,
    pub data: Cauchy,
}

impl SmoothSegment {
    pub fn u(&self, t: f64, x: f64) -> f64 {
        dalembert(&self.data, self.c, t - self.t0, x)
    }

    pub fn ut(&self, t: f64, x: f64) -> f64 {
        let (c, d) = (self.c, &self.data);
        let (p, m) = (x + c * (t - self.t0), x - c * (t - self.t0));
        0.5 * c * ((d.u0_x)(p) - (d.u0_x)(m)) + 0.5 * ((d.u1)(p) + (d.u1)(m))
    }

    pub fn ux(&self, t: f64, x: f64) -> f64 {
        let (c, d) = (self.c, &self.data);
        let (p, m) = (x + c * (t - self.t0), x - c * (t - self.t0));
        0.5 * ((d.u0_x)(p) + (d.u0_x)(m)) + ((d.u1)(p) - (d.u1)(m)) / (2.0 * c)
    }

    /// `int_{-inf}^x u_t(t, y) dy`.
    pub fn ut_int(&self, t: f64, x: f64) -> f64 {
        let (c, d) = (self.c, &self.data);
        let (p, m) = (x + c * (t - self.t0), x - c * (t - self.t0));
        0.5 * c * ((d.u0)(p) - (d.u0)(m)) + 0.5 * ((d.u1_int)(p) + (d.u1_int)(m))
    }
}

/// Restart `seg` at time `t1` with speed `c1`: the new segment's Cauchy data
/// are `u(t1, .)` and `u_t(t1, .)` of the old one.
pub fn transmission_restart(seg: &SmoothSegment, t1: f64, c1: f64) -> SmoothSegment {
    let s = Arc::new(seg.clone());
    let (a, b, c, d) = (s.clone(), s.clone(), s.clone(), s);
    SmoothSegment {
        t0: t1,
        c: c1,
        data: Cauchy {
            u0: Arc::new(move |x| a.u(t1, x)),
            u0_x: Arc::new(move |x| b.ux(t1, x)),
            u1: Arc::new(move |x| c.ut(t1, x)),
            u1_int: Arc::new(move |x| d.ut_int(t1, x)),
        },
    }
}

/// Two d'Alembert segments glued at `t = 1`.
#[derive(Debug, Clone)]
pub struct SmoothSolution {
    pub jump: JumpSpeed,
    pub first: SmoothSegment,
    pub second: SmoothSegment,
}

impl SmoothSolution {
    pub fn new(jump: JumpSpeed, data: Cauchy) -> Self {
        let first = SmoothSegment {
            t0: 0.0,
            c: jump.c0,
            data,
        };
        let second = transmission_restart(&first, T_JUMP, jump.c1);
        Self {
            jump,
            first,
            second,
        }
    }

    fn segment(&self, t: f64) -> &SmoothSegment {
        if t < T_JUMP {
            &self.first
        } else {
            &self.second
        }
    }

    pub fn u(&self, t: f64, x: f64) -> f64 {
        self.segment(t).u(t, x)
    }

    pub fn ut(&self, t: f64, x: f64) -> f64 {
        self.segment(t).ut(t, x)
    }

    /// `int u(t, x) psi(x) dx` by adaptive Simpson on fixed panels over the
    /// support of `psi`. The panels keep a narrow `u` from hiding between
    /// the first Simpson nodes.
    pub fn pair(&self, psi: &TestFunction, t: f64) -> f64 {
        let (a, b) = psi.support();
        let h = (b - a) / PAIR_PANELS as f64;
        (0..PAIR_PANELS)
            .map(|k| {
                let lo = a + k as f64 * h;
                adaptive_simpson(
                    &|x| self.u(t, x) * psi.eval(x),
                    lo,
                    lo + h,
                    1e-13 / PAIR_PANELS as f64,
                )
            })
            .sum()
    }
}
