//! Residual of the integral form
//! `V(t, xi) = v0(xi) + int_0^t mu(s) [V(s, xi) - W(s, xi + 2X(s))] ds`
//! (and its mirror for `W`), evaluated at every stored state with the
//! trapezoid rule over the stored node times.

use super::solver::FieldPair;
use crate::interp::eval_uniform;

/// Max over stored states and active labels of `|LHS - RHS|` for both equations.
pub fn residual(fp: &FieldPair) -> f64 {
    let d = fp.discretization();
    let n = d.n_labels();
    let rs = fp.speed();
    let kind = fp.interpolation();
    let (v0, w0) = fp.initial();
    let v0 = v0.to_dense();
    let w0 = w0.to_dense();

    let mut iv = vec![0.0; n];
    let mut iw = vec![0.0; n];
    let mut prev_fv: Option<Vec<f64>> = None;
    let mut prev_fw: Option<Vec<f64>> = None;
    let mut worst = 0.0f64;

    let times = fp.node_times();
    for (k, &s) in times.iter().enumerate() {
        let (vr, wr) = fp.stored_state(k);
        let v = vr.to_dense();
        let w = wr.to_dense();
        let mu = rs.mu(s);
        let shift = 2.0 * rs.primitive(s) / d.dx;
        let active_v = ((n - 1) as f64 - shift).floor().max(-1.0);
        let first_w = shift.ceil();

        let mut fv = vec![0.0; n];
        let mut fw = vec![0.0; n];
        if mu != 0.0 {
            for j in 0..n {
                if (j as f64) <= active_v {
                    let o = eval_uniform(|i| w[i], n, j as f64 + shift, kind).unwrap_or(0.0);
                    fv[j] = mu * (v[j] - o);
                }
                if (j as f64) >= first_w {
                    let o = eval_uniform(|i| v[i], n, j as f64 - shift, kind).unwrap_or(0.0);
                    fw[j] = mu * (w[j] - o);
                }
            }
        }
        if let (Some(pv), Some(pw)) = (&prev_fv, &prev_fw) {
            let h = 0.5 * (s - times[k - 1]);
            for j in 0..n {
                iv[j] += h * (pv[j] + fv[j]);
                iw[j] += h * (pw[j] + fw[j]);
            }
        }
        for j in 0..n {
            if (j as f64) <= active_v {
                worst = worst.max((v[j] - v0[j] - iv[j]).abs());
            }
            if (j as f64) >= first_w {
                worst = worst.max((w[j] - w0[j] - iw[j]).abs());
            }
        }
        prev_fv = Some(fv);
        prev_fw = Some(fw);
    }
    worst
}
