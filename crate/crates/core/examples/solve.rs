//! Solve the characteristic system for delta data and reconstruct u.

use std::sync::Arc;

use wavesplit::coefficient::{JumpSpeed, RegularizedSpeed, ScaleRule};
use wavesplit::mollifier::MollifierProfile;
use wavesplit::transport::{reconstruct, residual, solve, InitialData, SolverConfig};

fn main() -> wavesplit::Result<()> {
    let m = Arc::new(MollifierProfile::canonical());
    let eps = 0.05;
    let rs = RegularizedSpeed::new(JumpSpeed::new(1.0, 2.0)?, m.clone(), ScaleRule::Same, eps)?;
    let data = InitialData::delta().resolve(m, eps)?;
    let fp = solve(&data, &rs, &SolverConfig::default())?;
    let s = fp.summary();
    println!("dx {} dt {} node steps {}", s.dx, s.dt, s.steps_taken);
    println!("residual / peak {:.3e}", residual(&fp) / s.data_peak);
    println!("sup(|v| + |w|) {:.4} <= bound {:.4}", s.sup_sum, s.gronwall_bound);

    let field = reconstruct(&fp, &data, &[0.5, 2.0])?;
    for row in &field.rows {
        // plateau values of u between the fronts
        let at = |x: f64| row.u[((x - field.x0) / field.dx).round() as usize];
        println!("t = {}: u(0) {:.4}  u(1.5) {:.4}", row.t, at(0.0), at(1.5));
    }
    Ok(())
}
