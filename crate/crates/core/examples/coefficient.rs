//! Regularized jump speed: same scale against slow scale.

use std::sync::Arc;

use wavesplit::coefficient::{
    slow_scale_check, JumpSpeed, RegularizedSpeed, ScaleRule, SlowNet, SLOW_REFERENCE_LADDER, SLOW_SCALE_POWERS,
};
use wavesplit::mollifier::MollifierProfile;

fn main() -> wavesplit::Result<()> {
    let m = Arc::new(MollifierProfile::canonical());
    let jump = JumpSpeed::new(1.0, 2.0)?;
    let slow = ScaleRule::Slow {
        net: SlowNet::IteratedLog,
        prefactor: 1.0,
    };
    for rule in [ScaleRule::Same, slow] {
        println!("{}", rule.label());
        for eps in [0.1, 0.05, 0.025, 0.0125] {
            let rs = RegularizedSpeed::new(jump, m.clone(), rule, eps)?;
            println!(
                "  eps {eps:<7} s {:.4}  c(1.05) {:.6}  X(2) {:.6}  sup|mu| {:.4}",
                rs.width(),
                rs.speed(1.05),
                rs.primitive(2.0),
                rs.sup_abs_mu()
            );
        }
        let check = slow_scale_check(&rule, &SLOW_REFERENCE_LADDER, &SLOW_SCALE_POWERS)?;
        println!("  slow-scale check: {}", if check.pass { "pass" } else { "fail" });
    }
    Ok(())
}
