//! Energy traces against the growth ceiling, with and without a jump.

use wavesplit::runner::{preset, run, Stage};

fn main() -> wavesplit::Result<()> {
    for name in ["figure1", "trivial"] {
        let out = run(&preset(name)?, Stage::Energy)?;
        for rep in out.report.energy.as_ref().expect("energy stage") {
            let tr = &rep.trace;
            let n = tr.times.len() - 1;
            println!(
                "{name} eps {:<7} E(T)/E(0) {:.4}  ceiling {:.4}  flat dev {:.1e}",
                tr.eps,
                tr.energy[n] / tr.energy[0],
                tr.ceiling[n] / tr.ceiling[0],
                rep.flat_deviation
            );
        }
    }
    Ok(())
}
