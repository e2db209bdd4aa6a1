//! Weak convergence to the transmission solution: pairings against test functions.

use wavesplit::coefficient::JumpSpeed;
use wavesplit::oracle::delta_solution;
use wavesplit::runner::{preset, run, Stage};

fn main() -> wavesplit::Result<()> {
    let sol = delta_solution(JumpSpeed::new(1.0, 2.0)?, 1.0);
    for (a, b, u) in sol.plateaus(2.0) {
        println!("u(2, x) = {u:+.4} on ({a:+.3}, {b:+.3})");
    }

    let out = run(&preset("figure1")?, Stage::Associate)?;
    let table = out.report.association.as_ref().expect("oracle available");
    for r in table.rows.iter().filter(|r| r.t == 2.0) {
        let diffs: Vec<String> = r.diffs.iter().map(|d| format!("{d:.2e}")).collect();
        println!("psi at {:+.1}: oracle {:+.5}  |diff| [{}]", r.center, r.oracle, diffs.join(", "));
    }
    println!("worst final relative difference {:.2e}", table.worst_relative());
    Ok(())
}
