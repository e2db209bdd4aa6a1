//! Load-time diagnostics for a broken configuration.

use wavesplit::runner::{validate, RunConfig};

fn main() -> wavesplit::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "jump": { "c0": 1.0, "c1": 2.0 },
            "ladder": [0.1, 0.05, 0.025],
            "solver": { "time_step": 0.01 }
        }"#,
    )?;
    for d in validate(&cfg) {
        println!("invalid: {d}");
    }
    Ok(())
}
