//! Run a shipped preset end to end and write its artefacts.
//!
//! `cargo run --release --example run_preset -- figure2 out/figure2`

use std::path::PathBuf;

use wavesplit::runner::{preset, preset_names, run, write_outputs, Stage};

fn main() -> wavesplit::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "figure1".into());
    let dir = args.next().map_or_else(|| PathBuf::from("out").join(&name), PathBuf::from);
    if !preset_names().any(|n| n == name) {
        eprintln!("presets: {}", preset_names().collect::<Vec<_>>().join(", "));
    }
    let out = run(&preset(&name)?, Stage::All)?;
    for c in &out.report.checks {
        println!("{}", c.describe());
    }
    for f in write_outputs(&out, &dir)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
