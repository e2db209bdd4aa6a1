use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavesplit::runner::{preset, run, validate, write_outputs, RunConfig, Stage};
use wavesplit::Error;

/// Wave equation with a jump in the propagation speed: eps-ladder experiments.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Shipped configuration (figure1, figure2, trivial, powers, smooth).
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory; defaults to the config's `output_dir`, then `out/<name>`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for the eps ladder.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the ladder and write fields, residual and sup-bound checks.
    Solve,
    /// Growth orders, singular-support mask and ray comparison.
    Singsupp,
    /// Pairings against the piecewise-constant-speed solution.
    Associate,
    /// Energy traces against flatness and the growth ceiling.
    Energy,
    /// Every stage for a preset name or a config path.
    Run { target: Option<String> },
    /// Check a configuration without running it.
    Validate,
}

fn load(cli: &Cli, target: Option<&str>) -> Result<RunConfig, Error> {
    let mut cfg = match (target, &cli.config, &cli.preset) {
        (Some(t), _, _) if Path::new(t).is_file() => RunConfig::load(Path::new(t))?,
        (Some(t), _, _) => preset(t)?,
        (None, Some(p), _) => RunConfig::load(p)?,
        (None, None, Some(n)) => preset(n)?,
        (None, None, None) => preset("figure1")?,
    };
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| {
            let name = if cfg.name.is_empty() {
                "run"
            } else {
                &cfg.name
            };
            Path::new("out").join(name)
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, target) = match &cli.command {
        Command::Solve => (Some(Stage::Solve), None),
        Command::Singsupp => (Some(Stage::Singsupp), None),
        Command::Associate => (Some(Stage::Associate), None),
        Command::Energy => (Some(Stage::Energy), None),
        Command::Run { target } => (Some(Stage::All), target.as_deref()),
        Command::Validate => (None, None),
    };
    let cfg = match load(&cli, target) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Some(stage) = stage else {
        let problems = validate(&cfg);
        if problems.is_empty() {
            println!("config ok (hash {})", cfg.hash());
            return ExitCode::SUCCESS;
        }
        for p in problems {
            eprintln!("invalid: {p}");
        }
        return ExitCode::from(2);
    };

    let out = match run(&cfg, stage) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let dir = out_dir(&cli, &cfg);
    if let Err(e) = write_outputs(&out, &dir) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for c in &out.report.checks {
        println!("{}", c.describe());
    }
    println!("wrote {}", dir.display());
    let failed: Vec<_> = out.report.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        ExitCode::from(1)
    }
}
