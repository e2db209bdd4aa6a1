//! The `wavesplit` binary: exit codes, artefacts and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wavesplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavesplit")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

const TRIVIAL: &str = r#"{ "name": "t", "jump": { "c0": 1.0, "c1": 1.0 } }"#;

#[test]
fn validate_accepts_every_preset() {
    for p in ["figure1", "figure2", "trivial", "powers", "smooth"] {
        let o = wavesplit(&["validate", "--preset", p]);
        assert_eq!(o.status.code(), Some(0), "{p}: {}", stderr(&o));
        assert!(stdout(&o).contains("hash"));
    }
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let short = write_config(
        dir.path(),
        "short.json",
        r#"{ "jump": { "c0": 1.0, "c1": 2.0 }, "ladder": [0.1, 0.05, 0.025] }"#,
    );
    let o = wavesplit(&["validate", "--config", &short]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ladder too short"), "{}", stderr(&o));

    let step = write_config(
        dir.path(),
        "step.json",
        r#"{ "jump": { "c0": 1.0, "c1": 2.0 }, "solver": { "time_step": 0.01 } }"#,
    );
    let o = wavesplit(&["run", &step]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dx/(2 max(c0, c1))"), "{}", stderr(&o));

    let unknown = write_config(dir.path(), "unknown.json", r#"{ "jump": { "c0": 1.0, "c1": 2.0 }, "speed": 3 }"#);
    assert_eq!(wavesplit(&["validate", "--config", &unknown]).status.code(), Some(2));

    let broken = write_config(dir.path(), "broken.json", "{ \"jump\": ");
    assert_eq!(wavesplit(&["solve", "--config", &broken]).status.code(), Some(2));

    assert_eq!(wavesplit(&["run", "no-such-preset"]).status.code(), Some(2));
}

#[test]
fn run_writes_every_artefact_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = wavesplit(&["run", "trivial", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = wavesplit(&["run", "--preset", "trivial", "--jobs", "2", "--out", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let mut names: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for want in ["report.json", "growth.csv", "mask.csv", "rays.csv", "association.csv", "energy.csv", "timing.json"] {
        assert!(names.iter().any(|n| n == want), "missing {want} in {names:?}");
    }
    assert_eq!(names.iter().filter(|n| n.starts_with("fields_eps")).count(), 4);
    for n in names.iter().filter(|n| *n != "timing.json") {
        assert_eq!(fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap(), "{n} differs");
    }

    let report: serde_json::Value = serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    let hash = report["provenance"]["config_hash"].as_str().unwrap();
    let v = wavesplit(&["validate", "--preset", "trivial"]);
    assert!(stdout(&v).contains(hash));
    assert_eq!(report["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["pass"], true);
}

#[test]
fn failing_check_exits_with_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "strict.json",
        r#"{ "name": "strict", "jump": { "c0": 1.0, "c1": 1.0 },
             "association": { "centers": [-1, -0.5, 0, 0.5, 1], "width": 0.75,
                              "times": [0.5, 1, 1.5, 2], "tol": 1e-12 } }"#,
    );
    let out = dir.path().join("out");
    let o = wavesplit(&["associate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("failed checks: association"), "{}", stderr(&o));
    assert!(out.join("association.csv").exists());
}

#[test]
fn stages_write_their_own_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", TRIVIAL);
    let solve_dir = dir.path().join("solve");
    let o = wavesplit(&["solve", "--config", &cfg, "--out", solve_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(solve_dir.join("fields_eps0.0125.csv").exists());
    assert!(!solve_dir.join("growth.csv").exists());

    let energy_dir = dir.path().join("energy");
    let o = wavesplit(&["energy", "--config", &cfg, "--out", energy_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(energy_dir.join("energy.csv")).unwrap();
    assert!(text.starts_with("eps,t,energy,ceiling"));
    assert!(stdout(&o).contains("PASS energy_conserved[eps=0.0125]"));

    let sing_dir = dir.path().join("singsupp");
    let o = wavesplit(&["singsupp", "--config", &cfg, "--out", sing_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS reflected_silent"));
    assert!(sing_dir.join("mask.csv").exists() && sing_dir.join("rays.csv").exists());
}
