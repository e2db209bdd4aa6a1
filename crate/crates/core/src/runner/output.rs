//! Writers for the report and the CSV tables.

use std::fs;
use std::path::{Path, PathBuf};

use super::run::{RunOutput, Stage};
use crate::analyzer::RAY_SAMPLE_SPACING;
use crate::error::{Error, Result};

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(std::io::Error::other(format!("{}: {e}", path.display())))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| io_err(path, e))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| io_err(path, e))
}

macro_rules! record {
    ($w:expr, $path:expr, $($v:expr),+ $(,)?) => {
        $w.write_record(&[$($v.to_string()),+]).map_err(|e| io_err($path, e))?
    };
}

/// File name of the snapshot table for one eps.
pub fn fields_name(eps: f64) -> String {
    format!("fields_eps{eps}.csv")
}

fn write_fields(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    for (eps, field) in &out.snapshots {
        let path = dir.join(fields_name(*eps));
        let mut w = csv_writer(&path)?;
        record!(w, &path, "t", "x", "u", "ut", "ux");
        for row in &field.rows {
            for i in 0..row.u.len() {
                record!(w, &path, row.t, field.x(i), row.u[i], row.ut[i], row.ux[i]);
            }
        }
        finish(w, &path)?;
        files.push(path);
    }
    Ok(())
}

fn write_growth(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let Some(g) = &out.report.growth else {
        return Ok(());
    };
    let path = dir.join("growth.csv");
    let mut w = csv_writer(&path)?;
    let mut header = vec![
        "cell".to_string(),
        "t".into(),
        "x".into(),
        "n".into(),
        "p".into(),
        "residual".into(),
    ];
    header.extend(g.ladder.iter().map(|e| format!("sup_eps{e}")));
    w.write_record(&header).map_err(|e| io_err(&path, e))?;
    for c in &g.cells {
        for (n, fit) in c.fits.iter().enumerate() {
            let mut rec = vec![
                c.cell.to_string(),
                c.t.to_string(),
                c.x.to_string(),
                n.to_string(),
                fit.exponent()
                    .map_or_else(|| "below_floor".into(), |p| p.to_string()),
                fit.residual().map_or_else(String::new, |r| r.to_string()),
            ];
            rec.extend(c.sups[n].iter().map(|s| s.to_string()));
            w.write_record(&rec).map_err(|e| io_err(&path, e))?;
        }
    }
    finish(w, &path)?;
    files.push(path);
    Ok(())
}

fn write_mask(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let (Some(mask), Some(g)) = (&out.mask, &out.report.growth) else {
        return Ok(());
    };
    let path = dir.join("mask.csv");
    let mut w = csv_writer(&path)?;
    record!(
        w,
        &path,
        "cell",
        "t",
        "x",
        "slope",
        "singular",
        "ray_distance"
    );
    for c in &g.cells {
        record!(
            w,
            &path,
            c.cell,
            c.t,
            c.x,
            c.slope.map_or_else(String::new, |s| s.to_string()),
            u8::from(mask.singular[c.cell]),
            out.ray_set.distance(c.t, c.x),
        );
    }
    finish(w, &path)?;
    files.push(path);
    Ok(())
}

fn write_rays(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join("rays.csv");
    let mut w = csv_writer(&path)?;
    record!(w, &path, "ray", "kind", "t", "x");
    for r in &out.ray_set.rays {
        let kind = match r.kind {
            crate::analyzer::RayKind::Direct => "direct",
            crate::analyzer::RayKind::Reflected => "reflected",
        };
        for (t, x) in r.samples(RAY_SAMPLE_SPACING) {
            record!(w, &path, r.name, kind, t, x);
        }
    }
    finish(w, &path)?;
    files.push(path);
    Ok(())
}

fn write_association(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let Some(table) = &out.report.association else {
        return Ok(());
    };
    let path = dir.join("association.csv");
    let mut w = csv_writer(&path)?;
    record!(
        w, &path, "test", "center", "width", "t", "eps", "pair", "oracle", "diff", "relative",
        "monotone", "pass"
    );
    for r in &table.rows {
        for (k, eps) in table.ladder.iter().enumerate() {
            record!(
                w,
                &path,
                r.test,
                r.center,
                r.width,
                r.t,
                eps,
                r.pairs[k],
                r.oracle,
                r.diffs[k],
                r.relative,
                u8::from(r.monotone),
                u8::from(r.pass),
            );
        }
    }
    finish(w, &path)?;
    files.push(path);
    Ok(())
}

fn write_energy(out: &RunOutput, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let Some(reports) = &out.report.energy else {
        return Ok(());
    };
    let path = dir.join("energy.csv");
    let mut w = csv_writer(&path)?;
    record!(w, &path, "eps", "t", "energy", "ceiling");
    for r in reports {
        let tr = &r.trace;
        for k in 0..tr.times.len() {
            record!(w, &path, tr.eps, tr.times[k], tr.energy[k], tr.ceiling[k]);
        }
    }
    finish(w, &path)?;
    files.push(path);
    Ok(())
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// Write every artefact the stage produced into `dir`; returns the paths written.
///
/// `timing.json` holds wall-clock numbers and is the only non-deterministic file.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut files = Vec::new();
    let report = dir.join("report.json");
    write_json(&report, &out.report)?;
    files.push(report);
    if matches!(out.report.provenance.stage, Stage::Solve | Stage::All) {
        write_fields(out, dir, &mut files)?;
    }
    write_growth(out, dir, &mut files)?;
    write_mask(out, dir, &mut files)?;
    if out.report.growth.is_some() {
        write_rays(out, dir, &mut files)?;
    }
    write_association(out, dir, &mut files)?;
    write_energy(out, dir, &mut files)?;
    let timing = dir.join("timing.json");
    write_json(&timing, &out.timing)?;
    files.push(timing);
    Ok(files)
}
