//! Full ladder runs on the shipped presets.

use std::sync::OnceLock;

use wavesplit::analyzer::cells_straddling;
use wavesplit::runner::{preset, run, RunOutput, Stage};

fn figure1() -> &'static RunOutput {
    static OUT: OnceLock<RunOutput> = OnceLock::new();
    OUT.get_or_init(|| run(&preset("figure1").unwrap(), Stage::All).unwrap())
}

#[test]
fn second_derivative_order_on_the_direct_ray() {
    let out = figure1();
    let g = out.report.growth.as_ref().unwrap();
    let ray = out.ray_set.get("direct+").unwrap();
    let cells = cells_straddling(&g.grid, ray, 0.5);
    assert!(!cells.is_empty());
    for c in cells {
        let p = g.cells[c].exponent(2).unwrap();
        assert!((2.75..=3.25).contains(&p), "cell {c}: p_2 = {p}");
    }
}

#[test]
fn pairings_shrink_through_the_interface() {
    let table = figure1().report.association.as_ref().unwrap();
    let at_jump: Vec<_> = table.rows.iter().filter(|r| r.t == 1.0).collect();
    assert!(at_jump.len() >= 5);
    for r in at_jump {
        assert!(r.monotone && r.pass, "psi at {}: {:?}", r.center, r.diffs);
        assert!(r.diffs.last().unwrap() <= &r.diffs[0]);
    }
}

#[test]
fn energy_ceiling_is_exp_of_c1_squared_minus_c0_squared() {
    // 2 int |c c'| / min(c)^2 = c1^2 - c0^2 = 3 for (1, 2).
    for rep in figure1().report.energy.as_ref().unwrap() {
        let tr = &rep.trace;
        let last = tr.times.len() - 1;
        assert!((tr.ceiling[last] / tr.ceiling[0] - 3f64.exp()).abs() < 1e-9);
        assert!(rep.under_ceiling && rep.flat);
        // The ceiling is not attained: E roughly doubles, well under e^3.
        let growth = tr.energy[last] / tr.energy[0];
        assert!(growth > 1.5 && growth < 3f64.exp(), "eps {}: {growth}", tr.eps);
    }
}

#[test]
fn figure1_passes_every_check() {
    let r = &figure1().report;
    let failed: Vec<_> = r.failures().map(|c| c.describe()).collect();
    assert!(r.pass, "{failed:#?}");
    assert_eq!(r.rays.as_ref().unwrap().mirror_mismatches, 0);
}

#[test]
fn trivial_preset_is_silent_off_the_direct_rays() {
    let out = run(&preset("trivial").unwrap(), Stage::All).unwrap();
    let r = &out.report;
    assert!(r.pass, "{:#?}", r.failures().collect::<Vec<_>>());
    assert!(r.check("reflected_silent").is_some());
    let table = r.association.as_ref().unwrap();
    assert!(table.worst_relative() < 0.05);
}
