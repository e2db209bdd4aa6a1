//! Ladder orchestration, checks and the run report.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{validate, OracleKind, RunConfig};
use crate::analyzer::{
    cells_straddling, classify, compare, growth_report, off_ray_noise, predicted_rays, sample_run,
    GrowthFit, GrowthReport, LadderSample, Mask, Observable, RaySet, Scores,
};
use crate::coefficient::{RegularizedSpeed, SpeedSummary};
use crate::error::{Error, Result};
use crate::mollifier::MollifierProfile;
use crate::oracle::{
    association_check, delta_solution, energy_check, test_function_set, AssociationTable, Cauchy,
    EnergyReport, FrontSolution, PiecewiseSolution, SmoothSolution, CEILING_SLACK, FLAT_TOL,
};
use crate::transport::{reconstruct, residual, solve, FieldSummary, SolutionField};

/// Residual gate relative to the data peak.
pub const RESIDUAL_GATE: f64 = 1e-3;
/// Slack on the sup bound `(sup|v0| + sup|w0|) max(c)/min(c)`.
pub const GRONWALL_SLACK: f64 = 0.05;
pub const SCORE_MIN: f64 = 0.9;
pub const LADDER_MARGIN: f64 = 0.25;
pub const LADDER_RESIDUAL: f64 = 0.2;
pub const REFLECTED_P0_MIN: f64 = 0.75;
pub const REFLECTED_SPREAD_MAX: f64 = 0.5;
pub const MATCHING_TOL: f64 = 1e-10;
pub const MIN_TEST_FUNCTIONS: usize = 5;
/// Time of the direct-ray ladder check.
pub const DIRECT_TIME: f64 = 0.5;
/// Time of the reflected-ray checks.
pub const REFLECTED_TIME: f64 = 1.5;

/// What a subcommand computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Solve,
    Singsupp,
    Associate,
    Energy,
    All,
}

impl Stage {
    fn analyze(self) -> bool {
        matches!(self, Stage::Singsupp | Stage::All)
    }
    fn associate(self) -> bool {
        matches!(self, Stage::Associate | Stage::All)
    }
    fn energy(self) -> bool {
        matches!(self, Stage::Energy | Stage::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One pass/fail verdict with the measured number.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    pub fn at_most(
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            pass: measured <= threshold,
            measured,
            relation: Relation::AtMost,
            threshold,
            detail: detail.into(),
        }
    }

    pub fn at_least(
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            pass: measured >= threshold,
            measured,
            relation: Relation::AtLeast,
            threshold,
            detail: detail.into(),
        }
    }

    pub fn describe(&self) -> String {
        let rel = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!(
            "{verdict} {}: {:.6e} (required {rel} {:.6e}) {}",
            self.name, self.measured, self.threshold, self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: &'static str,
    pub modules: BTreeMap<&'static str, &'static str>,
    pub stage: Stage,
}

fn provenance(cfg: &RunConfig, stage: Stage) -> Provenance {
    let v = env!("CARGO_PKG_VERSION");
    let modules = [
        "mollifier",
        "coefficient",
        "transport_solver",
        "singularity_analyzer",
        "classical_oracle",
        "cli_runner",
    ]
    .into_iter()
    .map(|m| (m, v))
    .collect();
    Provenance {
        config_hash: cfg.hash(),
        version: v,
        modules,
        stage,
    }
}

/// Solver outcome for one eps.
#[derive(Debug, Clone, Serialize)]
pub struct EpsSummary {
    pub eps: f64,
    pub speed: SpeedSummary,
    pub field: FieldSummary,
    pub residual: f64,
    pub residual_relative: f64,
    pub gronwall_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayComparison {
    pub expected: &'static str,
    pub scores: Scores,
    pub four_ray: Scores,
    pub two_ray: Scores,
    pub singular_cells: Vec<(f64, f64)>,
    pub mirror_mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fronts: Option<FrontSolution>,
    pub amplitude_defect: Option<f64>,
    pub reciprocity_defect: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub config: RunConfig,
    pub runs: Vec<EpsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<RayComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub association: Option<AssociationTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<Vec<EnergyReport>>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Everything produced by a run, including data not kept in the report.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    /// Snapshot fields per eps, for `fields_eps*.csv`.
    pub snapshots: Vec<(f64, SolutionField)>,
    pub mask: Option<Mask>,
    pub ray_set: RaySet,
    /// Wall-clock seconds per stage; kept out of the report for determinism.
    pub timing: BTreeMap<String, f64>,
}

struct EpsRun {
    summary: EpsSummary,
    sample: Option<LadderSample>,
    snapshots: SolutionField,
    assoc: Option<SolutionField>,
    energy: Option<Result<EnergyReport>>,
    seconds: f64,
}

fn rows_at(field: &SolutionField, times: &[f64]) -> SolutionField {
    SolutionField {
        x0: field.x0,
        dx: field.dx,
        rows: times
            .iter()
            .filter_map(|&t| field.row_at(t).cloned())
            .collect(),
    }
}

fn merge_times(lists: &[&[f64]]) -> Vec<f64> {
    let mut all: Vec<f64> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    all
}

fn run_eps(
    cfg: &RunConfig,
    stage: Stage,
    profile: &Arc<MollifierProfile>,
    eps: f64,
    oracle_kind: OracleKind,
) -> Result<EpsRun> {
    let start = Instant::now();
    let rs = RegularizedSpeed::new(cfg.jump, profile.clone(), cfg.scale, eps)?;
    let data = cfg.data.resolve(profile.clone(), eps)?;
    let fp = solve(&data, &rs, &cfg.solver)?;
    let res = residual(&fp);
    let field_summary = fp.summary();
    let peak = field_summary.data_peak;
    let summary = EpsSummary {
        eps,
        speed: rs.summary(),
        residual: res,
        residual_relative: if peak > 0.0 { res / peak } else { 0.0 },
        gronwall_ratio: if field_summary.gronwall_bound > 0.0 {
            field_summary.sup_sum / field_summary.gronwall_bound
        } else {
            0.0
        },
        field: field_summary,
    };

    let grid = cfg.analyzer.grid(cfg.horizon(), cfg.half_width())?;
    let snap_t = cfg.snapshot_times();
    let assoc_t = if stage.associate() && oracle_kind != OracleKind::None {
        cfg.association_times()
    } else {
        Vec::new()
    };
    let energy_t = if stage.energy() {
        cfg.energy_times()
    } else {
        Vec::new()
    };
    let analyzer_t = if stage.analyze() && cfg.analyzer.observable != Observable::Characteristic {
        grid.all_times()
    } else {
        Vec::new()
    };
    let times = merge_times(&[&snap_t, &assoc_t, &energy_t, &analyzer_t]);
    let field = reconstruct(&fp, &data, &times)?;

    let sample = if stage.analyze() {
        let f = (!analyzer_t.is_empty()).then_some(&field);
        Some(sample_run(&grid, &fp, f, &cfg.analyzer)?)
    } else {
        None
    };
    let assoc = (!assoc_t.is_empty()).then(|| rows_at(&field, &assoc_t));
    let energy = stage
        .energy()
        .then(|| energy_check(&rows_at(&field, &energy_t), &rs));
    Ok(EpsRun {
        summary,
        sample,
        snapshots: rows_at(&field, &snap_t),
        assoc,
        energy,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn fmt_eps(eps: f64) -> String {
    format!("eps={eps}")
}

fn exponent_or_nan(f: &GrowthFit) -> f64 {
    match f {
        GrowthFit::Fitted { p, .. } => *p,
        GrowthFit::BelowNoiseFloor => f64::NAN,
    }
}

/// Cells straddling the named rays at time `t`.
fn straddling(report: &GrowthReport, rays: &RaySet, names: &[&str], t: f64) -> Vec<usize> {
    let mut cells: Vec<usize> = names
        .iter()
        .filter_map(|n| rays.get(n))
        .flat_map(|r| cells_straddling(&report.grid, r, t))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

fn analyzer_checks(
    cfg: &RunConfig,
    report: &GrowthReport,
    rays: &RaySet,
    mask: &Mask,
    checks: &mut Vec<Check>,
) {
    let sw = &cfg.checks;
    let singular = cfg.singular_data();
    let degenerate = cfg.jump.is_degenerate();
    let slow = cfg.scale.is_slow();

    if sw.direct_ladder.unwrap_or(singular) {
        let cells = straddling(report, rays, &["direct+", "direct-"], DIRECT_TIME);
        for n in 0..=report.n_max {
            let need = (n + 1) as f64 - LADDER_MARGIN;
            let worst = cells
                .iter()
                .map(|&c| exponent_or_nan(&report.cells[c].fits[n]))
                .fold(f64::INFINITY, |m, p| {
                    if p.is_nan() {
                        f64::NEG_INFINITY
                    } else {
                        m.min(p)
                    }
                });
            let worst = if cells.is_empty() {
                f64::NEG_INFINITY
            } else {
                worst
            };
            checks.push(Check::at_least(
                format!("direct_ladder[n={n}]"),
                worst,
                need,
                format!(
                    "min p_{n} over {} cells straddling x = X(t) at t = {DIRECT_TIME}",
                    cells.len()
                ),
            ));
        }
        let worst_res = cells
            .iter()
            .flat_map(|&c| {
                report.cells[c]
                    .fits
                    .iter()
                    .map(|f| f.residual().unwrap_or(f64::INFINITY))
            })
            .fold(if cells.is_empty() { f64::INFINITY } else { 0.0 }, f64::max);
        checks.push(Check::at_most(
            "direct_ladder_residual",
            worst_res,
            LADDER_RESIDUAL,
            "max fit residual on the direct-ray cells",
        ));
    }

    if sw.rays.unwrap_or(singular) {
        let (set, label) = if slow || degenerate {
            (rays.direct_only(), "two-ray")
        } else {
            (rays.clone(), "four-ray")
        };
        let s = compare(mask, &set, cfg.analyzer.tol_dist);
        checks.push(Check::at_least(
            "rays_precision",
            s.precision,
            SCORE_MIN,
            format!(
                "against the {label} set, tol_dist {}",
                cfg.analyzer.tol_dist
            ),
        ));
        checks.push(Check::at_least(
            "rays_recall",
            s.recall,
            SCORE_MIN,
            format!(
                "against the {label} set, tol_dist {}",
                cfg.analyzer.tol_dist
            ),
        ));
    }

    if sw
        .reflected
        .unwrap_or(singular && cfg.horizon() >= REFLECTED_TIME)
    {
        let cells = straddling(report, rays, &["reflected+", "reflected-"], REFLECTED_TIME);
        if degenerate {
            let loud = cells
                .iter()
                .filter(|&&c| !report.cells[c].below_floor())
                .count();
            checks.push(Check::at_most(
                "reflected_silent",
                loud as f64,
                0.0,
                format!(
                    "cells on the reflected geometry at t = {REFLECTED_TIME} above the noise floor"
                ),
            ));
        } else if slow {
            let spread = cells
                .iter()
                .map(|&c| {
                    let f = &report.cells[c].fits;
                    let p0 = exponent_or_nan(&f[0]);
                    let pmax = f
                        .iter()
                        .map(exponent_or_nan)
                        .fold(f64::NEG_INFINITY, f64::max);
                    if p0.is_nan() || pmax.is_nan() {
                        f64::INFINITY
                    } else {
                        pmax - p0
                    }
                })
                .fold(if cells.is_empty() { f64::INFINITY } else { 0.0 }, f64::max);
            checks.push(Check::at_most(
                "reflected_regular",
                spread,
                REFLECTED_SPREAD_MAX,
                format!(
                    "max_n p_n - p_0 over {} reflected cells at t = {REFLECTED_TIME}",
                    cells.len()
                ),
            ));
        } else {
            let p0 = cells
                .iter()
                .map(|&c| exponent_or_nan(&report.cells[c].fits[0]))
                .fold(
                    if cells.is_empty() {
                        f64::NEG_INFINITY
                    } else {
                        f64::INFINITY
                    },
                    |m, p| {
                        if p.is_nan() {
                            f64::NEG_INFINITY
                        } else {
                            m.min(p)
                        }
                    },
                );
            checks.push(Check::at_least(
                "reflected_p0",
                p0,
                REFLECTED_P0_MIN,
                format!(
                    "min p_0 over {} reflected cells at t = {REFLECTED_TIME}",
                    cells.len()
                ),
            ));
        }
    }

    if sw.off_ray.unwrap_or(singular && !slow) {
        let s_max = cfg.scale.width(cfg.ladder[0]);
        let noisy = off_ray_noise(
            report,
            rays,
            cfg.analyzer.tol_dist,
            (1.0 - s_max, 1.0 + s_max),
        );
        checks.push(Check::at_most(
            "off_ray_silence",
            noisy.len() as f64,
            0.0,
            "cells away from every ray and the transition band with a fitted p_0",
        ));
    }
}

fn build_oracle(
    cfg: &RunConfig,
    kind: OracleKind,
    profile: &Arc<MollifierProfile>,
) -> Result<Option<PiecewiseSolution>> {
    Ok(match kind {
        OracleKind::Fronts => Some(PiecewiseSolution::Fronts(delta_solution(cfg.jump, 1.0))),
        OracleKind::Smooth => {
            // eps-independent data: any ladder point resolves to the same functions
            let data = cfg.data.resolve(profile.clone(), cfg.ladder[0])?;
            Some(PiecewiseSolution::Smooth(SmoothSolution::new(
                cfg.jump,
                Cauchy::from_data(&data),
            )))
        }
        OracleKind::None => None,
    })
}

/// Validate, solve the ladder and evaluate every enabled check.
pub fn run(cfg: &RunConfig, stage: Stage) -> Result<RunOutput> {
    let diagnostics = validate(cfg);
    if !diagnostics.is_empty() {
        return Err(Error::Config(diagnostics.join("; ")));
    }
    let total = Instant::now();
    let profile = cfg.mollifier_profile()?;
    let oracle_kind = cfg.oracle_kind();
    let jobs = cfg
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    let runs: Vec<EpsRun> = pool.install(|| {
        cfg.ladder
            .par_iter()
            .map(|&eps| run_eps(cfg, stage, &profile, eps, oracle_kind))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut timing = BTreeMap::new();
    for r in &runs {
        timing.insert(format!("solve[{}]", fmt_eps(r.summary.eps)), r.seconds);
    }
    let mut checks = Vec::new();
    let sw = &cfg.checks;
    for r in &runs {
        let s = &r.summary;
        if sw.residual.unwrap_or(true) {
            checks.push(Check::at_most(
                format!("residual[{}]", fmt_eps(s.eps)),
                s.residual_relative,
                RESIDUAL_GATE,
                "integral-form residual over the data peak",
            ));
        }
        if sw.gronwall.unwrap_or(true) {
            checks.push(Check::at_most(
                format!("gronwall[{}]", fmt_eps(s.eps)),
                s.gronwall_ratio,
                1.0 + GRONWALL_SLACK,
                "sup(|v| + |w|) over (sup|v0| + sup|w0|) max(c)/min(c)",
            ));
        }
    }

    let ray_set = predicted_rays(cfg.jump, cfg.horizon());
    let (growth, ray_cmp, mask) = if stage.analyze() {
        let t = Instant::now();
        let samples: Vec<LadderSample> = runs
            .iter()
            .map(|r| r.sample.clone().expect("sampled"))
            .collect();
        let grid = cfg.analyzer.grid(cfg.horizon(), cfg.half_width())?;
        let report = growth_report(grid, cfg.analyzer.n_max, &samples)?;
        let mask = classify(&report, cfg.analyzer.theta);
        let four = compare(&mask, &ray_set, cfg.analyzer.tol_dist);
        let two = compare(&mask, &ray_set.direct_only(), cfg.analyzer.tol_dist);
        let four_expected = !cfg.scale.is_slow() && !cfg.jump.is_degenerate();
        analyzer_checks(cfg, &report, &ray_set, &mask, &mut checks);
        let cmp = RayComparison {
            expected: if four_expected { "four-ray" } else { "two-ray" },
            scores: if four_expected { four } else { two },
            four_ray: four,
            two_ray: two,
            singular_cells: mask.singular_centers(),
            mirror_mismatches: mask.mirror_mismatches(),
        };
        timing.insert("analyze".into(), t.elapsed().as_secs_f64());
        (Some(report), Some(cmp), Some(mask))
    } else {
        (None, None, None)
    };

    let (oracle_summary, association) = if stage.associate() {
        let t = Instant::now();
        let oracle = build_oracle(cfg, oracle_kind, &profile)?;
        let mut summary = OracleSummary {
            kind: match oracle_kind {
                OracleKind::Fronts => "fronts",
                OracleKind::Smooth => "smooth",
                OracleKind::None => "none",
            },
            fronts: None,
            amplitude_defect: None,
            reciprocity_defect: None,
        };
        if let Some(PiecewiseSolution::Fronts(f)) = &oracle {
            let amp = f.amplitude_defect();
            let rec = f.reciprocity_defect();
            if sw.matching.unwrap_or(true) {
                checks.push(Check::at_most(
                    "amplitude_conservation",
                    amp,
                    MATCHING_TOL,
                    "max |J_T + J_R - J_in| over the split fronts",
                ));
                checks.push(Check::at_most(
                    "reciprocity",
                    rec,
                    MATCHING_TOL,
                    "round trip through the matching with (c0, c1) swapped",
                ));
            }
            summary.fronts = Some(f.clone());
            summary.amplitude_defect = Some(amp);
            summary.reciprocity_defect = Some(rec);
        }
        // Slow-scale runs approach the limit only at the rate of the net, so
        // the table is reported there but gates nothing unless asked to.
        let gate = sw.association.unwrap_or(!cfg.scale.is_slow());
        let table = match &oracle {
            Some(o) if sw.association != Some(false) => {
                let tests = test_function_set(
                    &cfg.association.centers,
                    cfg.association.width,
                    profile.clone(),
                )?;
                let fields: Vec<SolutionField> = runs
                    .iter()
                    .map(|r| r.assoc.clone().expect("assoc rows"))
                    .collect();
                let table = association_check(
                    &cfg.ladder,
                    &fields,
                    o,
                    &tests,
                    &cfg.association_times(),
                    cfg.association.tol,
                )?;
                if gate {
                    checks.push(Check::at_least(
                        "association_test_functions",
                        tests.len() as f64,
                        MIN_TEST_FUNCTIONS as f64,
                        "number of test functions",
                    ));
                    checks.push(Check::at_most(
                    "association",
                    table.failures() as f64,
                    0.0,
                    format!(
                        "(psi, t) pairs failing the monotone-tail and {}% verdict; worst final relative difference {:.3e}",
                        cfg.association.tol * 100.0,
                        table.worst_relative()
                    ),
                ));
                }
                Some(table)
            }
            _ => None,
        };
        timing.insert("associate".into(), t.elapsed().as_secs_f64());
        (Some(summary), table)
    } else {
        (None, None)
    };

    let energy = if stage.energy() && sw.energy.unwrap_or(true) {
        let mut reports = Vec::new();
        for r in &runs {
            let e = r.summary.eps;
            match r.energy.as_ref().expect("energy computed") {
                Ok(rep) => {
                    checks.push(Check::at_most(
                        format!("energy_flat[{}]", fmt_eps(e)),
                        rep.flat_deviation,
                        FLAT_TOL,
                        "max |E(t)/E(t_a) - 1| where the speed is constant",
                    ));
                    checks.push(Check::at_most(
                        format!("energy_ceiling[{}]", fmt_eps(e)),
                        rep.ceiling_ratio,
                        1.0 + CEILING_SLACK,
                        "max E(t) over the Gronwall ceiling",
                    ));
                    if cfg.jump.is_degenerate() {
                        checks.push(Check::at_most(
                            format!("energy_conserved[{}]", fmt_eps(e)),
                            rep.drift,
                            FLAT_TOL,
                            "max |E(t)/E(0) - 1| with c0 = c1",
                        ));
                    }
                    reports.push(rep.clone());
                }
                Err(err) => checks.push(Check::at_most(
                    format!("energy[{}]", fmt_eps(e)),
                    f64::INFINITY,
                    0.0,
                    err.to_string(),
                )),
            }
        }
        Some(reports)
    } else {
        None
    };

    timing.insert("total".into(), total.elapsed().as_secs_f64());
    let pass = checks.iter().all(|c| c.pass);
    let report = RunReport {
        provenance: provenance(cfg, stage),
        config: RunConfig {
            output_dir: None,
            jobs: None,
            ..cfg.clone()
        },
        runs: runs.iter().map(|r| r.summary.clone()).collect(),
        growth,
        rays: ray_cmp,
        oracle: oracle_summary,
        association,
        energy,
        checks,
        pass,
    };
    Ok(RunOutput {
        report,
        snapshots: runs
            .into_iter()
            .map(|r| (r.summary.eps, r.snapshots))
            .collect(),
        mask,
        ray_set,
        timing,
    })
}
