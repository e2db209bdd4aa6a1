//! JSON run configuration and load-time validation.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analyzer::AnalyzerConfig;
use crate::coefficient::{
    slow_scale_check, JumpSpeed, RegularizedSpeed, ScaleRule, SLOW_REFERENCE_LADDER,
    SLOW_SCALE_POWERS, T_JUMP,
};
use crate::error::{Error, Result};
use crate::mollifier::{MollifierKind, MollifierProfile};
use crate::transport::{
    DataScale, InitialData, SolverConfig, Splitting, U0Spec, U1Spec, STEP_QUANTUM,
};

fn default_ladder() -> Vec<f64> {
    vec![0.1, 0.05, 0.025, 0.0125]
}

fn default_snapshots() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 1.5, 2.0]
}

/// Test functions for the association check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociationSpec {
    pub centers: Vec<f64>,
    pub width: f64,
    pub times: Vec<f64>,
    /// Relative tolerance at the smallest eps.
    pub tol: f64,
}

impl Default for AssociationSpec {
    fn default() -> Self {
        Self {
            centers: vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
            width: 0.75,
            times: vec![0.5, 1.0, 1.5, 2.0],
            tol: 0.05,
        }
    }
}

/// Time spacing of the energy trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub step: f64,
}

impl Default for EnergySpec {
    fn default() -> Self {
        Self { step: 0.05 }
    }
}

/// Per-check switches; `None` lets the runner decide from the setup.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSwitches {
    pub residual: Option<bool>,
    pub gronwall: Option<bool>,
    pub direct_ladder: Option<bool>,
    pub rays: Option<bool>,
    pub reflected: Option<bool>,
    pub off_ray: Option<bool>,
    pub association: Option<bool>,
    pub matching: Option<bool>,
    pub energy: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    pub jump: JumpSpeed,
    #[serde(default)]
    pub scale: ScaleRule,
    #[serde(default)]
    pub mollifier: MollifierKind,
    #[serde(default)]
    pub data: InitialData,
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    /// Window `|x| <= half_width`, horizon and grids.
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub analyzer: AnalyzerConfig,
    #[serde(default)]
    pub association: AssociationSpec,
    #[serde(default)]
    pub energy: EnergySpec,
    /// Times written to `fields_eps*.csv`.
    #[serde(default = "default_snapshots")]
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub checks: CheckSwitches,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

/// Which oracle applies to the configured data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// `u0 = 0`, `u1 = delta`: front list.
    Fronts,
    /// Data independent of eps: glued d'Alembert segments.
    Smooth,
    None,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn horizon(&self) -> f64 {
        self.solver.horizon
    }

    pub fn half_width(&self) -> f64 {
        self.solver.half_width
    }

    pub fn mollifier_profile(&self) -> Result<Arc<MollifierProfile>> {
        Ok(Arc::new(match &self.mollifier {
            MollifierKind::Canonical => MollifierProfile::canonical(),
            k => MollifierProfile::build(k.clone(), 1e-13)?,
        }))
    }

    /// Data whose support shrinks with eps, i.e. a singular limit.
    pub fn singular_data(&self) -> bool {
        self.data.scale == DataScale::Run
            && matches!(self.data.u1, U1Spec::Delta | U1Spec::DeltaPower { .. })
            && matches!(self.data.u0, U0Spec::Zero | U0Spec::SmoothedStep { .. })
    }

    pub fn oracle_kind(&self) -> OracleKind {
        if self.data.splitting != Splitting::Full {
            return OracleKind::None;
        }
        let eps_free_u0 = !matches!(self.data.u0, U0Spec::SmoothedStep { .. })
            || self.data.scale != DataScale::Run;
        let eps_free_u1 = !matches!(self.data.u1, U1Spec::Delta | U1Spec::DeltaPower { .. })
            || self.data.scale != DataScale::Run;
        if self.data.u0 == U0Spec::Zero
            && self.data.u1 == U1Spec::Delta
            && self.data.scale == DataScale::Run
        {
            OracleKind::Fronts
        } else if eps_free_u0 && eps_free_u1 {
            OracleKind::Smooth
        } else {
            OracleKind::None
        }
    }

    /// SHA-256 of the canonical JSON form, without output location and
    /// worker count.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        c.jobs = None;
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Association times inside the horizon.
    pub fn association_times(&self) -> Vec<f64> {
        self.association
            .times
            .iter()
            .copied()
            .filter(|&t| t <= self.horizon() + 1e-12)
            .collect()
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        self.snapshots
            .iter()
            .copied()
            .filter(|&t| t <= self.horizon() + 1e-12)
            .collect()
    }

    pub fn energy_times(&self) -> Vec<f64> {
        let n = (self.horizon() / self.energy.step + 1e-9).floor() as usize;
        (0..=n).map(|k| k as f64 * self.energy.step).collect()
    }
}

fn on_time_grid(t: f64) -> bool {
    let q = t * STEP_QUANTUM as f64;
    (q - q.round()).abs() < 1e-6
}

/// Every violated invariant, without running anything.
pub fn validate(cfg: &RunConfig) -> Vec<String> {
    let mut out = Vec::new();
    macro_rules! push {
        ($e:expr) => {
            out.push($e.to_string())
        };
    }

    if let Err(e) = cfg.jump.validate() {
        push!(e);
    }
    let profile = match cfg.mollifier_profile() {
        Ok(p) => Some(p),
        Err(e) => {
            push!(e);
            None
        }
    };
    if cfg.ladder.len() < 4 {
        push!(Error::LadderTooShort(cfg.ladder.len()));
    }
    if cfg.ladder.windows(2).any(|w| !(w[1] < w[0])) {
        push!(Error::Config("ladder must be strictly decreasing".into()));
    }
    if cfg.ladder.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        push!(Error::Config("ladder values must lie in (0, 1]".into()));
    }
    if let Err(e) = cfg.solver.validate_basic() {
        push!(e);
    }
    if !cfg.jump.is_degenerate() && cfg.horizon() <= T_JUMP {
        push!(Error::Config(format!(
            "horizon {} must exceed 1 for a splitting experiment",
            cfg.horizon()
        )));
    }
    if let Err(e) = cfg.data.validate() {
        push!(e);
    }
    if let ScaleRule::Slow { .. } = cfg.scale {
        match slow_scale_check(&cfg.scale, &SLOW_REFERENCE_LADDER, &SLOW_SCALE_POWERS) {
            Ok(r) if !r.pass => push!(Error::Config(format!(
                "scale rule {} fails the slow-scale test (slopes {:?})",
                cfg.scale.label(),
                r.entries.iter().map(|e| e.slope).collect::<Vec<_>>()
            ))),
            Err(e) => push!(e),
            _ => {}
        }
    }
    if let Err(e) = cfg.analyzer.validate() {
        push!(e);
    }
    if let Err(e) = cfg.analyzer.grid(cfg.horizon(), cfg.half_width()) {
        push!(e);
    }

    let jump_ok = cfg.jump.validate().is_ok();
    if let (Some(profile), true) = (profile, jump_ok) {
        for &eps in cfg.ladder.iter().filter(|e| **e > 0.0 && **e <= 1.0) {
            let rs = match RegularizedSpeed::new(cfg.jump, profile.clone(), cfg.scale, eps) {
                Ok(rs) => rs,
                Err(e) => {
                    out.push(format!("eps = {eps}: {e}"));
                    continue;
                }
            };
            if let Err(e) = cfg.solver.discretize(&rs, cfg.data.data_eps(eps)) {
                out.push(format!("eps = {eps}: {e}"));
                continue;
            }
            if let Ok(data) = cfg.data.resolve(profile.clone(), eps) {
                let (a, b) = data.support();
                let reach = rs.primitive(cfg.horizon());
                if a - reach <= -cfg.half_width() || b + reach >= cfg.half_width() {
                    push!(Error::DomainTooSmall(format!(
                        "eps = {eps}: data support [{a}, {b}] travels {reach} and reaches |x| = {}",
                        cfg.half_width()
                    )));
                }
            }
        }
    }

    if cfg.association.width <= 0.0 {
        push!(Error::Config("association width must be positive".into()));
    }
    for &c in &cfg.association.centers {
        let (a, b) = (c - cfg.association.width, c + cfg.association.width);
        if a < -cfg.half_width() || b > cfg.half_width() {
            push!(Error::Config(format!(
                "test function at {c} leaves the window"
            )));
        }
    }
    if !(cfg.association.tol > 0.0) {
        push!(Error::Config("association tol must be positive".into()));
    }
    for &t in cfg.association.times.iter().chain(&cfg.snapshots) {
        if !(0.0..=cfg.horizon() + 1e-12).contains(&t) || !on_time_grid(t) {
            push!(Error::Config(format!(
                "time {t} is not a multiple of 1/{STEP_QUANTUM} in [0, {}]",
                cfg.horizon()
            )));
        }
    }
    if !(cfg.energy.step > 0.0) || !on_time_grid(cfg.energy.step) {
        push!(Error::Config(format!(
            "energy step {} must be a positive multiple of 1/{STEP_QUANTUM}",
            cfg.energy.step
        )));
    }
    if cfg.jobs == Some(0) {
        push!(Error::Config("jobs must be at least 1".into()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig::from_json(r#"{"jump": {"c0": 1.0, "c1": 2.0}}"#).unwrap()
    }

    #[test]
    fn minimal_config_is_valid() {
        assert!(validate(&base()).is_empty(), "{:?}", validate(&base()));
    }

    #[test]
    fn short_ladder_is_reported() {
        let mut c = base();
        c.ladder = vec![0.1, 0.05, 0.025];
        let d = validate(&c);
        assert!(d.iter().any(|m| m.contains("ladder too short")), "{d:?}");
    }

    #[test]
    fn large_step_names_the_bound() {
        let mut c = base();
        c.solver.time_step = Some(0.01);
        let d = validate(&c);
        assert!(d.iter().any(|m| m.contains("s(eps)/10")), "{d:?}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfig::from_json(r#"{"jump": {"c0": 1.0, "c1": 2.0}, "bogus": 1}"#).is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = base();
        let mut b = base();
        b.output_dir = Some("elsewhere".into());
        b.jobs = Some(3);
        assert_eq!(a.hash(), b.hash());
    }
}
