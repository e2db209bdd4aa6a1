//! Experiment driver: JSON configs, presets, the eps-ladder run and its artefacts.

mod config;
mod output;
mod presets;
mod run;

pub use config::{validate, AssociationSpec, CheckSwitches, EnergySpec, OracleKind, RunConfig};
pub use output::{fields_name, write_outputs};
pub use presets::{preset, preset_names, PRESETS};
pub use run::{
    run, Check, EpsSummary, OracleSummary, Provenance, RayComparison, Relation, RunOutput,
    RunReport, Stage, DIRECT_TIME, GRONWALL_SLACK, LADDER_MARGIN, LADDER_RESIDUAL, MATCHING_TOL,
    MIN_TEST_FUNCTIONS, REFLECTED_P0_MIN, REFLECTED_SPREAD_MAX, REFLECTED_TIME, RESIDUAL_GATE,
    SCORE_MIN,
};
