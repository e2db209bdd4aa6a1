//! Characteristic solver for the first-order system equivalent to the wave
//! equation, and reconstruction of `u`.

mod config;
mod data;
mod reconstruct;
mod residual;
mod solver;
mod sparse;

pub use config::{Discretization, SolverConfig, STEP_QUANTUM};
pub use data::{
    wave_to_system, DataScale, InitialData, ResolvedData, Splitting, Table, U0Spec, U1Spec,
};
pub use reconstruct::{reconstruct, FieldRow, SolutionField};
pub use residual::residual;
pub use solver::{solve, solve_system, FieldPair, FieldSummary, Profile};
pub use sparse::{Run, SparseRow};
