//! Piecewise distributional solution of the transmission problem, weak
//! pairings and the energy estimate.

mod association;
mod energy;
mod fronts;
mod smooth;
mod test_functions;

pub use association::{
    association_check, pair_field, AssociationRow, AssociationTable, PiecewiseSolution,
    ASSOC_FLOOR, ASSOC_FLOOR_REL,
};
pub use energy::{energy_check, EnergyReport, EnergyTrace, CEILING_SLACK, FLAT_TOL};
pub use fronts::{delta_solution, match_jumps, Front, FrontSolution, Split};
pub use smooth::{dalembert, transmission_restart, Cauchy, Scalar, SmoothSegment, SmoothSolution};
pub use test_functions::{test_function_set, TestFunction};
