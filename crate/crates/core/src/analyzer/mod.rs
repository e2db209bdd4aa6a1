//! Empirical singular support: growth orders `p_n` of `sup |d^n/dx^n|` per
//! space-time cell over an eps ladder, classification by the slope of `p_n`
//! in `n`, and comparison with the predicted ray geometry.

mod cells;
mod fit;
mod rays;
mod report;

pub use cells::{
    cell_sups, central_difference, derivative_sup, observable_profiles, CellGrid, Observable,
    MAX_ORDER,
};
pub use fit::{fit_growth_order, least_squares, GrowthFit};
pub use rays::{cells_straddling, predicted_rays, Ray, RayKind, RaySet, Segment};
pub use report::{
    classify, compare, fit_with_floors, growth_report, off_ray_noise, sample_run, AnalyzerConfig,
    CellGrowth, GrowthReport, LadderSample, Mask, Scores, RAY_SAMPLE_SPACING,
};
