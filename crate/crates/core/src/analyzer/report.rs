use serde::{Deserialize, Serialize};

use super::cells::{cell_sups, observable_profiles, CellGrid, Observable};
use super::fit::{least_squares, GrowthFit};
use super::rays::RaySet;
use crate::error::{Error, Result};
use crate::transport::{FieldPair, SolutionField};

fn d_cell() -> f64 {
    0.1
}
fn d_rows() -> usize {
    4
}
fn d_nmax() -> usize {
    3
}
fn d_theta() -> f64 {
    0.5
}
fn d_tol_dist() -> f64 {
    0.15
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    #[serde(default = "d_cell")]
    pub cell_t: f64,
    #[serde(default = "d_cell")]
    pub cell_x: f64,
    #[serde(default = "d_rows")]
    pub rows_per_cell: usize,
    #[serde(default = "d_nmax")]
    pub n_max: usize,
    /// Minimum slope of `p_n` in `n` for a singular cell.
    #[serde(default = "d_theta")]
    pub theta: f64,
    #[serde(default)]
    pub observable: Observable,
    #[serde(default = "d_tol_dist")]
    pub tol_dist: f64,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        Self {
            cell_t: d_cell(),
            cell_x: d_cell(),
            rows_per_cell: d_rows(),
            n_max: d_nmax(),
            theta: d_theta(),
            observable: Observable::default(),
            tol_dist: d_tol_dist(),
        }
    }
}

impl AnalyzerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max > super::cells::MAX_ORDER {
            return Err(Error::Config(format!("n_max {} exceeds 3", self.n_max)));
        }
        if !(self.theta > 0.0) || !(self.tol_dist > 0.0) {
            return Err(Error::Config("theta and tol_dist must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self, horizon: f64, half_width: f64) -> Result<CellGrid> {
        CellGrid::new(
            horizon,
            half_width,
            self.cell_t,
            self.cell_x,
            self.rows_per_cell,
        )
    }
}

/// Sups of one eps run, `sups[cell][n]`, with that run's noise floor.
#[derive(Debug, Clone)]
pub struct LadderSample {
    pub eps: f64,
    pub floor: f64,
    pub sups: Vec<Vec<f64>>,
}

/// Measure one run on the cell grid.
pub fn sample_run(
    grid: &CellGrid,
    fp: &FieldPair,
    field: Option<&SolutionField>,
    cfg: &AnalyzerConfig,
) -> Result<LadderSample> {
    let rows = observable_profiles(grid, fp, field, cfg.observable)?;
    Ok(LadderSample {
        eps: fp.speed().eps(),
        floor: 10.0 * fp.tol_num() * fp.data_peak(),
        sups: cell_sups(grid, &rows, cfg.n_max),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CellGrowth {
    pub cell: usize,
    pub t: f64,
    pub x: f64,
    /// `sups[n][k]` for ladder entry `k`.
    pub sups: Vec<Vec<f64>>,
    pub fits: Vec<GrowthFit>,
    /// Least-squares slope of `p_n` against `n`, when every order was fitted.
    pub slope: Option<f64>,
}

impl CellGrowth {
    pub fn exponent(&self, n: usize) -> Option<f64> {
        self.fits[n].exponent()
    }

    pub fn below_floor(&self) -> bool {
        self.fits.iter().all(|f| *f == GrowthFit::BelowNoiseFloor)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub ladder: Vec<f64>,
    pub n_max: usize,
    pub grid: CellGrid,
    pub floors: Vec<f64>,
    pub cells: Vec<CellGrowth>,
}

/// Fit with a floor per ladder entry.
pub fn fit_with_floors(eps: &[f64], sups: &[f64], floors: &[f64]) -> GrowthFit {
    if sups.iter().zip(floors).any(|(s, f)| !(*s > *f)) {
        return GrowthFit::BelowNoiseFloor;
    }
    super::fit::fit_growth_order(eps, sups, 0.0)
}

/// Fit `p_n` for every cell from samples ordered by decreasing eps.
pub fn growth_report(
    grid: CellGrid,
    n_max: usize,
    samples: &[LadderSample],
) -> Result<GrowthReport> {
    if samples.len() < 4 {
        return Err(Error::LadderTooShort(samples.len()));
    }
    let ladder: Vec<f64> = samples.iter().map(|s| s.eps).collect();
    let floors: Vec<f64> = samples.iter().map(|s| s.floor).collect();
    let orders: Vec<f64> = (0..=n_max).map(|n| n as f64).collect();
    let cells = (0..grid.len())
        .map(|k| {
            let sups: Vec<Vec<f64>> = (0..=n_max)
                .map(|n| samples.iter().map(|s| s.sups[k][n]).collect())
                .collect();
            let fits: Vec<GrowthFit> = sups
                .iter()
                .map(|s| fit_with_floors(&ladder, s, &floors))
                .collect();
            let ps: Option<Vec<f64>> = fits.iter().map(|f| f.exponent()).collect();
            let slope = ps.map(|p| least_squares(&orders, &p).0);
            let (t, x) = grid.center(k);
            CellGrowth {
                cell: k,
                t,
                x,
                sups,
                fits,
                slope,
            }
        })
        .collect();
    Ok(GrowthReport {
        ladder,
        n_max,
        grid,
        floors,
        cells,
    })
}

/// Singular/regular flag per cell.
#[derive(Debug, Clone, Serialize)]
pub struct Mask {
    pub grid: CellGrid,
    pub singular: Vec<bool>,
}

impl Mask {
    pub fn count(&self) -> usize {
        self.singular.iter().filter(|s| **s).count()
    }

    pub fn singular_centers(&self) -> Vec<(f64, f64)> {
        (0..self.grid.len())
            .filter(|&k| self.singular[k])
            .map(|k| self.grid.center(k))
            .collect()
    }

    /// Singular cells whose mirror image in `x` has no singular cell within one column.
    pub fn mirror_mismatches(&self) -> usize {
        let g = &self.grid;
        (0..g.len())
            .filter(|&k| {
                if !self.singular[k] {
                    return false;
                }
                let (ti, xi) = g.coords(k);
                let mirror = g.nx - 1 - xi;
                let lo = mirror.saturating_sub(1);
                let hi = (mirror + 1).min(g.nx - 1);
                !(lo..=hi).any(|x| self.singular[g.index(ti, x)])
            })
            .count()
    }
}

/// Singular iff `p_n` rises with `n` at an average rate of at least `theta`.
pub fn classify(report: &GrowthReport, theta: f64) -> Mask {
    Mask {
        grid: report.grid,
        singular: report
            .cells
            .iter()
            .map(|c| c.slope.is_some_and(|s| s >= theta))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Scores {
    /// Share of singular cells whose center is within `tol_dist` of a ray.
    pub precision: f64,
    /// Share of ray sample points within `tol_dist` of a singular cell center.
    pub recall: f64,
    pub singular_cells: usize,
    pub ray_samples: usize,
}

/// Arc-length spacing of ray samples used for recall.
pub const RAY_SAMPLE_SPACING: f64 = 0.01;

/// Agreement of a mask with a ray set. An empty mask scores `(1, 0)`.
pub fn compare(mask: &Mask, rays: &RaySet, tol_dist: f64) -> Scores {
    let centers = mask.singular_centers();
    let near = centers
        .iter()
        .filter(|(t, x)| rays.distance(*t, *x) <= tol_dist)
        .count();
    let precision = if centers.is_empty() {
        1.0
    } else {
        near as f64 / centers.len() as f64
    };
    let g = &mask.grid;
    let t_max = g.nt as f64 * g.cell_t;
    let x_max = g.x_min + g.nx as f64 * g.cell_x;
    let samples: Vec<(f64, f64)> = rays
        .rays
        .iter()
        .flat_map(|r| r.samples(RAY_SAMPLE_SPACING))
        .filter(|(t, x)| *t >= 0.0 && *t <= t_max && *x >= g.x_min && *x <= x_max)
        .collect();
    let covered = samples
        .iter()
        .filter(|(t, x)| {
            centers
                .iter()
                .any(|(ct, cx)| ((ct - t).powi(2) + (cx - x).powi(2)).sqrt() <= tol_dist)
        })
        .count();
    let recall = if samples.is_empty() {
        1.0
    } else {
        covered as f64 / samples.len() as f64
    };
    Scores {
        precision,
        recall,
        singular_cells: centers.len(),
        ray_samples: samples.len(),
    }
}

/// Cells farther than `tol_dist` from every ray and outside the band
/// `[t_lo, t_hi]` that still carry a fit.
pub fn off_ray_noise(
    report: &GrowthReport,
    rays: &RaySet,
    tol_dist: f64,
    band: (f64, f64),
) -> Vec<usize> {
    let g = &report.grid;
    report
        .cells
        .iter()
        .filter(|c| {
            let (ti, _) = g.coords(c.cell);
            let (ta, tb) = g.t_bounds(ti);
            let in_band = ta < band.1 && tb > band.0;
            !in_band
                && rays.distance(c.t, c.x) > tol_dist
                && c.fits[0] != GrowthFit::BelowNoiseFloor
        })
        .map(|c| c.cell)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::rays::predicted_rays;
    use crate::coefficient::JumpSpeed;

    fn synthetic(grid: CellGrid, singular: impl Fn(f64, f64) -> bool) -> Vec<LadderSample> {
        [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&eps| LadderSample {
                eps,
                floor: 1e-12,
                sups: (0..grid.len())
                    .map(|k| {
                        let (t, x) = grid.center(k);
                        if singular(t, x) {
                            (0..4).map(|n| eps.powi(-n - 1)).collect()
                        } else {
                            vec![0.0; 4]
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn perfect_agreement_scores_one() {
        let grid = CellGrid::new(2.0, 4.0, 0.1, 0.1, 4).unwrap();
        let rays = predicted_rays(JumpSpeed::new(1.0, 2.0).unwrap(), 2.0);
        let samples = synthetic(grid, |t, x| rays.distance(t, x) <= 0.0708);
        let report = growth_report(grid, 3, &samples).unwrap();
        let mask = classify(&report, 0.5);
        let s = compare(&mask, &rays, 0.15);
        assert_eq!(s.precision, 1.0);
        assert_eq!(s.recall, 1.0);
        assert_eq!(mask.mirror_mismatches(), 0);
        assert!(off_ray_noise(&report, &rays, 0.15, (0.9, 1.1)).is_empty());
    }

    #[test]
    fn empty_mask_convention() {
        let grid = CellGrid::new(2.0, 4.0, 0.1, 0.1, 4).unwrap();
        let rays = predicted_rays(JumpSpeed::new(1.0, 2.0).unwrap(), 2.0);
        let report = growth_report(grid, 3, &synthetic(grid, |_, _| false)).unwrap();
        let s = compare(&classify(&report, 0.5), &rays, 0.15);
        assert_eq!((s.precision, s.recall), (1.0, 0.0));
    }

    #[test]
    fn bounded_ladder_is_regular() {
        let grid = CellGrid::new(0.2, 0.1, 0.1, 0.1, 4).unwrap();
        let samples: Vec<LadderSample> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&eps| LadderSample {
                eps,
                floor: 0.0,
                sups: vec![vec![1.0 / eps; 4]; grid.len()],
            })
            .collect();
        let report = growth_report(grid, 3, &samples).unwrap();
        assert!(classify(&report, 0.5).singular.iter().all(|s| !s));
        assert!(report.cells[0].slope.unwrap().abs() < 1e-12);
    }
}
