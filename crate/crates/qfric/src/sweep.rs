//! Parallel evaluation of the frequency grid.

use rayon::prelude::*;

use qfric_core::spectrum::{
    calibration_factor, evaluate_row, integrate_spectrum, SpectrumConfig, SpectrumResult,
    TotalPower,
};

/// Evaluate every grid frequency; rows are independent, so the result does
/// not depend on the number of worker threads.
pub fn compute_spectrum(cfg: &SpectrumConfig) -> SpectrumResult {
    let rows = cfg
        .omega_grid
        .par_iter()
        .map(|&w| evaluate_row(cfg, w))
        .collect();
    SpectrumResult::from_rows(rows)
}

/// A finished sweep with its derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub result: SpectrumResult,
    /// `None` when the grid is too short or a frequency failed.
    pub totals: Option<TotalPower>,
    /// Multiplies every reported power; see [`calibration_factor`].
    pub calibration: f64,
}

impl SweepReport {
    pub fn rows_not_converged(&self) -> usize {
        self.result.rows.iter().filter(|r| !r.converged).count()
    }
}

pub fn run_sweep(cfg: &SpectrumConfig) -> Result<SweepReport, qfric_core::Error> {
    let calibration = calibration_factor(&cfg.particle, cfg.z, &cfg.quad)?;
    let result = compute_spectrum(cfg);
    let totals = integrate_spectrum(&result).ok();
    Ok(SweepReport {
        result,
        totals,
        calibration,
    })
}
