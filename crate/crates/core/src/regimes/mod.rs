//! Parameter-space exploration: initial-state scans, the velocity-detector
//! error budget, the detectable-signal region and the LG3 bound shift.

mod budget;
mod curves;
mod scan;

pub use budget::{
    budget_grid, ctvm_error_budget, ctvm_theoretical_correlator, lg3_bound_shift, signal_region,
    BoundShift, BudgetCell, ErrorBudget, SignalGrid, QUOTED_BOUND_SHIFT,
};
pub use curves::{detector_lg3_curve, equidistant_lg3_curve, DetectorCurveRow};
pub use scan::{classify_point, scan_initial_states, CellClass, RegionCell, RegionMap};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(invalid("n", "at least two points are required"));
    }
    let last = T::from_usize(n - 1).unwrap();
    Ok((0..n)
        .map(|k| lo + (hi - lo) * T::from_usize(k).unwrap() / last)
        .collect())
}
