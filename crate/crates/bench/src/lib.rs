//! Shared fixtures for the criterion benches.

use otto_lgi::sweep::{Axis, AxisName, AxisScale};
use otto_lgi::EngineParams;

/// Base engine of the phase-diagram sweeps at a moderate friction.
pub fn base_params() -> EngineParams {
    EngineParams::baseline().with_sigma_bar(0.3)
}

/// A small `σ̄ × T_h` grid with the default axis ranges.
pub fn small_grid(n: usize) -> (Axis, Axis) {
    let x = Axis::new(AxisName::SigmaBar, 0.0, 0.7, n).expect("valid axis");
    let y = Axis::with_scale(AxisName::THot, 5.0, 500.0, n, AxisScale::Log).expect("valid axis");
    (x, y)
}
