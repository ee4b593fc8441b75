//! Shared inputs for the criterion benches.

use pdm_osc_core::{SystemParams, ThermoInput};

/// The `m = 1` parameter set with `α = 1`, `λ = 1`.
pub fn params(k: f64) -> SystemParams {
    SystemParams::new(1.0, k, 1.0).expect("valid bench parameters")
}

/// Inputs over `T ∈ [0.1, 50]` at fixed `k` and `m`.
pub fn temperature_sweep(k: f64, m: i32, count: usize) -> Vec<ThermoInput> {
    let grid = pdm_osc_core::thermo::TemperatureGrid { count, ..Default::default() };
    grid.points()
        .into_iter()
        .map(|t| ThermoInput::at_temperature(params(k), m, t).expect("positive temperature"))
        .collect()
}
