use rayon::prelude::*;

use super::{evaluate, ThermoInput, ThermoResult};
use crate::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "PDM_OSC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    Linear,
    Log,
    /// A fifth of the points log-spaced below `T = 1`, the rest linear above.
    #[default]
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for TemperatureGrid {
    fn default() -> Self {
        TemperatureGrid { min: 0.1, max: 50.0, count: 500, spacing: Spacing::Hybrid }
    }
}

fn linspace(lo: f64, hi: f64, count: usize, include_end: bool) -> Vec<f64> {
    let denom = if include_end { count.saturating_sub(1).max(1) } else { count } as f64;
    (0..count).map(|i| lo + (hi - lo) * i as f64 / denom).collect()
}

impl TemperatureGrid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(min > 0.0 && max > min && max.is_finite()) {
            return Err(Error::InvalidParameter { field: "T_grid", reason: format!("need 0 < min < max, got [{min}, {max}]") });
        }
        if count < 2 {
            return Err(Error::InvalidParameter { field: "T_count", reason: format!("{count} must be ≥ 2") });
        }
        Ok(TemperatureGrid { min, max, count, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        let (lo, hi, n) = (self.min, self.max, self.count);
        match self.spacing {
            Spacing::Linear => linspace(lo, hi, n, true),
            Spacing::Log => linspace(lo.ln(), hi.ln(), n, true).into_iter().map(f64::exp).collect(),
            Spacing::Hybrid if lo < 1.0 && hi > 1.0 => {
                let n_log = (n / 5).clamp(1, n - 1);
                let mut out: Vec<f64> = linspace(lo.ln(), 0.0, n_log, false).into_iter().map(f64::exp).collect();
                out.extend(linspace(1.0, hi, n - n_log, true));
                out
            }
            Spacing::Hybrid => linspace(lo, hi, n, true),
        }
    }
}

/// Worker count from [`THREADS_ENV`], or `None` for the rayon default.
pub fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Evaluate every input in parallel; results keep the input order.
pub fn evaluate_grid(inputs: &[ThermoInput]) -> Vec<Result<ThermoResult>> {
    let run = || inputs.par_iter().map(evaluate).collect::<Vec<_>>();
    match thread_count().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

/// Flattest doubling window `[T*, 2T*]` of a sampled curve after its maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub t_star: f64,
    /// Mean over the window.
    pub value: f64,
    /// `(max − min)/mean` over the window.
    pub variation: f64,
    pub peak_t: f64,
    pub peak_value: f64,
}

pub fn plateau_scan(ts: &[f64], ys: &[f64]) -> Option<Plateau> {
    assert_eq!(ts.len(), ys.len());
    let peak = (0..ys.len()).max_by(|&i, &j| ys[i].total_cmp(&ys[j]))?;
    let mut best: Option<Plateau> = None;
    for start in peak..ts.len() {
        let t_star = ts[start];
        if 2.0 * t_star > ts[ts.len() - 1] {
            break;
        }
        let window: Vec<f64> = (start..ts.len()).take_while(|&i| ts[i] <= 2.0 * t_star).map(|i| ys[i]).collect();
        if window.len() < 2 {
            continue;
        }
        let mean = window.iter().sum::<f64>() / window.len() as f64;
        let spread = window.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - window.iter().copied().fold(f64::INFINITY, f64::min);
        let variation = spread / mean.abs();
        if best.as_ref().is_none_or(|b| variation < b.variation) {
            best = Some(Plateau { t_star, value: mean, variation, peak_t: ts[peak], peak_value: ys[peak] });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hybrid_grid_shape() {
        let pts = TemperatureGrid::default().points();
        assert_eq!(pts.len(), 500);
        assert!((pts[0] - 0.1).abs() < 1e-15);
        assert_eq!(*pts.last().unwrap(), 50.0);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(pts[100], 1.0);
    }

    #[test]
    fn plateau_of_a_saturating_curve() {
        let ts: Vec<f64> = (1..=400).map(|i| i as f64 * 0.25).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 1.0 + (-t).exp() * t).collect();
        let p = plateau_scan(&ts, &ys).unwrap();
        assert!(p.variation < 1e-3);
        assert!((p.value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn grid_results_keep_order() {
        let params = crate::SystemParams::new(1.0, -0.2, 1.0).unwrap();
        let inputs: Vec<_> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| ThermoInput::at_temperature(params, 1, t).unwrap())
            .collect();
        let out = evaluate_grid(&inputs);
        for (r, inp) in out.iter().zip(&inputs) {
            assert_eq!(r.as_ref().unwrap().beta, inp.beta);
        }
    }
}
