use super::{Diagnostics, Strategy, ThermoInput, ThermoResult};
use crate::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Boltzmann statistics of a finite list of levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSum {
    pub ln_z: f64,
    /// `⟨E⟩`.
    pub mean: f64,
    /// `⟨E²⟩ − ⟨E⟩²`, accumulated about the mean.
    pub variance: f64,
    /// `ln Z + β⟨E⟩` without cancellation against the ground level.
    pub entropy: f64,
    /// Geometric estimate of the omitted tail relative to the retained sum.
    pub tail_estimate: f64,
}

/// Log-sum-exp accumulation of `Σ exp(−β E_i)` and its first two moments.
pub fn level_sum(energies: &[f64], beta: f64) -> LevelSum {
    assert!(!energies.is_empty());
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    // weights above the lowest level, so that ln Σw = ln_1p(excited)
    let mut excited = CompensatedSum::default();
    let mut first = CompensatedSum::default();
    let mut seen_min = false;
    for (w, e) in weights.iter().zip(energies) {
        if *e == e_min && !seen_min {
            seen_min = true;
        } else {
            excited.add(*w);
        }
        first.add(w * (e - e_min));
    }
    let ln_total = excited.value().ln_1p();
    let total = 1.0 + excited.value();
    let excess = first.value() / total;
    let mean = e_min + excess;
    let mut second = CompensatedSum::default();
    for (w, e) in weights.iter().zip(energies) {
        second.add(w * (e - mean).powi(2));
    }
    let tail_estimate = match weights.len() {
        0 | 1 => 0.0,
        n => {
            let ratio = weights[n - 1] / weights[n - 2];
            if ratio < 1.0 {
                weights[n - 1] * ratio / (1.0 - ratio) / total
            } else {
                f64::INFINITY
            }
        }
    };
    LevelSum {
        ln_z: -beta * e_min + ln_total,
        mean,
        variance: second.value() / total,
        entropy: ln_total + beta * excess,
        tail_estimate,
    }
}

pub(crate) fn levels(input: &ThermoInput) -> Result<Vec<f64>> {
    let p = &input.params;
    let ms: Vec<i32> = match input.m_range {
        Some(mm) => (-(mm as i32)..=mm as i32).collect(),
        None => vec![input.m],
    };
    let mut out = Vec::with_capacity(ms.len() * (input.truncation as usize + 1));
    for m in ms {
        let (_, c1, c2) = crate::oscillator::energy_quadratic(p, m);
        // E(n+1) − E(n) = c1 + c2 (2n + 1)
        let increasing = c1 + c2 > 0.0 && c1 + c2 * (2.0 * input.truncation as f64 - 1.0) > 0.0;
        if !increasing && !input.accept_truncation {
            return Err(Error::TruncationNotAccepted { k: p.k() });
        }
        out.extend((0..=input.truncation).map(|n| p.energy(n, m)));
    }
    Ok(out)
}

/// Truncated state sum `Σ_{n=0}^{N} exp(−β E_{n,m})` with exact moments.
pub fn partition_direct(input: &ThermoInput) -> Result<ThermoResult> {
    let levels = levels(input)?;
    let sum = level_sum(&levels, input.beta);
    let kb = input.params.kb();
    let beta = input.beta;
    Ok(ThermoResult::assemble(
        input,
        sum.ln_z,
        sum.mean,
        kb * beta * beta * sum.variance,
        kb * sum.entropy,
        Diagnostics { strategy: Strategy::DirectSum, tail_estimate: Some(sum.tail_estimate), ..Default::default() },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level() {
        let s = level_sum(&[2.5], 3.0);
        assert!((s.ln_z + 7.5).abs() < 1e-15);
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.entropy, 0.0);
    }

    #[test]
    fn entropy_keeps_relative_precision_when_frozen_out() {
        let beta = 40.0;
        let s = level_sum(&[100.0, 101.0], beta);
        let x = (-beta).exp();
        let want = x.ln_1p() + beta * x / (1.0 + x);
        assert!((s.entropy - want).abs() <= 1e-14 * want);
    }

    #[test]
    fn two_level_moments() {
        let beta = 0.7;
        let s = level_sum(&[0.0, 1.0], beta);
        let p1 = (-beta).exp() / (1.0 + (-beta).exp());
        assert!((s.mean - p1).abs() < 1e-15);
        assert!((s.variance - p1 * (1.0 - p1)).abs() < 1e-15);
    }

    #[test]
    fn huge_beta_does_not_overflow() {
        let s = level_sum(&[-10.0, -9.0, 5.0], 1e3);
        assert!((s.ln_z - 1e4).abs() < 1e-9);
        assert!((s.mean + 10.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut acc = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }
}
