//! Sum of the Boltzmann factor over `n = 0..=N` through
//! `∫₀^{N+1} f + ½[f(0) − f(N+1)]`, with optional Euler–Maclaurin terms.

use super::{Diagnostics, Strategy, ThermoInput, ThermoResult};
use crate::oscillator::energy_quadratic;
use crate::specfun::{central_diff, default_step, integrate, DerivativeOrder, QuadratureSpec};
use crate::Result;

/// `B_{2j}` for `j = 1..=20`.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// How many Euler–Maclaurin correction terms follow the two-term formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrectionOrder {
    /// The two-term formula alone.
    FirstOrder,
    /// Exactly this many Bernoulli terms (at most 20).
    Fixed(usize),
    /// Add terms while they keep shrinking, up to 20.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PoissonOptions {
    pub corrections: CorrectionOrder,
}

/// Result of summing one `f` over `0..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonSum {
    pub value: f64,
    pub integral: f64,
    pub first_order: f64,
    pub terms_used: usize,
}

/// Two-term formula plus Bernoulli corrections for an arbitrary `f`.
///
/// `odd_derivative(j, x)` must return `f^{(2j−1)}(x)`.
pub fn euler_maclaurin<F, D>(
    f: F,
    odd_derivative: D,
    n_max: u32,
    corrections: CorrectionOrder,
) -> Result<PoissonSum>
where
    F: Fn(f64) -> f64,
    D: Fn(usize, f64) -> f64,
{
    let end = n_max as f64 + 1.0;
    let spec = QuadratureSpec::on(0.0, end)?.with_tolerances(1e-14, 1e-300)?;
    let integral = integrate(&f, &spec)?.value;
    let first_order = integral + 0.5 * (f(0.0) - f(end));
    let limit = match corrections {
        CorrectionOrder::FirstOrder => 0,
        CorrectionOrder::Fixed(n) => n.min(BERNOULLI_EVEN.len()),
        CorrectionOrder::Auto => BERNOULLI_EVEN.len(),
    };
    let mut value = first_order;
    let mut factorial = 1.0;
    let mut previous = f64::INFINITY;
    let mut terms_used = 0;
    for j in 1..=limit {
        factorial *= ((2 * j - 1) * (2 * j)) as f64;
        let term = BERNOULLI_EVEN[j - 1] / factorial * (odd_derivative(j, end) - odd_derivative(j, 0.0));
        if corrections == CorrectionOrder::Auto {
            if term.abs() >= previous {
                break;
            }
            previous = term.abs();
        }
        value += term;
        terms_used = j;
        if corrections == CorrectionOrder::Auto && term.abs() <= 1e-17 * value.abs() {
            break;
        }
    }
    Ok(PoissonSum { value, integral, first_order, terms_used })
}

/// Derivatives `f, f′, …, f^{(order)}` of `exp(g)` with `g` quadratic,
/// from `f^{(j+1)} = g′ f^{(j)} + j g″ f^{(j−1)}`.
fn exp_quadratic_derivatives(f0: f64, g1: f64, g2: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(f0);
    if order >= 1 {
        out.push(g1 * f0);
    }
    for j in 1..order {
        let next = g1 * out[j] + j as f64 * g2 * out[j - 1];
        out.push(next);
    }
    out
}

/// `ln Σ_{n=0}^{N} exp(−β E_n)` via the summation formula, with the
/// two-term value alongside.
pub(crate) fn ln_z_poisson(input: &ThermoInput, beta: f64) -> Result<(f64, PoissonSum)> {
    let (c0, c1, c2) = energy_quadratic(&input.params, input.m);
    // f(x) = exp(−β(E(x) − c0)) so that f(0) = 1
    let g = move |x: f64| -beta * x * (c1 + c2 * x);
    let g1 = move |x: f64| -beta * (c1 + 2.0 * c2 * x);
    let g2 = -2.0 * beta * c2;
    let f = move |x: f64| g(x).exp();
    let deriv = move |j: usize, x: f64| exp_quadratic_derivatives(f(x), g1(x), g2, 2 * j - 1)[2 * j - 1];
    let sum = euler_maclaurin(f, deriv, input.truncation, input.poisson.corrections)?;
    Ok((sum.value.ln() - beta * c0, sum))
}

pub(crate) fn evaluate_poisson(input: &ThermoInput) -> Result<ThermoResult> {
    let beta = input.beta;
    let kb = input.params.kb();
    let (ln_z, sum) = ln_z_poisson(input, beta)?;
    let h1 = default_step(beta, DerivativeOrder::First);
    let h2 = default_step(beta, DerivativeOrder::Second);
    let ln_z_at = |b: f64| ln_z_poisson(input, b).map(|r| r.0).unwrap_or(f64::NAN);
    let free = |b: f64| -ln_z_at(b) / b;
    let u = -central_diff(ln_z_at, beta, DerivativeOrder::First, h1);
    let c = kb * beta * beta * central_diff(ln_z_at, beta, DerivativeOrder::Second, h2);
    let s = kb * beta * beta * central_diff(free, beta, DerivativeOrder::First, h1);
    let (c0, ..) = energy_quadratic(&input.params, input.m);
    Ok(ThermoResult::assemble(
        input,
        ln_z,
        u,
        c,
        s,
        Diagnostics {
            strategy: Strategy::PoissonPipeline,
            derivative_steps: Some((h1, h2)),
            poisson_first_order_z: Some(sum.first_order * (-beta * c0).exp()),
            correction_terms: Some(sum.terms_used),
            ..Default::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_is_exact() {
        let s = euler_maclaurin(|_| 2.0, |_, _| 0.0, 9, CorrectionOrder::FirstOrder).unwrap();
        assert!((s.value - 20.0).abs() < 1e-13);
    }

    #[test]
    fn corrections_fix_the_exponential_sum() {
        let a = 0.8;
        let exact = (1.0 - (-a * 31.0f64).exp()) / (1.0 - (-a).exp());
        let deriv = |j: usize, x: f64| (-a).powi(2 * j as i32 - 1) * (-a * x).exp();
        let first = euler_maclaurin(|x| (-a * x).exp(), deriv, 30, CorrectionOrder::FirstOrder).unwrap();
        let full = euler_maclaurin(|x| (-a * x).exp(), deriv, 30, CorrectionOrder::Auto).unwrap();
        assert!(((first.value - exact) / exact).abs() > 1e-2);
        assert!(((full.value - exact) / exact).abs() < 1e-12);
        assert_eq!(full.first_order, first.value);
    }

    #[test]
    fn derivative_recurrence() {
        // exp(x²): derivatives at x = 1 are e·(1, 2, 6, 20)
        let d = exp_quadratic_derivatives(1f64.exp(), 2.0, 2.0, 3);
        let e = 1f64.exp();
        for (got, want) in d.iter().zip([e, 2.0 * e, 6.0 * e, 20.0 * e]) {
            assert!((got - want).abs() < 1e-13 * want);
        }
    }
}
