//! Closed-form partition function obtained by first-order Poisson summation
//! of the quadratic spectrum, with its analytic `β` derivatives.

use super::{Diagnostics, PaperDiagnostics, Strategy, ThermoInput, ThermoResult, Variant};
use crate::specfun::erfcx;
use crate::{Error, Result};

/// `ã, b̃, c̃, d̃, Ω, η, ϑ` for one `(k, m, N, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperZCoefficients {
    /// `k(|m|+1) − √(α²+k²)`.
    pub a_t: f64,
    /// `−(3 + |m| + 2N) k + √(α²+k²)`.
    pub b_t: f64,
    /// `E(N+1)`: the continued spectrum one step past the truncation.
    pub c_t: f64,
    /// `|m|√(N²+α²) − N m²/2`, with the bound `N` in place of `λ`.
    pub d_t: f64,
    /// `|m|√(k²+α²) − k m²/2`, which makes `e^{β(ã−d̃)}` the ground-level weight.
    pub d_t_corrected: f64,
    /// `Ω`; equals minus the Gaussian integral of the Boltzmann factor over `[0, N+1]`.
    pub omega: f64,
    pub eta: f64,
    pub theta_v: f64,
}

pub fn paper_z_coefficients(input: &ThermoInput) -> Result<PaperZCoefficients> {
    let t = Terms::new(input)?;
    Ok(PaperZCoefficients {
        a_t: t.a,
        b_t: t.b,
        c_t: t.c,
        d_t: t.d_verbatim,
        d_t_corrected: t.d_corrected,
        omega: t.omega_scaled * (-t.shift).exp(),
        eta: t.eta,
        theta_v: t.theta,
    })
}

/// Every exponential is carried multiplied by `e^{shift}`, `shift = β E₀`.
struct Terms {
    beta: f64,
    alpha: f64,
    k: f64,
    kb: f64,
    a: f64,
    b: f64,
    c: f64,
    d_verbatim: f64,
    d_corrected: f64,
    eta: f64,
    theta: f64,
    shift: f64,
    omega_scaled: f64,
    /// `e^{β(ã²−α²)/(2k)}` and `e^{β(b̃²−α²)/(2k)}`, scaled.
    ga: f64,
    gb: f64,
}

impl Terms {
    fn new(input: &ThermoInput) -> Result<Self> {
        let p = &input.params;
        p.require_physical()?;
        let (alpha, k, beta) = (p.alpha(), p.k(), input.beta);
        let s = p.frequency();
        let am = input.m.unsigned_abs() as f64;
        let m2 = am * am;
        let n = input.truncation as f64;
        let a = k * (am + 1.0) - s;
        let b = -(3.0 + am + 2.0 * n) * k + s;
        let c = (2.0 * n + am + 3.0) * s - k * (2.0 * n * n + 0.5 * m2 + 6.0 * n + 5.0 + 2.0 * n * am + 3.0 * am);
        let d_verbatim = am * n.hypot(alpha) - 0.5 * n * m2;
        let d_corrected = am * s - 0.5 * k * m2;
        let eta = -beta * a * a / (2.0 * k);
        let theta = -beta * b * b / (2.0 * k);
        let shift = beta * (d_corrected - a);
        let ga = (beta * (a * a - alpha * alpha) / (2.0 * k) + shift).exp();
        let gb = (beta * (b * b - alpha * alpha) / (2.0 * k) + shift).exp();
        // e^{−α²β/(2k)} (erf √ϑ − erf √η) rewritten through erfcx to avoid cancellation
        let pref = (std::f64::consts::PI * k.abs() / (2.0 * beta)).sqrt() / (2.0 * k);
        let omega_scaled = pref * (ga * erfcx(eta.sqrt()) - gb * erfcx(theta.sqrt()));
        Ok(Terms {
            beta,
            alpha,
            k,
            kb: p.kb(),
            a,
            b,
            c,
            d_verbatim,
            d_corrected,
            eta,
            theta,
            shift,
            omega_scaled,
            ga,
            gb,
        })
    }

    fn ex(&self, x: f64) -> f64 {
        (x + self.shift).exp()
    }

    /// Scaled `e^{β(ã−d̃)} − e^{−βc̃} − 2Ω`, i.e. `2Z`.
    fn d_fn(&self, d: f64) -> f64 {
        self.ex(self.beta * (self.a - d)) - self.ex(-self.beta * self.c) - 2.0 * self.omega_scaled
    }

    /// Scaled `Λ`, with `pair` the exponent coefficient of the leading term.
    fn lambda_fn(&self, pair: f64) -> f64 {
        let (beta, k, a2) = (self.beta, self.k, self.alpha * self.alpha);
        pair * self.ex(beta * pair) + self.c * self.ex(-beta * self.c) + (a2 * beta + k) * self.omega_scaled / (k * beta)
            - (self.a * self.ga + self.b * self.gb) / (2.0 * k * beta)
    }

    /// Scaled `ε`.
    fn epsilon(&self) -> f64 {
        let (beta, k, a2) = (self.beta, self.k, self.alpha * self.alpha);
        let tail = |x: f64, g: f64| x * g * (x * x * beta - 2.0 * a2 * beta - 3.0 * k);
        let varsigma = tail(self.a, self.ga) + tail(self.b, self.gb);
        -(a2 * a2 * beta * beta + 2.0 * a2 * beta * k + 3.0 * k * k) * self.omega_scaled / (2.0 * k * k * beta * beta)
            - varsigma / (4.0 * k * k * beta * beta)
    }

    fn evaluate(&self, variant: Variant) -> PaperValues {
        let beta = self.beta;
        let (d, pair) = match variant {
            Variant::Verbatim => (self.d_verbatim, self.a - self.b),
            Variant::Corrected => (self.d_corrected, self.a - self.d_corrected),
        };
        let dd = self.d_fn(d);
        let lam = self.lambda_fn(pair);
        let second = pair * pair * self.ex(beta * pair) - self.c * self.c * self.ex(-beta * self.c);
        let eps = self.epsilon();
        let c = match variant {
            Variant::Verbatim => 0.5 * self.kb * beta * beta * ((second - eps) / dd - 2.0 * (lam / dd).powi(2)),
            Variant::Corrected => self.kb * beta * beta * ((second + eps) / dd - (lam / dd).powi(2)),
        };
        let ln_z = if dd > 0.0 { (0.5 * dd).ln() - self.shift } else { f64::NAN };
        let alt_pair = match variant {
            Variant::Verbatim => self.a - d,
            Variant::Corrected => self.a - self.b,
        };
        PaperValues {
            z: 0.5 * dd * (-self.shift).exp(),
            ln_z,
            u: -lam / dd,
            c,
            f: -ln_z / beta,
            s: self.kb * (ln_z - beta * lam / dd),
            u_alternate_pairing: -self.lambda_fn(alt_pair) / dd,
        }
    }
}

/// Closed-form values for one variant. `ln_z` and the derived quantities are
/// NaN when `z ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperValues {
    pub z: f64,
    pub ln_z: f64,
    pub u: f64,
    pub c: f64,
    pub f: f64,
    pub s: f64,
    /// `U` with the other `Λ` pairing (`ã−b̃` against `ã−d̃`).
    pub u_alternate_pairing: f64,
}

/// Both variants of the closed form at one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperPartition {
    pub coefficients: PaperZCoefficients,
    pub verbatim: PaperValues,
    pub corrected: PaperValues,
}

impl PaperPartition {
    pub fn get(&self, variant: Variant) -> &PaperValues {
        match variant {
            Variant::Verbatim => &self.verbatim,
            Variant::Corrected => &self.corrected,
        }
    }
}

pub fn partition_paper(input: &ThermoInput) -> Result<PaperPartition> {
    let t = Terms::new(input)?;
    Ok(PaperPartition {
        coefficients: paper_z_coefficients(input)?,
        verbatim: t.evaluate(Variant::Verbatim),
        corrected: t.evaluate(Variant::Corrected),
    })
}

pub(crate) fn evaluate_paper(input: &ThermoInput) -> Result<ThermoResult> {
    let all = partition_paper(input)?;
    let v = all.get(input.variant);
    if !(v.z > 0.0) {
        return Err(Error::NonPositiveZ { z: v.z });
    }
    let diagnostics = Diagnostics {
        strategy: Strategy::PaperClosedForm,
        variant: Some(input.variant),
        paper: Some(PaperDiagnostics {
            z_verbatim: all.verbatim.z,
            z_corrected: all.corrected.z,
            u_alternate_pairing: v.u_alternate_pairing,
        }),
        negative_entropy: v.s < 0.0,
        ..Default::default()
    };
    Ok(ThermoResult::assemble(input, v.ln_z, v.u, v.c, v.s, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{central_diff, DerivativeOrder};
    use crate::SystemParams;

    fn input(k: f64, m: i32, beta: f64) -> ThermoInput {
        ThermoInput::new(SystemParams::new(1.0, k, 1.0).unwrap(), m, beta).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = paper_z_coefficients(&input(-0.5, 1, 1.0)).unwrap();
        assert!((c.a_t + 2.118_033_988_7).abs() < 1e-10);
        assert!(c.eta >= 0.0 && c.theta_v >= 0.0);
        let c0 = paper_z_coefficients(&input(-0.5, 0, 1.0)).unwrap();
        assert_eq!((c0.d_t, c0.d_t_corrected), (0.0, 0.0));
        assert!(matches!(paper_z_coefficients(&input(0.2, 0, 1.0)), Err(Error::NonPhysical { .. })));
    }

    #[test]
    fn c_tilde_is_the_next_level() {
        let inp = input(-0.3, 2, 1.0).with_truncation(40).unwrap();
        let c = paper_z_coefficients(&inp).unwrap();
        let e = inp.params.energy(41, 2);
        assert!((c.c_t - e).abs() < 1e-12 * e);
    }

    #[test]
    fn corrected_derivatives_match_finite_differences() {
        for beta in [0.05, 0.1, 0.5, 2.0] {
            let inp = input(-0.3, 1, beta);
            let v = partition_paper(&inp).unwrap().corrected;
            let ln_z = |b: f64| partition_paper(&ThermoInput { beta: b, ..inp }).unwrap().corrected.ln_z;
            let h1 = crate::specfun::default_step(beta, DerivativeOrder::First);
            let h2 = crate::specfun::default_step(beta, DerivativeOrder::Second);
            let u = -central_diff(ln_z, beta, DerivativeOrder::First, h1);
            let c = beta * beta * central_diff(ln_z, beta, DerivativeOrder::Second, h2);
            assert!(((v.u - u) / u).abs() < 1e-6, "U at {beta}: {} vs {u}", v.u);
            assert!(((v.c - c) / c).abs() < 1e-6, "C at {beta}: {} vs {c}", v.c);
        }
    }
}
