use num_complex::Complex64;

use super::{nu_instance, QuantumState, SystemParams};
use crate::specfun::{
    central_diff, integrate, integrate_to_endpoint, jacobi_p, DerivativeOrder, JacobiParams,
    QuadratureSpec,
};
use crate::{Error, Result};

/// Endpoint inset used when integrating up to a finite `r_max`.
const ENDPOINT_INSET: f64 = 1e-10;
/// Largest relative ODE residual accepted when choosing the exponent sign.
const SIGN_RESIDUAL_TOL: f64 = 1e-6;

/// Inner product used for normalization and overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Measure {
    /// `r dr`.
    Flat,
    /// `r m(r)/λ dr = r dr / (1 + δ² r²)`, the weight that makes the radial
    /// operator self-adjoint.
    #[default]
    MassWeighted,
}

impl Measure {
    fn weight(self, delta_sq: f64, r: f64) -> f64 {
        match self {
            Measure::Flat => r,
            Measure::MassWeighted => r / (1.0 + delta_sq * r * r),
        }
    }
}

/// Sign in the exponent `(1 ± b)/2` of the `(1 + δ² r²)` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentSign {
    Plus,
    Minus,
}

/// Unnormalized radial profile
/// `U(r) = |δ² r²|^{|m|/2} (1 + δ² r²)^{(1 ± b)/2} P_n^{(|m|, b)}(1 + 2 δ² r²)`
/// with `b = √(1 + α²/k²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    params: SystemParams,
    n_r: u32,
    m: i32,
    sign: ExponentSign,
    z_power: f64,
    edge_power: f64,
    jacobi: JacobiParams,
}

impl RadialProfile {
    /// Profile assembled from the NU solution of level `(n_r, m)`.
    pub fn new(params: &SystemParams, n_r: u32, m: i32, sign: ExponentSign) -> Result<Self> {
        let e = params.energy(n_r, m);
        let sol = nu_instance(params, m, e)?.coefficients()?.solution();
        let edge_power = match sign {
            ExponentSign::Plus => sol.phi_exponents.1,
            ExponentSign::Minus => 1.0 - sol.phi_exponents.1,
        };
        Ok(RadialProfile {
            params: *params,
            n_r,
            m,
            sign,
            z_power: sol.phi_exponents.0,
            edge_power,
            jacobi: sol.jacobi(n_r as usize),
        })
    }

    /// The sign whose profile has the smaller residual at the closed-form level.
    pub fn matching(params: &SystemParams, n_r: u32, m: i32) -> Result<Self> {
        let e = params.energy(n_r, m);
        let samples = interior_points(params, 9);
        let mut best: Option<(f64, RadialProfile)> = None;
        for sign in [ExponentSign::Plus, ExponentSign::Minus] {
            let profile = RadialProfile::new(params, n_r, m, sign)?;
            let mut worst = 0.0f64;
            for &r in &samples {
                worst = worst.max(profile.ode_residual(e, r)?);
            }
            if best.is_none_or(|(w, _)| worst < w) {
                best = Some((worst, profile));
            }
        }
        Ok(best.expect("two candidates").1)
    }

    pub fn sign(&self) -> ExponentSign {
        self.sign
    }

    pub fn jacobi(&self) -> JacobiParams {
        self.jacobi
    }

    /// `U(r)` without domain checks.
    pub fn value_unchecked(&self, r: f64) -> f64 {
        let z = -self.params.delta_sq() * r * r;
        let y = jacobi_p(&self.jacobi, 1.0 - 2.0 * z).unwrap_or(f64::NAN);
        z.abs().powf(self.z_power) * (1.0 - z).abs().powf(self.edge_power) * y
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        check_domain(&self.params, r)?;
        Ok(self.value_unchecked(r))
    }

    /// Relative residual of the radial equation at trial energy `e`:
    /// `|U″ + U′/r + Q U|` over `max(|U|·Σ|Q terms|, |U″|, |U′|/r)`, with
    /// `Q = 2λE/(1+δ²r²) − m²/(r²(1+δ²r²)) − α²λ²r²/(1+δ²r²)²`.
    pub fn ode_residual(&self, e: f64, r: f64) -> Result<f64> {
        let p = &self.params;
        let r_max = p.r_max();
        if !(r > 0.0 && r < r_max) {
            return Err(Error::Domain { r, r_max });
        }
        let lam = p.lambda();
        let g = 1.0 + p.delta_sq() * r * r;
        let m2 = (self.m as f64).powi(2);
        let t_energy = 2.0 * lam * e / g;
        let t_centrifugal = -m2 / (r * r * g);
        let t_confining = -(p.alpha() * lam * r).powi(2) / (g * g);
        let coef_scale = t_energy.abs() + t_centrifugal.abs() + t_confining.abs();
        let mut length = r.min(r_max - r);
        if coef_scale > 0.0 {
            length = length.min(1.0 / coef_scale.sqrt());
        }
        let h = 8e-3 * length;
        let u = self.value_unchecked(r);
        let f = |x: f64| self.value_unchecked(x);
        let d1 = central_diff(f, r, DerivativeOrder::First, h);
        let d2 = central_diff(f, r, DerivativeOrder::Second, h);
        let q = t_energy + t_centrifugal + t_confining;
        let residual = d2 + d1 / r + q * u;
        let scale = (coef_scale * u.abs()).max(d2.abs()).max(d1.abs() / r);
        Ok(if scale > 0.0 { residual.abs() / scale } else { 0.0 })
    }

    /// `∫ U(r)² w(r) dr` over the radial domain.
    fn norm_sq(&self, measure: Measure) -> std::result::Result<f64, String> {
        let other = *self;
        overlap_integral(self, &other, measure)
    }
}

fn check_domain(params: &SystemParams, r: f64) -> Result<()> {
    let r_max = params.r_max();
    if r >= 0.0 && r < r_max {
        Ok(())
    } else {
        Err(Error::Domain { r, r_max })
    }
}

fn overlap_integral(a: &RadialProfile, b: &RadialProfile, measure: Measure) -> std::result::Result<f64, String> {
    let p = &a.params;
    let d = p.delta_sq();
    let integrand = |r: f64| a.value_unchecked(r) * b.value_unchecked(r) * measure.weight(d, r);
    let r_max = p.r_max();
    if r_max.is_finite() {
        let spec = QuadratureSpec::on(0.0, r_max).map_err(|e| e.to_string())?;
        return integrate_to_endpoint(integrand, &spec, ENDPOINT_INSET)
            .map(|q| q.value)
            .map_err(|e| e.to_string());
    }
    // Large-r power of the integrand decides convergence on the half line.
    let degree = |w: &RadialProfile| 2.0 * w.z_power + 2.0 * w.edge_power + 2.0 * w.jacobi.n as f64;
    let weight_power = match measure {
        Measure::Flat => 1.0,
        Measure::MassWeighted => -1.0,
    };
    let power = degree(a) + degree(b) + weight_power;
    if power >= -1.0 {
        return Err(format!("integrand grows like r^{power:.3} at infinity"));
    }
    let mapped = |t: f64| {
        let u = 1.0 - t;
        integrand(t / u) / (u * u)
    };
    let spec = QuadratureSpec::on(0.0, 1.0).map_err(|e| e.to_string())?;
    integrate_to_endpoint(mapped, &spec, ENDPOINT_INSET).map(|q| q.value).map_err(|e| e.to_string())
}

/// Sample radii spread over the interior of the domain, avoiding both ends.
pub(crate) fn interior_points(params: &SystemParams, count: usize) -> Vec<f64> {
    let r_max = params.r_max();
    let span = if r_max.is_finite() { r_max } else { 4.0 / params.delta_sq().abs().sqrt() };
    (0..count)
        .map(|i| {
            let t = if count == 1 { 0.5 } else { i as f64 / (count - 1) as f64 };
            span * (0.02 + 0.96 * t)
        })
        .collect()
}

/// Normalized radial wavefunction of an eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWavefunction {
    state: QuantumState,
    profile: RadialProfile,
    measure: Measure,
    normalization: f64,
    domain_max: f64,
}

impl RadialWavefunction {
    /// Normalized in the default (mass-weighted) measure.
    pub fn new(params: &SystemParams, state: QuantumState) -> Result<Self> {
        Self::with_measure(params, state, Measure::default())
    }

    /// Tries both exponent signs and keeps the first whose profile satisfies
    /// the radial equation at `state.energy()` and has a finite norm.
    pub fn with_measure(params: &SystemParams, state: QuantumState, measure: Measure) -> Result<Self> {
        let (n_r, m) = (state.n_r(), state.m());
        let mut reasons = Vec::new();
        let samples = interior_points(params, 9);
        for sign in [ExponentSign::Plus, ExponentSign::Minus] {
            let profile = RadialProfile::new(params, n_r, m, sign)?;
            let mut worst = 0.0f64;
            for &r in &samples {
                worst = worst.max(profile.ode_residual(state.energy(), r)?);
            }
            if !(worst <= SIGN_RESIDUAL_TOL) {
                reasons.push(format!("{sign:?}: radial equation residual {worst:.2e}"));
                continue;
            }
            match profile.norm_sq(measure) {
                Ok(n2) if n2.is_finite() && n2 > 0.0 => {
                    return Ok(RadialWavefunction {
                        state,
                        profile,
                        measure,
                        normalization: 1.0 / n2.sqrt(),
                        domain_max: params.r_max(),
                    });
                }
                Ok(n2) => reasons.push(format!("{sign:?}: norm {n2:e}")),
                Err(e) => reasons.push(format!("{sign:?}: {e}")),
            }
        }
        Err(Error::NonNormalizable { n_r, m, detail: reasons.join("; ") })
    }

    pub fn state(&self) -> QuantumState {
        self.state
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn sign(&self) -> ExponentSign {
        self.profile.sign
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.normalization * self.profile.value(r)?)
    }

    /// `∫ U_self U_other w(r) dr` in this wavefunction's measure.
    pub fn overlap(&self, other: &RadialWavefunction) -> Result<f64> {
        self.overlap_in(other, self.measure)
    }

    /// Overlap in an explicit measure, regardless of how either factor was normalized.
    pub fn overlap_in(&self, other: &RadialWavefunction, measure: Measure) -> Result<f64> {
        if self.profile.params != other.profile.params {
            return Err(Error::InvalidParameter {
                field: "params",
                reason: "overlap of wavefunctions with different parameters".into(),
            });
        }
        let raw = overlap_integral(&self.profile, &other.profile, measure).map_err(|detail| {
            Error::NonNormalizable { n_r: other.state.n_r(), m: other.state.m(), detail }
        })?;
        Ok(raw * self.normalization * other.normalization)
    }
}

/// Radial-equation residual at `state.energy()` of the profile of
/// `(n_r, m)`. The exponent sign is the one that solves the equation at the
/// closed-form level, so an off-shell energy does not change the profile.
pub fn ode_residual(params: &SystemParams, state: &QuantumState, r: f64) -> Result<f64> {
    RadialProfile::matching(params, state.n_r(), state.m())?.ode_residual(state.energy(), r)
}

/// `Ψ(r, θ) = U(r) e^{−imθ} / √(2π)`.
pub fn total_wavefunction(wave: &RadialWavefunction, r: f64, theta: f64) -> Result<Complex64> {
    let u = wave.value(r)?;
    let m = wave.state.m() as f64;
    Ok(Complex64::from_polar(u / (2.0 * std::f64::consts::PI).sqrt(), -m * theta))
}

impl RadialWavefunction {
    /// `∫∫ |Ψ|² w(r) dr dθ` by nested quadrature.
    pub fn total_norm(&self) -> Result<f64> {
        let d = self.profile.params.delta_sq();
        let r_max = self.domain_max;
        let radial = |theta: f64| -> f64 {
            let f = |r: f64| {
                total_wavefunction(self, r, theta).map(|psi| psi.norm_sqr()).unwrap_or(0.0)
                    * self.measure.weight(d, r)
            };
            if r_max.is_finite() {
                let spec = QuadratureSpec::on(0.0, r_max).expect("valid interval");
                integrate_to_endpoint(f, &spec, ENDPOINT_INSET).map(|q| q.value).unwrap_or(f64::NAN)
            } else {
                let g = |t: f64| f(t / (1.0 - t)) / (1.0 - t).powi(2);
                let spec = QuadratureSpec::on(0.0, 1.0).expect("valid interval");
                integrate_to_endpoint(g, &spec, ENDPOINT_INSET).map(|q| q.value).unwrap_or(f64::NAN)
            }
        };
        let spec = QuadratureSpec::on(0.0, 2.0 * std::f64::consts::PI)?.with_tolerances(1e-10, 1e-13)?;
        Ok(integrate(radial, &spec)?.value)
    }
}
