//! The two-dimensional oscillator with mass `m(r) = λ / (1 + δ² r²)`.
//!
//! Parameters are `(α, k, λ)` with `δ² = k λ` derived. The spectrum and all
//! thermodynamics depend on `(α, k)` only; `λ` enters the mass profile and
//! the wavefunctions.

mod wavefunction;

pub use wavefunction::{
    ode_residual, total_wavefunction, ExponentSign, Measure, RadialProfile, RadialWavefunction,
};

use crate::nu::{find_roots, NUProblem};
use crate::{Error, Result};

/// Whether the parameters lie in the regime where the spectrum is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `k < 0`.
    Physical,
    /// `k ≥ 0`: evaluation is allowed but carries no physical claim.
    Exploratory,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    alpha: f64,
    k: f64,
    lambda: f64,
    kb: f64,
}

fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { field, reason: format!("{value} is not finite") })
    }
}

impl SystemParams {
    /// `alpha > 0`, `lambda ≠ 0`, all finite. `k_B` defaults to 1.
    pub fn new(alpha: f64, k: f64, lambda: f64) -> Result<Self> {
        finite("alpha", alpha)?;
        finite("k", k)?;
        finite("lambda", lambda)?;
        if alpha <= 0.0 {
            return Err(Error::InvalidParameter { field: "alpha", reason: format!("{alpha} must be > 0") });
        }
        if lambda == 0.0 {
            return Err(Error::InvalidParameter { field: "lambda", reason: "must be non-zero".into() });
        }
        Ok(SystemParams { alpha, k, lambda, kb: 1.0 })
    }

    /// Build from `δ²` instead of `k`.
    pub fn from_delta_sq(alpha: f64, delta_sq: f64, lambda: f64) -> Result<Self> {
        finite("delta_sq", delta_sq)?;
        if lambda == 0.0 {
            return Err(Error::InvalidParameter { field: "lambda", reason: "must be non-zero".into() });
        }
        Self::new(alpha, delta_sq / lambda, lambda)
    }

    pub fn with_kb(mut self, kb: f64) -> Result<Self> {
        finite("kb", kb)?;
        if kb <= 0.0 {
            return Err(Error::InvalidParameter { field: "kb", reason: format!("{kb} must be > 0") });
        }
        self.kb = kb;
        Ok(self)
    }

    pub fn with_k(self, k: f64) -> Result<Self> {
        Self::new(self.alpha, k, self.lambda)?.with_kb(self.kb)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    pub fn delta_sq(&self) -> f64 {
        self.k * self.lambda
    }

    /// `√(α² + k²)`.
    pub fn frequency(&self) -> f64 {
        self.alpha.hypot(self.k)
    }

    pub fn regime(&self) -> Regime {
        if self.k < 0.0 {
            Regime::Physical
        } else {
            Regime::Exploratory
        }
    }

    pub fn require_physical(&self) -> Result<()> {
        match self.regime() {
            Regime::Physical => Ok(()),
            Regime::Exploratory => Err(Error::NonPhysical { k: self.k }),
        }
    }

    /// Edge of the radial domain: `1/√(−δ²)` for `δ² < 0`, otherwise `+∞`.
    pub fn r_max(&self) -> f64 {
        let d = self.delta_sq();
        if d < 0.0 {
            1.0 / (-d).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Jacobi `b` parameter of the radial solution, `√(1 + α²/k²)`.
    pub fn jacobi_b(&self) -> f64 {
        (1.0 + (self.alpha / self.k).powi(2)).sqrt()
    }

    pub fn energy(&self, n_r: u32, m: i32) -> f64 {
        energy(self, n_r, m)
    }

    pub fn mass(&self, r: f64) -> Result<f64> {
        mass(self, r)
    }
}

/// Closed-form level `E(n_r, m) = (2n_r+|m|+1)√(α²+k²) − k[2n_r² + m²/2 + (2n_r+1)(|m|+1)]`.
pub fn energy(params: &SystemParams, n_r: u32, m: i32) -> f64 {
    let (c0, c1, c2) = energy_quadratic(params, m);
    let n = n_r as f64;
    c0 + n * (c1 + n * c2)
}

/// Coefficients `(c0, c1, c2)` of `E(x) = c0 + c1 x + c2 x²`, the spectrum
/// continued to real `x` at fixed `m`.
pub fn energy_quadratic(params: &SystemParams, m: i32) -> (f64, f64, f64) {
    let s = params.frequency();
    let k = params.k;
    let am = m.unsigned_abs() as f64;
    let c0 = (am + 1.0) * s - k * (0.5 * am * am + am + 1.0);
    let c1 = 2.0 * s - 2.0 * k * (am + 1.0);
    let c2 = -2.0 * k;
    (c0, c1, c2)
}

pub fn mass(params: &SystemParams, r: f64) -> Result<f64> {
    let r_max = params.r_max();
    if !(r >= 0.0 && r < r_max) {
        return Err(Error::Domain { r, r_max });
    }
    Ok(params.lambda / (1.0 + params.delta_sq() * r * r))
}

/// The parametric NU problem for angular number `m` at trial energy `e`,
/// under `z = −δ² r²`.
pub fn nu_instance(params: &SystemParams, m: i32, e: f64) -> Result<NUProblem> {
    if params.delta_sq() == 0.0 {
        return Err(Error::DegenerateNonlinearity);
    }
    let k = params.k;
    let m2 = (m as f64).powi(2);
    let mu = e / (2.0 * k) - params.alpha.powi(2) / (4.0 * k * k);
    let gamma = 0.25 * m2 - e / (2.0 * k);
    let omega = 0.25 * m2;
    Ok(NUProblem::new(1.0, 1.0, 1.0, -mu, gamma, omega)?)
}

/// Quantization residual of level `n_r` as a function of trial energy.
pub fn quantization_residual_at(params: &SystemParams, n_r: u32, m: i32, e: f64) -> Result<f64> {
    let c = nu_instance(params, m, e)?.coefficients()?;
    Ok(c.quantization_residual(n_r))
}

/// Eigenvalue of level `(n_r, m)` found by bracketing the zero of the
/// quantization residual, without using the closed-form spectrum.
pub fn solve_energy(params: &SystemParams, n_r: u32, m: i32) -> Result<f64> {
    if params.delta_sq() == 0.0 {
        return Err(Error::DegenerateNonlinearity);
    }
    let s = params.frequency();
    let step = 0.1 * s;
    let residual = |e: f64| quantization_residual_at(params, n_r, m, e).unwrap_or(f64::NAN);
    let mut inner = 0.0;
    let mut outer = 10.0 * s;
    for _ in 0..60 {
        let mut roots = find_roots(residual, inner, outer, step, 0.0);
        roots.extend(find_roots(residual, -outer, -inner, step, 0.0));
        if let Some(e) = roots.first() {
            return Ok(*e);
        }
        inner = outer;
        outer *= 2.0;
    }
    Err(Error::NonNormalizable { n_r, m, detail: "no root of the quantization condition".into() })
}

/// Quantum numbers together with the energy they are paired with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    n_r: u32,
    m: i32,
    energy: f64,
    on_shell: bool,
}

impl QuantumState {
    pub fn new(params: &SystemParams, n_r: u32, m: i32) -> Self {
        QuantumState { n_r, m, energy: energy(params, n_r, m), on_shell: true }
    }

    /// A state carrying an arbitrary trial energy, for residual sensitivity checks.
    pub fn off_shell(n_r: u32, m: i32, energy: f64) -> Self {
        QuantumState { n_r, m, energy, on_shell: false }
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn is_on_shell(&self) -> bool {
        self.on_shell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, k: f64) -> SystemParams {
        SystemParams::new(alpha, k, 1.0).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        for n in 0..5 {
            for m in -3..=3 {
                assert_eq!(energy(&p(1.0, 0.0), n, m), (2 * n as i32 + m.abs() + 1) as f64);
            }
        }
        assert!((energy(&p(1.0, -0.5), 0, 0) - 1.618_033_988_7).abs() < 1e-10);
        assert!((energy(&p(1.0, -1.0), 1, 2) - (5.0 * 2f64.sqrt() + 13.0)).abs() < 1e-12);
    }

    #[test]
    fn mass_profile() {
        let q = SystemParams::from_delta_sq(1.0, -0.25, 1.0).unwrap();
        assert_eq!(q.mass(0.0).unwrap(), 1.0);
        assert!((q.mass(1.0).unwrap() - 1.0 / 0.75).abs() < 1e-15);
        assert!(matches!(q.mass(2.0), Err(Error::Domain { .. })));
        let q = SystemParams::from_delta_sq(1.0, 0.5, 1.0).unwrap();
        assert!(q.mass(1e8).unwrap() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(SystemParams::new(0.0, -1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, f64::NAN, 1.0).is_err());
        assert_eq!(p(1.0, 0.2).regime(), Regime::Exploratory);
        assert!(matches!(p(1.0, 0.2).require_physical(), Err(Error::NonPhysical { .. })));
        let q = SystemParams::new(1.0, -0.5, 3.0).unwrap();
        assert_eq!(q.delta_sq(), -1.5);
        assert_eq!(q.delta_sq() / q.lambda(), q.k());
    }

    #[test]
    fn nu_instance_examples() {
        let q = p(1.0, -1.0);
        let pr = nu_instance(&q, 0, 0.0).unwrap();
        assert_eq!(pr.eps3, 0.0);
        assert_eq!(pr.eps1, 0.25);
        assert_eq!(nu_instance(&q, 2, 7.3).unwrap().eps3, 1.0);
        let c = nu_instance(&q, 0, energy(&q, 0, 0)).unwrap().coefficients().unwrap();
        assert_eq!((c.a8, c.a10), (0.0, 1.0));
        assert!((c.tau_prime() + 2.0 + 2f64.sqrt()).abs() < 1e-14);
        let c = nu_instance(&q, 1, energy(&q, 0, 1)).unwrap().coefficients().unwrap();
        let s = c.solution();
        assert!((s.jacobi_a - 1.0).abs() < 1e-15);
        assert!((s.jacobi_b - q.jacobi_b()).abs() < 1e-14);
        assert!(matches!(nu_instance(&p(1.0, 0.0), 0, 1.0), Err(Error::DegenerateNonlinearity)));
    }

    #[test]
    fn residual_vanishes_on_spectrum_only() {
        let q = p(1.0, -0.5);
        for n in 0..=5 {
            for m in -3..=3 {
                let e = energy(&q, n, m);
                assert!(quantization_residual_at(&q, n, m, e).unwrap().abs() <= 1e-9);
                assert!(quantization_residual_at(&q, n, m, e + 0.1).unwrap().abs() > 1e-3);
            }
        }
    }

    #[test]
    fn root_scan_reproduces_closed_form() {
        for (alpha, k) in [(1.0, -0.5), (2.0, -0.1), (1.0, -1.0)] {
            let q = p(alpha, k);
            for n in 0..4 {
                for m in [-2, 0, 3] {
                    let e = solve_energy(&q, n, m).unwrap();
                    let want = energy(&q, n, m);
                    assert!((e - want).abs() <= 1e-10 * want.abs(), "{alpha} {k} {n} {m}: {e} vs {want}");
                }
            }
        }
    }
}
