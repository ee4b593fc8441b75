//! Nikiforov–Uvarov parametric engine.
//!
//! Works on the parametric equation
//!
//! ```text
//! χ'' + (a1 − a2 z) / (z (1 − a3 z)) χ' + (−ε1 z² + ε2 z − ε3) / (z² (1 − a3 z)²) χ = 0
//! ```
//!
//! and derives the coefficient chain `a4 … a13`, the `κ±` roots, the slope of
//! `τ(z)`, the quantization condition and the solution structure
//! `χ(z) = φ(z) · P_n^{(α, β)}(1 − 2 a3 z)`.

use thiserror::Error;

use crate::specfun::JacobiParams;

/// Negative radicands smaller than this in magnitude are treated as roundoff.
pub const SQRT_CLAMP: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("a3 must be non-zero")]
    ZeroA3,
    #[error("negative radicand {name} = {value:e}")]
    NegativeDiscriminant { name: &'static str, value: f64 },
}

fn checked_sqrt(name: &'static str, value: f64) -> Result<f64, NuError> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value > -SQRT_CLAMP {
        Ok(0.0)
    } else {
        Err(NuError::NegativeDiscriminant { name, value })
    }
}

/// The parametric data `(a1, a2, a3, ε1, ε2, ε3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUProblem {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

impl NUProblem {
    pub fn new(a1: f64, a2: f64, a3: f64, eps1: f64, eps2: f64, eps3: f64) -> Result<Self, NuError> {
        if a3 == 0.0 {
            return Err(NuError::ZeroA3);
        }
        Ok(NUProblem { a1, a2, a3, eps1, eps2, eps3 })
    }

    /// Derive the coefficient chain. See [`NUCoefficients`].
    pub fn coefficients(&self) -> Result<NUCoefficients, NuError> {
        derive_coefficients(self)
    }
}

/// Coefficients `a4 … a13` and the two `κ` roots, together with the problem
/// they were derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUCoefficients {
    pub problem: NUProblem,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
    pub a8: f64,
    pub a9: f64,
    pub a10: f64,
    pub a11: f64,
    pub a12: f64,
    pub a13: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    sqrt_a8: f64,
    sqrt_a9: f64,
}

/// Exponents and Jacobi data of `χ(z) = φ(z) y_n(z)`; no evaluation happens here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUSolution {
    /// `(a12, −a13/a3 − a12)`: powers of `z` and `(1 − a3 z)` in `φ`.
    pub phi_exponents: (f64, f64),
    /// `(a10 − 1, a11/a3 − a10 − 1)`: powers of `z` and `(1 − a3 z)` in `ρ`.
    pub weight_exponents: (f64, f64),
    /// Jacobi parameters of `y_n`; they coincide with the weight exponents.
    pub jacobi_a: f64,
    pub jacobi_b: f64,
    pub a3: f64,
}

pub fn derive_coefficients(p: &NUProblem) -> Result<NUCoefficients, NuError> {
    if p.a3 == 0.0 {
        return Err(NuError::ZeroA3);
    }
    let a4 = 0.5 * (1.0 - p.a1);
    let a5 = 0.5 * (p.a2 - 2.0 * p.a3);
    let a6 = a5 * a5 + p.eps1;
    let a7 = 2.0 * a4 * a5 - p.eps2;
    let a8 = a4 * a4 + p.eps3;
    let a9 = p.a3 * a7 + p.a3 * p.a3 * a8 + a6;
    let sqrt_a8 = checked_sqrt("a8", a8)?;
    let sqrt_a9 = checked_sqrt("a9", a9)?;
    let sqrt_a8a9 = checked_sqrt("a8*a9", a8 * a9)?;
    let a10 = p.a1 + 2.0 * a4 + 2.0 * sqrt_a8;
    let a11 = p.a2 - 2.0 * a5 + 2.0 * (sqrt_a9 + p.a3 * sqrt_a8);
    let a12 = a4 + sqrt_a8;
    let a13 = a5 - (sqrt_a9 + p.a3 * sqrt_a8);
    let kappa_centre = -(a7 + 2.0 * p.a3 * a8);
    Ok(NUCoefficients {
        problem: *p,
        a4,
        a5,
        a6,
        a7,
        a8,
        a9,
        a10,
        a11,
        a12,
        a13,
        kappa_plus: kappa_centre + 2.0 * sqrt_a8a9,
        kappa_minus: kappa_centre - 2.0 * sqrt_a8a9,
        sqrt_a8,
        sqrt_a9,
    })
}

impl NUCoefficients {
    /// Constant slope of `τ(z) = (a1 − a2 z) + 2π(z)` on the `κ₋` branch,
    /// where `π(z) = a4 + a5 z − [(√a9 + a3√a8) z − √a8]`.
    ///
    /// The method is admissible only when this is negative.
    pub fn tau_prime(&self) -> f64 {
        -self.problem.a2 + 2.0 * self.a5 - 2.0 * (self.sqrt_a9 + self.problem.a3 * self.sqrt_a8)
    }

    /// Left-hand side of the quantization condition for degree `n`:
    ///
    /// `a2 n − (2n+1) a5 + n(n−1) a3 + (2n+1)(a3√a8 + √a9) + a7 + 2 a3 a8 + 2√(a8 a9)`.
    pub fn quantization_residual(&self, n: u32) -> f64 {
        let p = &self.problem;
        let nf = n as f64;
        let odd = 2.0 * nf + 1.0;
        p.a2 * nf - odd * self.a5
            + nf * (nf - 1.0) * p.a3
            + odd * (p.a3 * self.sqrt_a8 + self.sqrt_a9)
            + self.a7
            + 2.0 * p.a3 * self.a8
            + 2.0 * self.sqrt_a8 * self.sqrt_a9
    }

    pub fn solution(&self) -> NUSolution {
        build_solution(self)
    }
}

pub fn build_solution(c: &NUCoefficients) -> NUSolution {
    let a3 = c.problem.a3;
    let weight_b = c.a11 / a3 - c.a10 - 1.0;
    NUSolution {
        phi_exponents: (c.a12, -c.a13 / a3 - c.a12),
        weight_exponents: (c.a10 - 1.0, weight_b),
        jacobi_a: c.a10 - 1.0,
        jacobi_b: weight_b,
        a3,
    }
}

impl NUSolution {
    pub fn jacobi(&self, n: usize) -> JacobiParams {
        JacobiParams::new(self.jacobi_a, self.jacobi_b, n)
    }

    /// Argument of the Jacobi polynomial, `1 − 2 a3 z`.
    pub fn jacobi_argument(&self, z: f64) -> f64 {
        1.0 - 2.0 * self.a3 * z
    }

    pub fn phi(&self, z: f64) -> f64 {
        z.powf(self.phi_exponents.0) * (1.0 - self.a3 * z).powf(self.phi_exponents.1)
    }

    pub fn weight(&self, z: f64) -> f64 {
        z.powf(self.weight_exponents.0) * (1.0 - self.a3 * z).powf(self.weight_exponents.1)
    }

    /// `χ(z) = φ(z) y_n(z)` for real `0 < z < 1/a3`.
    pub fn chi(&self, n: usize, z: f64) -> Result<f64, crate::specfun::SpecFunError> {
        let y = crate::specfun::jacobi_p(&self.jacobi(n), self.jacobi_argument(z))?;
        Ok(self.phi(z) * y)
    }
}

/// Roots of `f` in `[lo, hi]`: a sign scan with spacing `step`, each bracket
/// refined by bisection down to `tol` (absolute).
pub fn find_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Vec<f64> {
    assert!(step > 0.0 && lo < hi);
    let mut roots = Vec::new();
    let mut left = lo;
    let mut f_left = f(left);
    while left < hi {
        let right = (left + step).min(hi);
        let f_right = f(right);
        if f_left == 0.0 {
            roots.push(left);
        } else if f_left.signum() != f_right.signum() && f_right != 0.0 {
            roots.push(bisect(&f, left, right, f_left, tol));
        }
        left = right;
        f_left = f_right;
    }
    if f_left == 0.0 {
        roots.push(hi);
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) <= tol || mid <= a || mid >= b {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_instance_coefficients() {
        let c = NUProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap().coefficients().unwrap();
        assert_eq!(c.a4, 0.0);
        assert_eq!(c.a5, -0.5);
        assert_eq!(c.a6, 0.25);
        assert_eq!(c.a7, 0.0);
        assert_eq!(c.a8, 0.0);
        assert_eq!(c.a9, 0.25);
        assert_eq!(c.kappa_plus, 0.0);
        assert_eq!(c.kappa_minus, 0.0);
    }

    #[test]
    fn a1_equal_one_zeroes_a4() {
        for a2 in [-2.0, 0.3, 4.0] {
            let c = NUProblem::new(1.0, a2, 0.7, 0.1, 0.2, 0.3).unwrap().coefficients().unwrap();
            assert_eq!(c.a4, 0.0);
        }
    }

    #[test]
    fn zero_a3_rejected() {
        assert_eq!(NUProblem::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0), Err(NuError::ZeroA3));
    }

    #[test]
    fn negative_radicands_are_structured_errors() {
        let err = NUProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, -0.5).unwrap().coefficients().unwrap_err();
        assert!(matches!(err, NuError::NegativeDiscriminant { name: "a8", .. }));
        // roundoff-sized negatives are clamped
        let c = NUProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, -1e-15).unwrap().coefficients().unwrap();
        assert_eq!(c.a12, 0.0);
    }

    #[test]
    fn vanishing_terms_give_zero_residual() {
        // a1 = 1, a2 = 2 a3 gives a4 = a5 = 0; ε chosen so that a7 = a8 = a9 = 0.
        let c = NUProblem::new(1.0, 2.0, 1.0, 0.0, 0.0, 0.0).unwrap().coefficients().unwrap();
        assert_eq!((c.a5, c.a7, c.a8, c.a9), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(c.quantization_residual(0), 0.0);
    }

    #[test]
    fn degenerate_tau_slope() {
        // with a8 = a9 = 0 the slope reduces to 2 a5 − a2 = −2 a3
        let c = NUProblem::new(1.0, 3.0, 1.5, 0.0, 0.0, 0.0).unwrap().coefficients().unwrap();
        assert_eq!((c.a8, c.a9), (0.0, 0.0));
        assert_eq!(c.tau_prime(), 2.0 * c.a5 - 3.0);
        assert_eq!(c.tau_prime(), -3.0);
    }

    #[test]
    fn solution_exponents() {
        let c = NUProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap().coefficients().unwrap();
        assert_eq!((c.a10, c.a11), (1.0, 3.0));
        let c = NUCoefficients { a10: 1.0, a11: 1.0, ..c };
        let s = build_solution(&c);
        assert_eq!(s.weight_exponents, (0.0, -1.0));
        let c = NUCoefficients { a12: 0.0, ..c };
        assert_eq!(build_solution(&c).phi_exponents.0, 0.0);
    }

    #[test]
    fn bisection_scan_finds_each_root_once() {
        let roots = find_roots(|x| (x - 1.0) * (x - 2.5) * (x + 0.7), -3.0, 5.0, 0.1, 1e-13);
        assert_eq!(roots.len(), 3);
        for (got, want) in roots.iter().zip([-0.7, 1.0, 2.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
