//! Special functions and numerical kernels used by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

mod diff;
mod erf;
mod gamma;
mod jacobi;
mod quad;
mod twofold;

pub use diff::{central_diff, default_step, DerivativeOrder};
pub use erf::{erf, erfc, erfcx};
pub use gamma::{gamma, ln_gamma};
pub use jacobi::{
    hyp2f1_terminating, jacobi_p, jacobi_p_hypergeometric, jacobi_p_sequence, jacobi_p_with_cap,
    JacobiParams, DEFAULT_DEGREE_CAP,
};
pub use quad::{integrate, integrate_to_endpoint, QuadResult, QuadratureSpec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("polynomial degree {n} exceeds the cap {cap}")]
    DegreeOverflow { n: usize, cap: usize },
    #[error("hypergeometric series has a pole: c = {c} is a non-positive integer inside the series")]
    HypergeometricPole { c: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),
    #[error(
        "quadrature did not converge after {refinements} refinements \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureNonConvergence { estimate: f64, error_bound: f64, refinements: usize },
    #[error("integrand is not integrable at the endpoint (local power {power})")]
    DivergentEndpoint { power: f64 },
}
