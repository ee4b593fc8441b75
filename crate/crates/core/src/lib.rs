//! Exact spectra, wavefunctions and canonical thermodynamics of the
//! two-dimensional nonlinear oscillator with position-dependent mass
//! `m(r) = λ / (1 + δ² r²)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: error function, log-gamma, Jacobi polynomials, terminating
//!   `₂F₁`, adaptive quadrature and central differences.
//! * [`nu`]: the Nikiforov–Uvarov parametric engine (coefficient chain,
//!   quantization condition, solution structure).
//! * [`oscillator`]: the physical system, its closed-form spectrum and the
//!   radial/total wavefunctions, checked by direct substitution into the radial
//!   equation.
//! * [`thermo`]: the canonical partition function by a direct state sum, the
//!   closed-form Poisson-summed expression and an independent
//!   Poisson/Euler–Maclaurin pipeline, plus `U`, `C`, `F` and `S`.
//! * [`table`]: CSV/SVG series tables shared with the command-line tool.
//!
//! Units are natural: `ħ = 1`, and `k_B = 1` unless configured otherwise.

pub mod nu;
pub mod oscillator;
pub mod specfun;
pub mod table;
pub mod thermo;

mod error;

pub use error::Error;
pub use nu::{NUCoefficients, NUProblem, NUSolution};
pub use oscillator::{Measure, QuantumState, RadialWavefunction, SystemParams};
pub use table::SeriesTable;
pub use thermo::{Strategy, ThermoInput, ThermoResult, Variant};

pub type Result<T, E = Error> = std::result::Result<T, E>;
