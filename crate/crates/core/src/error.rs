use thiserror::Error;

use crate::nu::NuError;
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Nu(#[from] NuError),
    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("r = {r} lies outside the admissible domain [0, {r_max})")]
    Domain { r: f64, r_max: f64 },
    #[error("δ² = 0: the nonlinear substitution z = −δ²r² is degenerate")]
    DegenerateNonlinearity,
    #[error("no normalizable solution for (n_r = {n_r}, m = {m}): {detail}")]
    NonNormalizable { n_r: u32, m: i32, detail: String },
    #[error("k = {k} is outside the physical regime k < 0 required here")]
    NonPhysical { k: f64 },
    #[error("spectrum is not increasing in n_r (k = {k}); a truncated sum needs explicit acceptance")]
    TruncationNotAccepted { k: f64 },
    #[error("closed-form partition function is not positive (Z = {z:e})")]
    NonPositiveZ { z: f64 },
}
