//! Jacobi polynomials and the terminating Gauss hypergeometric series.
//!
//! The three-term recurrence in the degree is the production route. The
//! series route `P_n^{(a,b)}(1−2z) = (a+1)_n/n! · ₂F₁(−n, 1+n+a+b; 1+a; z)` is
//! kept as an independent cross-check and is summed in double-double so that
//! cancellation between its alternating terms does not swamp the result.

use super::twofold::Twofold;
use super::SpecFunError;

/// Default upper bound on the polynomial degree.
pub const DEFAULT_DEGREE_CAP: usize = 1_000_000;

/// Parameters `(a, b)` and degree `n` of `P_n^{(a,b)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        JacobiParams { a, b, n }
    }

    /// Whether `(1−x)^a (1+x)^b` is an integrable weight on `[−1, 1]`.
    ///
    /// Parameters outside that range still evaluate; the polynomials just lose
    /// the classical orthogonality.
    pub fn is_orthogonal(&self) -> bool {
        self.a > -1.0 && self.b > -1.0
    }

    /// The same family with `a` and `b` swapped.
    pub fn swapped(&self) -> Self {
        JacobiParams { a: self.b, b: self.a, n: self.n }
    }
}

/// `P_n^{(a,b)}(x)` by the three-term recurrence, capped at [`DEFAULT_DEGREE_CAP`].
pub fn jacobi_p(params: &JacobiParams, x: f64) -> Result<f64, SpecFunError> {
    jacobi_p_with_cap(params, x, DEFAULT_DEGREE_CAP)
}

pub fn jacobi_p_with_cap(params: &JacobiParams, x: f64, cap: usize) -> Result<f64, SpecFunError> {
    if params.n > cap {
        return Err(SpecFunError::DegreeOverflow { n: params.n, cap });
    }
    match recurrence(params, x, |_, _| {}) {
        Some(v) => Ok(v),
        // A vanishing leading coefficient (a + b a negative integer) breaks the
        // recurrence; the series has no such restriction.
        None => jacobi_p_hypergeometric(params, x),
    }
}

/// Values `P_0 … P_n` at `x`. Useful when a scale for the whole sequence is needed.
pub fn jacobi_p_sequence(params: &JacobiParams, x: f64) -> Result<Vec<f64>, SpecFunError> {
    if params.n > DEFAULT_DEGREE_CAP {
        return Err(SpecFunError::DegreeOverflow { n: params.n, cap: DEFAULT_DEGREE_CAP });
    }
    let mut out = Vec::with_capacity(params.n + 1);
    match recurrence(params, x, |_, v| out.push(v)) {
        Some(_) => Ok(out),
        None => (0..=params.n)
            .map(|k| jacobi_p_hypergeometric(&JacobiParams { n: k, ..*params }, x))
            .collect(),
    }
}

fn recurrence(params: &JacobiParams, x: f64, mut visit: impl FnMut(usize, f64)) -> Option<f64> {
    let JacobiParams { a, b, n } = *params;
    let p0 = 1.0;
    visit(0, p0);
    if n == 0 {
        return Some(p0);
    }
    let p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    visit(1, p1);
    let (mut prev, mut cur) = (p0, p1);
    let ab = a + b;
    let diff_sq = a * a - b * b;
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let lead = 2.0 * kf * (kf + ab) * (s - 2.0);
        if lead == 0.0 {
            return None;
        }
        let mid = (s - 1.0) * (s * (s - 2.0) * x + diff_sq);
        let back = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (mid * cur - back * prev) / lead;
        prev = cur;
        cur = next;
        visit(k, cur);
    }
    Some(cur)
}

/// `P_n^{(a,b)}(x)` through the Γ-prefactor identity and the terminating series.
pub fn jacobi_p_hypergeometric(params: &JacobiParams, x: f64) -> Result<f64, SpecFunError> {
    let JacobiParams { a, b, n } = *params;
    let z = (Twofold::ONE - Twofold::from(x)) / Twofold::from(2.0);
    let upper = Twofold::from(1.0 + n as f64) + Twofold::from(a) + Twofold::from(b);
    let lower = Twofold::ONE + Twofold::from(a);
    let series = series_twofold(n, upper, lower, z)?;
    // Γ(n+a+1) / (n! Γ(a+1)) = Π_{j=1}^{n} (a+j)/j
    let mut prefactor = Twofold::ONE;
    for j in 1..=n {
        let jf = Twofold::from(j as f64);
        prefactor = prefactor * (Twofold::from(a) + jf) / jf;
    }
    Ok((prefactor * series).to_f64())
}

/// Terminating `₂F₁(−n, b; c; z) = Σ_{j=0}^{n} (−n)_j (b)_j / ((c)_j j!) z^j`.
///
/// Fails when `c ∈ {0, −1, …, −(n−1)}`, where a denominator of the series vanishes.
pub fn hyp2f1_terminating(n: usize, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    series_twofold(n, Twofold::from(b), Twofold::from(c), Twofold::from(z)).map(Twofold::to_f64)
}

fn series_twofold(n: usize, b: Twofold, c: Twofold, z: Twofold) -> Result<Twofold, SpecFunError> {
    let c_hi = c.to_f64();
    if n > 0 && c_hi <= 0.0 && c_hi.fract() == 0.0 && c_hi > -(n as f64) {
        return Err(SpecFunError::HypergeometricPole { c: c_hi });
    }
    let mut term = Twofold::ONE;
    let mut sum = Twofold::ONE;
    for j in 0..n {
        let jf = Twofold::from(j as f64);
        let num = (jf - Twofold::from(n as f64)) * (b + jf) * z;
        let den = (c + jf) * (jf + Twofold::ONE);
        term = term * num / den;
        sum = sum + term;
        if term.abs().to_f64() == 0.0 {
            break;
        }
    }
    Ok(sum)
}
