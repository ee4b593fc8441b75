//! Fourth-order central differences.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Default step for [`central_diff`].
///
/// First derivatives use `max(1e-5, 1e-5·|x|)`. Second derivatives divide
/// roundoff by `h²`, so they use the larger `max(1e-4, 1e-3·|x|)`.
pub fn default_step(x: f64, order: DerivativeOrder) -> f64 {
    match order {
        DerivativeOrder::First => (1e-5 * x.abs()).max(1e-5),
        DerivativeOrder::Second => (1e-3 * x.abs()).max(1e-4),
    }
}

/// Five-point estimate of `f′(x)` or `f″(x)` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, order: DerivativeOrder, h: f64) -> f64 {
    debug_assert!(h > 0.0);
    let fp1 = f(x + h);
    let fm1 = f(x - h);
    let fp2 = f(x + 2.0 * h);
    let fm2 = f(x - 2.0 * h);
    match order {
        DerivativeOrder::First => (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
        DerivativeOrder::Second => {
            let f0 = f(x);
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
        }
    }
}
