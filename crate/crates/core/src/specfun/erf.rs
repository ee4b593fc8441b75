//! Error function family.
//!
//! `erf` uses the all-positive-term series `erf(x) = 2x e^{-x²}/√π Σ (2x²)^n / (2n+1)!!`
//! for `|x| < 3`, which keeps full relative accuracy. The complement and its
//! scaled form come from the Laplace continued fraction for `x ≥ 0.5`, evaluated
//! with the modified Lentz algorithm.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 3.0;
const CF_LIMIT: f64 = 0.5;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function `erf(x) = 2/√π ∫₀ˣ e^{-t²} dt`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let value = if ax < SERIES_LIMIT {
        erf_series(ax)
    } else {
        1.0 - erfc_positive(ax)
    };
    value.copysign(x)
}

/// Complementary error function `1 − erf(x)`, accurate in the far tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < CF_LIMIT {
        1.0 - erf_series(x)
    } else {
        erfc_positive(x)
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Finite for all `x ≥ 0` (behaves like `1/(x√π)` for large `x`); overflows for
/// large negative `x` as the unscaled quantity does.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < CF_LIMIT {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfcx_continued_fraction(x)
    }
}

fn erf_series(x: f64) -> f64 {
    // Terms are all positive, so there is no cancellation.
    let two_x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x * x).exp() * sum
}

fn erfc_positive(x: f64) -> f64 {
    if x > 27.3 {
        return 0.0;
    }
    (-x * x).exp() * erfcx_continued_fraction(x)
}

/// `e^{x²} erfc(x) = 1/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn erf_reference_values() {
        // 40-digit reference values.
        let cases = [
            (0.25, 0.276_326_390_168_236_93),
            (0.5, 0.520_499_877_813_046_54),
            (1.0, 0.842_700_792_949_714_87),
            (1.5, 0.966_105_146_475_310_73),
            (2.5, 0.999_593_047_982_555_04),
            (3.0, 0.999_977_909_503_001_41),
            (4.0, 0.999_999_984_582_742_1),
            (5.5, 0.999_999_999_999_992_64),
        ];
        for (x, want) in cases {
            assert!((erf(x) - want).abs() < 1e-15, "erf({x}) = {}", erf(x));
            assert!((erf(-x) + want).abs() < 1e-15);
        }
    }

    #[test]
    fn erf_at_origin_and_limits() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(40.0), 1.0);
        assert_eq!(erf(-40.0), -1.0);
        assert!(erf(f64::NAN).is_nan());
    }

    #[test]
    fn erfc_tail_is_relatively_accurate() {
        let cases = [
            (0.5, 0.479_500_122_186_953_46),
            (0.75, 0.288_844_366_346_484_87),
            (1.5, 0.033_894_853_524_689_273),
            (3.0, 2.209_049_699_858_544_1e-5),
            (5.0, 1.537_459_794_428_034_9e-12),
            (10.0, 2.088_487_583_762_544_8e-45),
            (26.0, 5.663_192_408_856_142_8e-296),
        ];
        for (x, want) in cases {
            assert!(rel(erfc(x), want) < 5e-15, "erfc({x}) = {}", erfc(x));
        }
        assert!((erfc(-1.0) - (1.0 + 0.842_700_792_949_714_87)).abs() < 1e-15);
    }

    #[test]
    fn erfcx_matches_reference() {
        let cases = [
            (0.1, 0.896_456_979_969_126_64),
            (0.7, 0.525_930_337_349_440_96),
            (2.0, 0.255_395_676_310_505_74),
            (20.0, 0.028_174_348_741_051_319),
            (1000.0, 5.641_893_014_533_876_5e-4),
        ];
        for (x, want) in cases {
            assert!(rel(erfcx(x), want) < 5e-15, "erfcx({x}) = {}", erfcx(x));
        }
    }

    #[test]
    fn series_and_fraction_agree_at_switch_points() {
        for x in [0.5, 1.0, 2.0, 2.99] {
            let from_series = 1.0 - erf_series(x);
            let from_cf = erfc_positive(x);
            assert!((from_series - from_cf).abs() < 1e-15, "x = {x}: {}", from_series - from_cf);
        }
    }
}
