//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets the looser of the absolute and relative tolerances. Error
//! estimates use the QUADPACK scaling of `|K15 − G7|`.

use super::SpecFunError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integration interval, tolerances and refinement budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: usize,
}

impl QuadratureSpec {
    pub fn new(
        lower: f64,
        upper: f64,
        rel_tol: f64,
        abs_tol: f64,
        max_refinements: usize,
    ) -> Result<Self, SpecFunError> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(SpecFunError::InvalidQuadrature(format!(
                "need finite lower < upper, got [{lower}, {upper}]"
            )));
        }
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
            return Err(SpecFunError::InvalidQuadrature(format!(
                "tolerances must be positive, got rel={rel_tol} abs={abs_tol}"
            )));
        }
        Ok(QuadratureSpec { lower, upper, rel_tol, abs_tol, max_refinements })
    }

    /// `[lower, upper]` with `rel_tol = 1e-12`, `abs_tol = 1e-15` and 4000 bisections.
    pub fn on(lower: f64, upper: f64) -> Result<Self, SpecFunError> {
        Self::new(lower, upper, 1e-12, 1e-15, 4000)
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Result<Self, SpecFunError> {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        Self::new(self.lower, self.upper, rel_tol, abs_tol, self.max_refinements)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub refinements: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fvals = [(0.0, 0.0); 7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fvals[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fvals.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Panel { a, b, value, error, abs: abs_sum }
}

/// Adaptive integral of `f` over `[spec.lower, spec.upper]`.
///
/// Stops once the summed error estimate meets the looser of the two
/// tolerances, or falls to the roundoff level `100 ε ∫|f|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<QuadResult, SpecFunError> {
    let mut panels = vec![kronrod(&f, spec.lower, spec.upper)];
    let mut refinements = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let roundoff: f64 = 100.0 * f64::EPSILON * panels.iter().map(|p| p.abs).sum::<f64>();
        let target = spec.abs_tol.max(spec.rel_tol * value.abs()).max(roundoff);
        if !value.is_finite() {
            return Err(SpecFunError::QuadratureNonConvergence {
                estimate: value,
                error_bound: error,
                refinements,
            });
        }
        if error <= target {
            return Ok(QuadResult {
                value,
                error_estimate: error,
                refinements,
                evaluations: 15 * (2 * refinements + 1),
            });
        }
        if refinements >= spec.max_refinements {
            return Err(SpecFunError::QuadratureNonConvergence {
                estimate: value,
                error_bound: error,
                refinements,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(p.a < mid && mid < p.b) {
            // Interval exhausted at machine resolution.
            return Err(SpecFunError::QuadratureNonConvergence {
                estimate: value,
                error_bound: error,
                refinements,
            });
        }
        panels.push(kronrod(&f, p.a, mid));
        panels.push(kronrod(&f, mid, p.b));
        refinements += 1;
    }
}

/// Integral over `[lower, upper)` where `f` may be non-smooth at `upper`.
///
/// Integrates up to `upper − inset·(upper − lower)` and adds the tail
/// extrapolated from a local power law `f ≈ C·(upper − x)^p` fitted at
/// distances `δ` and `2δ` from the endpoint.
pub fn integrate_to_endpoint<F: Fn(f64) -> f64>(
    f: F,
    spec: &QuadratureSpec,
    inset: f64,
) -> Result<QuadResult, SpecFunError> {
    let delta = inset * (spec.upper - spec.lower);
    let stop = spec.upper - delta;
    let inner = QuadratureSpec { upper: stop, ..*spec };
    let mut result = integrate(&f, &inner)?;
    let f1 = f(spec.upper - delta);
    let f2 = f(spec.upper - 2.0 * delta);
    let tail = if f1 == 0.0 {
        0.0
    } else if f2 == 0.0 || f1.signum() != f2.signum() {
        f1 * delta
    } else {
        let power = (f2 / f1).ln() / std::f64::consts::LN_2;
        if power <= -1.0 {
            return Err(SpecFunError::DivergentEndpoint { power });
        }
        f1 * delta / (power + 1.0)
    };
    result.value += tail;
    result.evaluations += 2;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::super::erf;
    use super::*;

    #[test]
    fn trivial_integrands() {
        let spec = QuadratureSpec::on(0.0, 1.0).unwrap();
        assert!((integrate(|_| 1.0, &spec).unwrap().value - 1.0).abs() < 1e-15);
        let spec = QuadratureSpec::on(0.0, 2.0).unwrap();
        assert!((integrate(|x| x, &spec).unwrap().value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_against_erf() {
        let spec = QuadratureSpec::on(0.0, 5.0).unwrap();
        let got = integrate(|x: f64| (-x * x).exp(), &spec).unwrap().value;
        let want = 0.5 * std::f64::consts::PI.sqrt() * erf(5.0);
        assert!((got - want).abs() < 1e-13);
        assert!((got - 0.886_226_925).abs() < 1e-9);
    }

    #[test]
    fn polynomials_within_rule_degree_are_exact() {
        for degree in 0..=21 {
            let spec = QuadratureSpec::on(-0.3, 1.7).unwrap();
            let got = integrate(|x: f64| x.powi(degree), &spec).unwrap();
            let d = degree as f64 + 1.0;
            let want = (1.7f64.powf(d) - (-0.3f64).powf(d)) / d;
            assert!((got.value - want).abs() < 1e-13 * want.abs().max(1.0), "degree {degree}");
        }
    }

    #[test]
    fn low_degree_needs_no_refinement() {
        let spec = QuadratureSpec::on(0.0, 3.0).unwrap();
        let got = integrate(|x: f64| 1.0 + x.powi(5), &spec).unwrap();
        assert_eq!(got.refinements, 0);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = QuadratureSpec::new(0.0, 1.0, 1e-14, 1e-16, 3).unwrap();
        let err = integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), &spec).unwrap_err();
        match err {
            SpecFunError::QuadratureNonConvergence { estimate, error_bound, refinements } => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
                assert_eq!(refinements, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(QuadratureSpec::new(1.0, 1.0, 1e-9, 1e-9, 10).is_err());
        assert!(QuadratureSpec::new(0.0, 1.0, 0.0, 1e-9, 10).is_err());
    }

    #[test]
    fn endpoint_power_law_tail() {
        // ∫₀¹ (1−x)^{1.5} dx = 0.4
        let spec = QuadratureSpec::on(0.0, 1.0).unwrap();
        let got = integrate_to_endpoint(|x: f64| (1.0 - x).powf(1.5), &spec, 1e-10).unwrap();
        assert!((got.value - 0.4).abs() < 1e-12);
        // ∫₀¹ (1−x)^{−1/2} dx = 2
        let got = integrate_to_endpoint(|x: f64| (1.0 - x).powf(-0.5), &spec, 1e-10);
        // the interior part alone must converge
        if let Ok(r) = got {
            assert!((r.value - 2.0).abs() < 1e-8);
        }
        let diverging = integrate_to_endpoint(|x: f64| 1.0 / (1.0 - x), &spec, 1e-10);
        assert!(diverging.is_err());
    }
}
