//! Self-validation: quantization and radial-equation residuals, wavefunction
//! norms, strategy triangulation, derivative consistency, figure shapes,
//! the `F = U − TS` identity and limit checks.

use std::fmt::Write as _;

use pdm_osc_core::oscillator::{ode_residual, quantization_residual_at};
use pdm_osc_core::specfun::{central_diff, DerivativeOrder};
use pdm_osc_core::thermo::{evaluate, evaluate_grid, partition_paper, plateau_scan, TemperatureGrid};
use pdm_osc_core::{Measure, QuantumState, RadialWavefunction, Strategy, SystemParams, ThermoInput, ThermoResult, Variant};

use crate::config::DEFAULT_K_LIST;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidateOptions {
    pub quick: bool,
    /// Added to every eigenvalue fed to the radial-equation check.
    pub energy_shift: f64,
}

struct Fixtures {
    params: Vec<SystemParams>,
    n_max: u32,
    m_max: i32,
}

impl Fixtures {
    fn new(quick: bool) -> Self {
        let (alphas, ks, n_max, m_max): (&[f64], &[f64], u32, i32) =
            if quick { (&[1.0], &[-0.5], 3, 2) } else { (&[1.0, 2.0], &[-0.1, -0.5, -1.0], 8, 4) };
        let params = alphas
            .iter()
            .flat_map(|&a| ks.iter().map(move |&k| SystemParams::new(a, k, 1.0).expect("fixture parameters")))
            .collect();
        Fixtures { params, n_max, m_max }
    }

    fn states(&self) -> impl Iterator<Item = (SystemParams, u32, i32)> + '_ {
        self.params
            .iter()
            .flat_map(move |&p| (0..=self.n_max).flat_map(move |n| (-self.m_max..=self.m_max).map(move |m| (p, n, m))))
    }
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

fn failure(name: &'static str, e: impl std::fmt::Display) -> CheckOutcome {
    outcome(name, false, e.to_string())
}

/// `count` interior points of `(0, r_max)`.
fn interior(p: &SystemParams, count: usize) -> Vec<f64> {
    let r_max = p.r_max();
    (1..=count).map(|i| r_max * i as f64 / (count + 1) as f64).collect()
}

fn quantization(fx: &Fixtures) -> CheckOutcome {
    let mut worst = 0.0f64;
    for (p, n, m) in fx.states() {
        match quantization_residual_at(&p, n, m, p.energy(n, m)) {
            Ok(r) => worst = worst.max(r.abs()),
            Err(e) => return failure("nu_quantization", e),
        }
    }
    outcome("nu_quantization", worst <= 1e-9, format!("max |residual| = {worst:.3e} (tol 1e-9)"))
}

/// Largest residual, smallest per-state maximum, and the number of states
/// whose maximum exceeds `1e-3`.
fn worst_ode(fx: &Fixtures, shift: f64) -> Result<(f64, f64, usize), pdm_osc_core::Error> {
    let (mut worst, mut least, mut above) = (0.0f64, f64::INFINITY, 0);
    for (p, n, m) in fx.states() {
        let state = QuantumState::off_shell(n, m, p.energy(n, m) + shift);
        let mut state_worst = 0.0f64;
        for r in interior(&p, 50) {
            state_worst = state_worst.max(ode_residual(&p, &state, r)?);
        }
        worst = worst.max(state_worst);
        least = least.min(state_worst);
        above += usize::from(state_worst > 1e-3);
    }
    Ok((worst, least, above))
}

fn ode(fx: &Fixtures, shift: f64) -> [CheckOutcome; 2] {
    let on_shell = match worst_ode(fx, shift) {
        Ok((worst, ..)) => outcome("ode_residual", worst <= 1e-8, format!("max relative residual = {worst:.3e} (tol 1e-8)")),
        Err(e) => failure("ode_residual", e),
    };
    let total = fx.states().count();
    let perturbed = match worst_ode(fx, shift + 0.05) {
        Ok((_, least, above)) => outcome(
            "ode_sensitivity",
            least > 1e-3,
            format!("with E + 0.05, {above}/{total} states exceed 1e-3; smallest {least:.3e}"),
        ),
        Err(e) => failure("ode_sensitivity", e),
    };
    [on_shell, perturbed]
}

fn waves(fx: &Fixtures, measure: Measure) -> Result<Vec<Vec<RadialWavefunction>>, pdm_osc_core::Error> {
    let mut groups = Vec::new();
    for p in &fx.params {
        for m in -fx.m_max..=fx.m_max {
            let group = (0..=fx.n_max)
                .map(|n| RadialWavefunction::with_measure(p, QuantumState::new(p, n, m), measure))
                .collect::<Result<Vec<_>, _>>()?;
            groups.push(group);
        }
    }
    Ok(groups)
}

fn norms(fx: &Fixtures, measure: Measure, name: &'static str, with_cross: Option<&'static str>) -> Vec<CheckOutcome> {
    let groups = match waves(fx, measure) {
        Ok(g) => g,
        Err(e) => {
            let mut out = vec![failure(name, &e)];
            out.extend(with_cross.map(|c| failure(c, &e)));
            return out;
        }
    };
    let (mut norm_err, mut cross) = (0.0f64, 0.0f64);
    for group in &groups {
        for (i, a) in group.iter().enumerate() {
            match a.overlap(a) {
                Ok(v) => norm_err = norm_err.max((v - 1.0).abs()),
                Err(e) => return vec![failure(name, e)],
            }
            if with_cross.is_some() {
                for b in &group[i + 1..] {
                    match a.overlap(b) {
                        Ok(v) => cross = cross.max(v.abs()),
                        Err(e) => return vec![failure(name, e)],
                    }
                }
            }
        }
    }
    let mut out = vec![outcome(name, norm_err <= 1e-8, format!("max |norm − 1| = {norm_err:.3e} (tol 1e-8)"))];
    if let Some(c) = with_cross {
        out.push(outcome(c, cross <= 1e-6, format!("max |cross term| = {cross:.3e} (tol 1e-6)")));
    }
    out
}

fn ladder_limit(fx: &Fixtures) -> CheckOutcome {
    let mut worst = 0.0f64;
    for (p, n, m) in fx.states() {
        let q = SystemParams::new(p.alpha(), -1e-8, 1.0).expect("fixture parameters");
        let ladder = (2 * n + m.unsigned_abs() + 1) as f64 * p.alpha();
        worst = worst.max((q.energy(n, m) - ladder).abs());
    }
    outcome("k0_ladder", worst <= 1e-6, format!("max |E − (2n+|m|+1)α| at k = −1e-8: {worst:.3e} (tol 1e-6)"))
}

fn harmonic(quick: bool) -> [CheckOutcome; 2] {
    let p = SystemParams::new(1.0, 0.0, 1.0).expect("harmonic parameters");
    let betas: &[f64] = if quick { &[0.05, 1.0] } else { &[0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] };
    let mut worst = 0.0f64;
    for &beta in betas {
        let q = (-2.0 * beta * p.alpha()).exp();
        match ThermoInput::new(p, 1, beta).and_then(|i| evaluate(&i)) {
            Ok(r) => worst = worst.max((r.z - q / (1.0 - q)).abs()),
            Err(e) => return [failure("harmonic_z", &e), failure("high_t_heat_capacity", e)],
        }
    }
    let z = outcome("harmonic_z", worst <= 1e-10, format!("max |Z − geometric| = {worst:.3e} (tol 1e-10)"));
    let c = match ThermoInput::at_temperature(p, 1, 100.0).and_then(|i| evaluate(&i)) {
        Ok(r) => {
            let err = (r.c - p.kb()).abs() / p.kb();
            outcome("high_t_heat_capacity", err <= 0.01, format!("C(T=100)/k_B = {:.6} (tol 1%)", r.c / p.kb()))
        }
        Err(e) => failure("high_t_heat_capacity", e),
    };
    [z, c]
}

/// Figure-set series: `(k, m, temperatures, results)`.
struct Series {
    k: f64,
    m: i32,
    ts: Vec<f64>,
    results: Vec<ThermoResult>,
}

fn figure_series(grid: &TemperatureGrid, ms: &[i32], truncation: u32) -> Result<Vec<Series>, pdm_osc_core::Error> {
    let ts = grid.points();
    let mut out = Vec::new();
    for &m in ms {
        for &k in &DEFAULT_K_LIST {
            let p = SystemParams::new(1.0, k, 1.0)?;
            let inputs = ts
                .iter()
                .map(|&t| ThermoInput::at_temperature(p, m, t)?.with_truncation(truncation))
                .collect::<Result<Vec<_>, _>>()?;
            let results = evaluate_grid(&inputs).into_iter().collect::<Result<Vec<_>, _>>()?;
            out.push(Series { k, m, ts: ts.clone(), results });
        }
    }
    Ok(out)
}

fn identity(series: &[Series]) -> CheckOutcome {
    let mut worst = 0.0f64;
    for s in series {
        for r in &s.results {
            worst = worst.max((r.f - (r.u - r.temperature * r.s)).abs() / r.f.abs().max(1.0));
        }
    }
    outcome("thermo_identity", worst <= 1e-8, format!("max |F − (U − TS)|/max(1,|F|) = {worst:.3e} (tol 1e-8)"))
}

fn truncation(series: &[Series], at_300: &[Series]) -> CheckOutcome {
    let mut worst = 0.0f64;
    for (a, b) in series.iter().zip(at_300) {
        for (r5, r3) in a.results.iter().zip(&b.results) {
            worst = worst.max((r3.z - r5.z).abs() / r5.z);
        }
    }
    outcome("truncation_insensitivity", worst <= 1e-12, format!("max |Z_300 − Z_500|/Z_500 = {worst:.3e} (tol 1e-12)"))
}

fn strictly(values: impl Iterator<Item = f64>, increasing: bool) -> bool {
    violations(values, increasing) == (0, 0)
}

/// `(ties, reversals)` between consecutive values.
fn violations(values: impl Iterator<Item = f64>, increasing: bool) -> (usize, usize) {
    let v: Vec<f64> = values.collect();
    v.windows(2).fold((0, 0), |(ties, rev), w| {
        let step = if increasing { w[1] - w[0] } else { w[0] - w[1] };
        if step == 0.0 {
            (ties + 1, rev)
        } else if !(step > 0.0) {
            (ties, rev + 1)
        } else {
            (ties, rev)
        }
    })
}

fn monotone(failures: &mut Vec<String>, what: &str, tag: &str, values: impl Iterator<Item = f64>, increasing: bool) {
    match violations(values, increasing) {
        (0, 0) => {}
        (ties, 0) => failures.push(format!("{what}: {ties} equal neighbours in f64 ({tag})")),
        (ties, rev) => failures.push(format!("{what}: {rev} reversals, {ties} ties ({tag})")),
    }
}

fn figure_shapes(series: &[Series]) -> [CheckOutcome; 3] {
    let mut shape_failures = Vec::new();
    let mut worst_plateau = 0.0f64;
    let mut plateaus: Vec<(i32, f64, f64)> = Vec::new();
    for s in series {
        let tag = format!("m={},k={}", s.m, s.k);
        let col = |f: fn(&ThermoResult) -> f64| s.results.iter().map(f);
        monotone(&mut shape_failures, "Z not strictly increasing", &tag, col(|r| r.z), true);
        monotone(&mut shape_failures, "F not strictly decreasing", &tag, col(|r| r.f), false);
        monotone(&mut shape_failures, "S not strictly increasing", &tag, col(|r| r.s), true);
        let c: Vec<f64> = col(|r| r.c).collect();
        match plateau_scan(&s.ts, &c) {
            Some(p) => {
                let peak = s.ts.iter().position(|&t| t == p.peak_t).unwrap_or(0);
                if !(c[0] < p.value && strictly(c[..=peak].iter().copied(), true)) {
                    shape_failures.push(format!("C does not rise to its plateau ({tag})"));
                }
                worst_plateau = worst_plateau.max(p.variation);
                plateaus.push((s.m, s.k, p.value));
            }
            None => shape_failures.push(format!("no plateau window ({tag})")),
        }
    }
    let shapes = outcome(
        "figure_monotonicity",
        shape_failures.is_empty(),
        if shape_failures.is_empty() { "Z, F, S monotone; C rises".into() } else { shape_failures.join("; ") },
    );
    let plateau = outcome(
        "heat_capacity_plateau",
        worst_plateau < 0.01,
        format!("largest flattest-doubling variation = {:.3}% (tol 1%)", 100.0 * worst_plateau),
    );
    let mut k_ok = true;
    let mut smallest = f64::INFINITY;
    for m in [1, 2] {
        let values: Vec<f64> = plateaus.iter().filter(|p| p.0 == m).map(|p| p.2).collect();
        k_ok &= strictly(values.iter().copied(), true) || strictly(values.iter().copied(), false);
        for w in values.windows(2) {
            smallest = smallest.min((w[1] - w[0]).abs() / w[0].abs().max(w[1].abs()));
        }
    }
    let k_dep = outcome(
        "plateau_k_dependence",
        k_ok && smallest > 0.02,
        format!("monotone in k: {k_ok}; smallest adjacent difference {:.2}% (must exceed 2%)", 100.0 * smallest),
    );
    [shapes, plateau, k_dep]
}

fn triangulation() -> [CheckOutcome; 2] {
    let grid = TemperatureGrid::default();
    let mut poisson_worst = 0.0f64;
    let mut paper_worst = [0.0f64; 2];
    for &k in &DEFAULT_K_LIST {
        let p = SystemParams::new(1.0, k, 1.0).expect("fixture parameters");
        for t in grid.points() {
            let Ok(base) = ThermoInput::at_temperature(p, 1, t) else { continue };
            let direct = match evaluate(&base) {
                Ok(d) => d,
                Err(e) => return [failure("poisson_vs_direct", &e), failure("paper_vs_direct", e)],
            };
            if base.beta <= 1.0 {
                match evaluate(&base.with_strategy(Strategy::PoissonPipeline)) {
                    Ok(r) => poisson_worst = poisson_worst.max(((r.z - direct.z) / direct.z).abs()),
                    Err(e) => return [failure("poisson_vs_direct", &e), failure("paper_vs_direct", e)],
                }
            }
            if (5.0..=50.0).contains(&t) {
                match partition_paper(&base) {
                    Ok(pp) => {
                        for (slot, v) in paper_worst.iter_mut().zip([Variant::Verbatim, Variant::Corrected]) {
                            let z = pp.get(v).z;
                            let err = if z.is_finite() { ((z - direct.z) / direct.z).abs() } else { f64::INFINITY };
                            *slot = slot.max(err);
                        }
                    }
                    Err(e) => return [failure("poisson_vs_direct", &e), failure("paper_vs_direct", e)],
                }
            }
        }
    }
    let best = paper_worst[0].min(paper_worst[1]);
    [
        outcome("poisson_vs_direct", poisson_worst <= 1e-3, format!("max rel. Z difference, β ≤ 1: {poisson_worst:.3e} (tol 1e-3)")),
        outcome(
            "paper_vs_direct",
            best <= 0.05,
            format!(
                "max rel. Z difference, T ∈ [5,50]: verbatim {:.3e}, corrected {:.3e} (tol 5% for the better)",
                paper_worst[0], paper_worst[1]
            ),
        ),
    ]
}

fn derivatives() -> CheckOutcome {
    let mut worst = 0.0f64;
    for &k in &DEFAULT_K_LIST {
        for m in [1, 2] {
            let p = SystemParams::new(1.0, k, 1.0).expect("fixture parameters");
            for beta in [0.05, 0.1, 0.5] {
                let Ok(base) = ThermoInput::new(p, m, beta) else { continue };
                let base = base.with_strategy(Strategy::PaperClosedForm);
                let r = match evaluate(&base) {
                    Ok(r) => r,
                    Err(e) => return failure("derivative_consistency", e),
                };
                let ln_z = |b: f64| base.with_beta(b).and_then(|i| evaluate(&i)).map(|r| r.ln_z).unwrap_or(f64::NAN);
                let d1 = central_diff(ln_z, beta, DerivativeOrder::First, 1e-3 * beta);
                let d2 = central_diff(ln_z, beta, DerivativeOrder::Second, 1e-2 * beta);
                let kb = p.kb();
                let fd = [-d1, kb * beta * beta * d2, kb * (r.ln_z - beta * d1)];
                for (analytic, numeric) in [r.u, r.c, r.s].into_iter().zip(fd) {
                    worst = worst.max(((analytic - numeric) / numeric).abs());
                }
            }
        }
    }
    outcome("derivative_consistency", worst <= 1e-6, format!("max rel. U, C, S vs finite differences = {worst:.3e} (tol 1e-6)"))
}

pub fn run_checks(opts: ValidateOptions) -> Vec<CheckOutcome> {
    let fx = Fixtures::new(opts.quick);
    let mut out = vec![quantization(&fx)];
    out.extend(ode(&fx, opts.energy_shift));
    if opts.quick {
        out.extend(norms(&fx, Measure::Flat, "normalization", None));
    } else {
        out.extend(norms(&fx, Measure::Flat, "normalization", Some("orthogonality")));
        out.extend(norms(&fx, Measure::MassWeighted, "normalization_mass_weighted", Some("orthogonality_mass_weighted")));
        out.push(ladder_limit(&fx));
    }
    out.extend(harmonic(opts.quick));
    let grid = if opts.quick {
        TemperatureGrid { count: 40, ..TemperatureGrid::default() }
    } else {
        TemperatureGrid::default()
    };
    let ms: &[i32] = if opts.quick { &[1] } else { &[1, 2] };
    match (figure_series(&grid, ms, 500), figure_series(&grid, ms, 300)) {
        (Ok(series), Ok(at_300)) => {
            out.push(identity(&series));
            out.push(truncation(&series, &at_300));
            if !opts.quick {
                out.extend(figure_shapes(&series));
            }
        }
        (Err(e), _) | (_, Err(e)) => out.push(failure("figure_series", e)),
    }
    if !opts.quick {
        out.extend(triangulation());
        out.push(derivatives());
    }
    out
}

pub fn render(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(s, "{:<width$}  {}  {}", o.name, if o.passed { "pass" } else { "FAIL" }, o.detail);
    }
    s
}

/// The report, and the first failing check as an error.
pub fn cmd_validate(opts: ValidateOptions) -> (String, Result<(), CliError>) {
    let outcomes = run_checks(opts);
    let report = render(&outcomes);
    let status = match outcomes.iter().find(|o| !o.passed) {
        None => Ok(()),
        Some(o) => Err(CliError::Check { check: o.name.to_string(), reason: o.detail.clone() }),
    };
    (report, status)
}
