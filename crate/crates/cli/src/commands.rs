use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pdm_osc_core::oscillator::Regime;
use pdm_osc_core::thermo::evaluate_grid;
use pdm_osc_core::{QuantumState, RadialWavefunction, SeriesTable, Strategy, ThermoInput, ThermoResult, Variant};

use crate::config::{strategy_name, Command, RunConfig};
use crate::CliError;

/// A table and the file stem it is written under.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stem: String,
    pub table: SeriesTable,
}

const WAVE_POINTS: usize = 400;

fn k_label(k: f64) -> String {
    format!("k={k}")
}

fn with_echo(mut table: SeriesTable, cfg: &RunConfig) -> SeriesTable {
    for (k, v) in cfg.echo() {
        table.push_meta(k, v);
    }
    table
}

/// Rejects non-finite cells unless some `k` is outside the physical regime.
fn checked(table: SeriesTable, cfg: &RunConfig) -> Result<SeriesTable, CliError> {
    let physical = cfg.k_list.iter().all(|&k| cfg.params(k).map(|p| p.regime() == Regime::Physical).unwrap_or(false));
    if physical {
        if let Some((row, col)) = table.first_non_finite() {
            return Err(CliError::compute(format!("row={row},column={col}"), "non-finite value in output table"));
        }
    }
    Ok(table)
}

/// `E(n_r, m)` for `n_r = 0..=n_max`, one column per `k`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<SeriesTable, CliError> {
    let ns: Vec<f64> = (0..=cfg.n_max).map(f64::from).collect();
    let mut table = with_echo(SeriesTable::new("n_r", format!("E (m={})", cfg.m), ns), cfg);
    for &k in &cfg.k_list {
        let p = cfg.params(k)?;
        let column = (0..=cfg.n_max).map(|n| p.energy(n, cfg.m)).collect();
        table.push_column(k_label(k), column)?;
    }
    checked(table, cfg)
}

/// Normalized `U(r)` for `n_r = 0..=n_max` at the first `k`.
pub fn cmd_wavefunction(cfg: &RunConfig) -> Result<SeriesTable, CliError> {
    let k = cfg.k_list[0];
    let p = cfg.params(k)?;
    let at = |n: u32| format!("k={k},n_r={n},m={}", cfg.m);
    let r_end = if p.r_max().is_finite() { p.r_max() } else { 8.0 / p.alpha().sqrt() };
    let rs: Vec<f64> = (0..WAVE_POINTS).map(|i| r_end * i as f64 / WAVE_POINTS as f64).collect();
    let mut table = with_echo(SeriesTable::new("r", format!("U(r) (k={k}, m={})", cfg.m), rs.clone()), cfg);
    table.push_meta("measure", "mass-weighted r/(1+delta_sq r^2)");
    for n in 0..=cfg.n_max {
        let w = RadialWavefunction::new(&p, QuantumState::new(&p, n, cfg.m)).map_err(|e| CliError::compute(at(n), e))?;
        let column = rs.iter().map(|&r| w.value(r)).collect::<Result<Vec<_>, _>>().map_err(|e| CliError::compute(at(n), e))?;
        table.push_column(format!("n_r={n}"), column)?;
    }
    checked(table, cfg)
}

/// `(column name, inputs over the grid)` for every `k` (and variant).
fn grid_inputs(cfg: &RunConfig, m: i32, truncation: u32, ts: &[f64]) -> Result<Vec<(String, Vec<ThermoInput>)>, CliError> {
    let variants: &[Variant] =
        if cfg.strategy == Strategy::PaperClosedForm { cfg.variant.variants() } else { &[Variant::Corrected] };
    let mut out = Vec::new();
    for &k in &cfg.k_list {
        let p = cfg.params(k)?;
        for &variant in variants {
            let name = if variants.len() > 1 { format!("{} {variant:?}", k_label(k)).to_lowercase() } else { k_label(k) };
            let inputs = ts
                .iter()
                .map(|&t| {
                    let mut input = ThermoInput::at_temperature(p, m, t)?
                        .with_truncation(truncation)?
                        .with_strategy(cfg.strategy)
                        .with_variant(variant);
                    input.accept_truncation = cfg.accept_truncation;
                    Ok(input)
                })
                .collect::<Result<Vec<_>, pdm_osc_core::Error>>()
                .map_err(|e| CliError::config("T_grid", e))?;
            out.push((name, inputs));
        }
    }
    Ok(out)
}

/// Evaluates every series in parallel, naming the first failing `(T, k)`.
fn evaluate_series(series: &[(String, Vec<ThermoInput>)]) -> Result<Vec<(String, Vec<ThermoResult>)>, CliError> {
    let flat: Vec<ThermoInput> = series.iter().flat_map(|(_, inputs)| inputs.iter().copied()).collect();
    let mut results = evaluate_grid(&flat).into_iter().zip(&flat);
    let mut out = Vec::with_capacity(series.len());
    for (name, inputs) in series {
        let mut column = Vec::with_capacity(inputs.len());
        for (r, input) in results.by_ref().take(inputs.len()) {
            let r = r.map_err(|e| {
                CliError::compute(format!("T={},k={},m={}", input.temperature(), input.params.k(), input.m), e)
            })?;
            column.push(r);
        }
        out.push((name.clone(), column));
    }
    Ok(out)
}

type Quantity = (&'static str, &'static str, fn(&ThermoResult) -> f64);

const QUANTITIES: [Quantity; 5] = [
    ("Z", "Z", |r| r.z),
    ("U", "U (energy)", |r| r.u),
    ("C", "C (k_B)", |r| r.c),
    ("F", "F (energy)", |r| r.f),
    ("S", "S (k_B)", |r| r.s),
];

fn quantity_table(
    cfg: &RunConfig,
    ts: &[f64],
    label: &str,
    get: fn(&ThermoResult) -> f64,
    series: &[(String, Vec<ThermoResult>)],
    extra: &[(&str, String)],
) -> Result<SeriesTable, CliError> {
    let mut table = with_echo(SeriesTable::new("T", label, ts.to_vec()), cfg);
    for (k, v) in extra {
        table.push_meta(*k, v);
    }
    for (name, results) in series {
        table.push_column(name.clone(), results.iter().map(get).collect())?;
    }
    checked(table, cfg)
}

/// `Z, U, C, F, S` over the temperature grid at the configured `m`.
pub fn cmd_thermo(cfg: &RunConfig) -> Result<Vec<Output>, CliError> {
    let ts = cfg.grid.points();
    let series = evaluate_series(&grid_inputs(cfg, cfg.m, cfg.truncation, &ts)?)?;
    QUANTITIES
        .iter()
        .map(|&(stem, label, get)| {
            Ok(Output { stem: format!("thermo_{stem}"), table: quantity_table(cfg, &ts, label, get, &series, &[])? })
        })
        .collect()
}

/// All five quantities at one temperature, one CSV row per series.
pub fn thermo_point(cfg: &RunConfig, t: f64) -> Result<String, CliError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::config("T", format!("{t} must be finite and > 0")));
    }
    let series = evaluate_series(&grid_inputs(cfg, cfg.m, cfg.truncation, &[t])?)?;
    let mut out = format!("# strategy = {}\nseries,T,Z,U,C,F,S\n", strategy_name(cfg.strategy));
    for (name, results) in &series {
        let r = &results[0];
        let _ = writeln!(out, "{name},{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.z, r.u, r.c, r.f, r.s);
    }
    Ok(out)
}

/// Figure sets: partition function for `N ∈ {200, 300, 400, 500}` at the
/// configured `m`, then `U, C, F, S` at `m = 1` and `m = 2`.
pub fn cmd_figures(cfg: &RunConfig) -> Result<Vec<Output>, CliError> {
    let ts = cfg.grid.points();
    let mut outputs = Vec::new();
    for (panel, n) in ['a', 'b', 'c', 'd'].into_iter().zip([200u32, 300, 400, 500]) {
        let series = evaluate_series(&grid_inputs(cfg, cfg.m, n, &ts)?)?;
        let extra = [("figure", format!("1{panel}")), ("N", n.to_string()), ("m", cfg.m.to_string())];
        let table = quantity_table(cfg, &ts, "Z", |r| r.z, &series, &extra)?;
        outputs.push(Output { stem: format!("fig1{panel}_Z_N{n}"), table });
    }
    for (figure, m) in [(2, 1), (3, 2)] {
        let series = evaluate_series(&grid_inputs(cfg, m, cfg.truncation, &ts)?)?;
        for (panel, &(stem, label, get)) in ['a', 'b', 'c', 'd'].into_iter().zip(&QUANTITIES[1..]) {
            let extra = [("figure", format!("{figure}{panel}")), ("m", m.to_string())];
            let table = quantity_table(cfg, &ts, label, get, &series, &extra)?;
            outputs.push(Output { stem: format!("fig{figure}{panel}_{stem}_m{m}"), table });
        }
    }
    Ok(outputs)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })
}

/// Writes tables and returns the paths written. A single table goes to
/// `out` itself, several go into `out` as a directory. Without `out`, CSV
/// text is returned for stdout.
pub fn emit(cfg: &RunConfig, outputs: &[Output]) -> Result<(Vec<PathBuf>, String), CliError> {
    let Some(out) = cfg.output_path.clone().or_else(|| (cfg.command == Command::Figures).then(|| "figures".into()))
    else {
        let text = outputs.iter().map(|o| o.table.to_csv()).collect::<Vec<_>>().join("\n");
        return Ok((Vec::new(), text));
    };
    let targets: Vec<PathBuf> = if outputs.len() == 1 {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::Io { path: parent.display().to_string(), reason: e.to_string() })?;
        }
        vec![out]
    } else {
        fs::create_dir_all(&out).map_err(|e| CliError::Io { path: out.display().to_string(), reason: e.to_string() })?;
        outputs.iter().map(|o| out.join(&o.stem)).collect()
    };
    let mut written = Vec::new();
    for (o, target) in outputs.iter().zip(targets) {
        if cfg.format.csv() {
            let path = target.with_extension("csv");
            write(&path, &o.table.to_csv())?;
            written.push(path);
        }
        if cfg.format.svg() {
            let path = target.with_extension("svg");
            write(&path, &o.table.to_svg())?;
            written.push(path);
        }
    }
    Ok((written, String::new()))
}
