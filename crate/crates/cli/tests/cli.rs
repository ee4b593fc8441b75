use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pdm_osc_core::thermo::evaluate;
use pdm_osc_core::{SystemParams, ThermoInput};

fn pdm_osc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdm-osc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV, metadata and header skipped.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn spectrum_examples() {
    let o = pdm_osc(&["spectrum", "--alpha", "1", "--k", "0", "--m", "0", "--n-max", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let col: Vec<f64> = rows(&stdout(&o)).iter().map(|r| r[1]).collect();
    assert_eq!(col, vec![1.0, 3.0, 5.0, 7.0]);

    let o = pdm_osc(&["spectrum", "--alpha", "1", "--k", "-0.5", "--m", "0", "--n-max", "1"]);
    let col: Vec<f64> = rows(&stdout(&o)).iter().map(|r| r[1]).collect();
    assert!((col[0] - 1.618_033_988_7).abs() < 1e-10);
    assert!((col[1] - 5.854_101_966_2).abs() < 1e-10);
    let text = stdout(&o);
    assert!(text.contains("# k_list = -0.5"));
    assert!(text.contains("delta_sq = k*lambda = -0.5"));
}

#[test]
fn cells_carry_seventeen_significant_digits() {
    let o = pdm_osc(&["spectrum", "--k", "-0.5", "--m", "0", "--n-max", "0"]);
    let line = stdout(&o).lines().last().unwrap().to_string();
    let cell = line.split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn single_point_thermo() {
    let o = pdm_osc(&["thermo", "--T", "10", "--k", "-0.3", "--m", "1", "--strategy", "direct"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let values: Vec<f64> = last.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
    let want = evaluate(&ThermoInput::at_temperature(SystemParams::new(1.0, -0.3, 1.0).unwrap(), 1, 10.0).unwrap()).unwrap();
    assert_eq!(values, vec![10.0, want.z, want.u, want.c, want.f, want.s]);
}

#[test]
fn thermo_tables_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = pdm_osc(&["thermo", "--T-count", "30", "--format", "both", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for q in ["Z", "U", "C", "F", "S"] {
        let csv = fs::read_to_string(out.join(format!("thermo_{q}.csv"))).unwrap();
        let r = rows(&csv);
        assert_eq!(r.len(), 30);
        assert!(r.iter().all(|row| row.len() == 4));
        assert!(fs::read_to_string(out.join(format!("thermo_{q}.svg"))).unwrap().contains("<polyline"));
    }
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "# figure set\nalpha = 2\nk_list = -0.1,-0.4\nm = 2\nn_max = 2\n");
    let o = pdm_osc(&["spectrum", "--config", cfg.to_str().unwrap(), "--alpha", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# alpha = 3\n"));
    assert!(text.contains("# k_list = -0.1,-0.4\n"));
    assert!(text.contains("# m = 2\n"));
    assert_eq!(rows(&text).len(), 3);
}

#[test]
fn metadata_header_reruns_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let first = pdm_osc(&["thermo", "--k-list", "-0.2,-0.25", "--m", "2", "--N", "300", "--T-count", "12", "--T-spacing", "log"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let text = stdout(&first);
    let header: String =
        text.lines().take_while(|l| l.starts_with('#')).map(|l| format!("{}\n", l.trim_start_matches("# "))).collect();
    let cfg = dir.path().join("echo.cfg");
    write(&cfg, &header);
    let again = pdm_osc(&["thermo", "--config", cfg.to_str().unwrap()]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(stdout(&again), text);
}

#[test]
fn config_errors_exit_two_with_one_line() {
    for args in [
        &["thermo", "--alpha", "-1"][..],
        &["thermo", "--T-min", "5", "--T-max", "1"],
        &["thermo", "--strategy", "paper", "--k", "0.2"],
        &["thermo", "--strategy", "bogus"],
        &["spectrum", "--no-such-flag"],
        &["spectrum", "--format", "svg"],
    ] {
        let o = pdm_osc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: kind=config"), "{args:?}: {err}");
    }
    let o = pdm_osc(&["thermo", "--alpha", "-1"]);
    assert!(stderr(&o).contains("field=alpha"));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let o = pdm_osc(&["spectrum", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_and_name_the_grid_point() {
    let o = pdm_osc(&["thermo", "--k", "0.5", "--m", "0", "--T-count", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error: kind=compute at=T="), "{err}");
    assert!(err.contains("k=0.5"), "{err}");
}

#[test]
fn validate_quick_and_negative_control() {
    let o = pdm_osc(&["validate", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).lines().all(|l| l.contains(" pass ")));

    let o = pdm_osc(&["validate", "--quick", "--perturb-energy", "0.05"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("check=ode_residual"), "{}", stderr(&o));
}

#[test]
fn full_validate_reports_every_check() {
    let o = pdm_osc(&["validate"]);
    let report = stdout(&o);
    for name in [
        "nu_quantization",
        "ode_residual",
        "ode_sensitivity",
        "normalization",
        "orthogonality",
        "orthogonality_mass_weighted",
        "k0_ladder",
        "harmonic_z",
        "high_t_heat_capacity",
        "thermo_identity",
        "truncation_insensitivity",
        "figure_monotonicity",
        "heat_capacity_plateau",
        "plateau_k_dependence",
        "poisson_vs_direct",
        "paper_vs_direct",
        "derivative_consistency",
    ] {
        assert!(report.lines().any(|l| l.starts_with(name)), "{name} missing:\n{report}");
    }
    let failed = report.lines().any(|l| l.contains(" FAIL "));
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
}

#[test]
fn wavefunction_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let o = pdm_osc(&["wavefunction", "--k", "-0.5", "--m", "1", "--n-max", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(r[0].len(), 4);
    assert_eq!(r[0][1], 0.0);
}

#[test]
fn figures_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    let o = pdm_osc(&["figures", "--T-count", "40", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 12);
    assert!(names.contains(&"fig1a_Z_N200.csv".to_string()));
    assert!(names.contains(&"fig3b_C_m2.csv".to_string()));
    let csv = fs::read_to_string(out.join("fig2b_C_m1.csv")).unwrap();
    assert!(csv.contains("# figure = 2b"));
    assert!(csv.contains("k_list is a default choice"));
    assert!(csv.lines().find(|l| !l.starts_with('#')).unwrap() == "T,k=-0.1,k=-0.2,k=-0.3");
}
