//! Run configuration. Sources are layered: defaults, then a flat
//! `key = value` file, then command-line flags.

use std::path::PathBuf;

use clap::Args;
use pdm_osc_core::thermo::{Spacing, TemperatureGrid, DEFAULT_TRUNCATION};
use pdm_osc_core::{Strategy, SystemParams, Variant};

use crate::CliError;

/// Default `k` values for the figure sets. The source figures do not state theirs.
pub const DEFAULT_K_LIST: [f64; 3] = [-0.1, -0.2, -0.3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Wavefunction,
    Thermo,
    Figures,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavefunction => "wavefunction",
            Command::Thermo => "thermo",
            Command::Figures => "figures",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariantChoice {
    Verbatim,
    #[default]
    Corrected,
    Both,
}

impl VariantChoice {
    pub fn variants(self) -> &'static [Variant] {
        match self {
            VariantChoice::Verbatim => &[Variant::Verbatim],
            VariantChoice::Corrected => &[Variant::Corrected],
            VariantChoice::Both => &[Variant::Verbatim, Variant::Corrected],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Svg,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

pub fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s.trim() {
        "direct" => Ok(Strategy::DirectSum),
        "paper" => Ok(Strategy::PaperClosedForm),
        "poisson" => Ok(Strategy::PoissonPipeline),
        other => Err(format!("unknown strategy '{other}' (direct|paper|poisson)")),
    }
}

pub fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::DirectSum => "direct",
        Strategy::PaperClosedForm => "paper",
        Strategy::PoissonPipeline => "poisson",
    }
}

pub fn parse_variant(s: &str) -> Result<VariantChoice, String> {
    match s.trim() {
        "verbatim" => Ok(VariantChoice::Verbatim),
        "corrected" => Ok(VariantChoice::Corrected),
        "both" => Ok(VariantChoice::Both),
        other => Err(format!("unknown variant '{other}' (verbatim|corrected|both)")),
    }
}

fn variant_name(v: VariantChoice) -> &'static str {
    match v {
        VariantChoice::Verbatim => "verbatim",
        VariantChoice::Corrected => "corrected",
        VariantChoice::Both => "both",
    }
}

pub fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s.trim() {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        "hybrid" => Ok(Spacing::Hybrid),
        other => Err(format!("unknown spacing '{other}' (linear|log|hybrid)")),
    }
}

fn spacing_name(s: Spacing) -> &'static str {
    match s {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
        Spacing::Hybrid => "hybrid",
    }
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s.trim() {
        "csv" => Ok(Format::Csv),
        "svg" => Ok(Format::Svg),
        "both" => Ok(Format::Both),
        other => Err(format!("unknown format '{other}' (csv|svg|both)")),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Svg => "svg",
        Format::Both => "both",
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

/// Every setting, each optional, as read from one source.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Settings {
    /// Oscillator frequency, > 0 [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Nonlinearity `k = δ²/λ`; k < 0 is the physical regime.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "k_list")]
    pub k: Option<f64>,
    /// Comma-separated k values, one output column each.
    #[arg(long = "k-list", value_delimiter = ',', allow_hyphen_values = true)]
    pub k_list: Option<Vec<f64>>,
    /// Mass scale of `m(r) = λ/(1+δ²r²)`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Boltzmann constant.
    #[arg(long, allow_hyphen_values = true)]
    pub kb: Option<f64>,
    /// Magnetic quantum number [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    /// Highest radial quantum number for spectrum and wavefunction [default: 10].
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
    /// Truncation bound of the state sum.
    #[arg(long = "N")]
    pub truncation: Option<u32>,
    /// Lowest temperature [default: 0.1].
    #[arg(long = "T-min", allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    /// Highest temperature [default: 50].
    #[arg(long = "T-max", allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Number of temperatures [default: 500].
    #[arg(long = "T-count")]
    pub t_count: Option<usize>,
    /// linear, log or hybrid (log below T = 1, linear above) [default: hybrid].
    #[arg(long = "T-spacing", value_parser = parse_spacing)]
    pub t_spacing: Option<Spacing>,
    /// direct, paper or poisson [default: direct].
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<Strategy>,
    /// Closed-form variant for the paper strategy: verbatim, corrected or both [default: corrected].
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<VariantChoice>,
    /// Sum over levels that are not increasing in `n_r`.
    #[arg(long = "accept-truncation", num_args = 0..=1, default_missing_value = "true", value_parser = parse_bool)]
    pub accept_truncation: Option<bool>,
    /// Output file, or directory when several tables are written.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, svg or both [default: csv].
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

impl Settings {
    /// Reads `key = value` lines; blank lines and `#` lines are skipped.
    pub fn parse_file(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}", i + 1), format!("expected key = value, got '{line}'")))?;
            s.set(key.trim(), value.trim())?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| CliError::config(key, format!("'{v}': {e}")))
        }
        fn wrap<T>(key: &str, r: Result<T, String>) -> Result<T, CliError> {
            r.map_err(|e| CliError::config(key, e))
        }
        match key {
            "alpha" => self.alpha = Some(num(key, value)?),
            "k" => self.k = Some(num(key, value)?),
            "k_list" => {
                let list = value.split(',').map(|v| num(key, v.trim())).collect::<Result<Vec<f64>, _>>()?;
                self.k_list = Some(list);
            }
            "lambda" => self.lambda = Some(num(key, value)?),
            "kb" => self.kb = Some(num(key, value)?),
            "m" => self.m = Some(num(key, value)?),
            "n_max" => self.n_max = Some(num(key, value)?),
            "N" => self.truncation = Some(num(key, value)?),
            "T_min" => self.t_min = Some(num(key, value)?),
            "T_max" => self.t_max = Some(num(key, value)?),
            "T_count" => self.t_count = Some(num(key, value)?),
            "T_spacing" => self.t_spacing = Some(wrap(key, parse_spacing(value))?),
            "strategy" => self.strategy = Some(wrap(key, parse_strategy(value))?),
            "variant" => self.variant = Some(wrap(key, parse_variant(value))?),
            "accept_truncation" => self.accept_truncation = Some(wrap(key, parse_bool(value))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(wrap(key, parse_format(value))?),
            // written by the metadata echo
            "command" | "version" | "note" => {}
            other => return Err(CliError::config(other, "unknown key")),
        }
        Ok(())
    }

    /// `self` with every field that `over` sets replaced. `k` and `k_list`
    /// are one setting.
    pub fn overlay(mut self, over: Settings) -> Settings {
        macro_rules! take {
            ($($f:ident),*) => {$( if over.$f.is_some() { self.$f = over.$f; } )*};
        }
        if over.k.is_some() || over.k_list.is_some() {
            self.k = over.k;
            self.k_list = over.k_list;
        }
        take!(alpha, lambda, kb, m, n_max, truncation, t_min, t_max, t_count, t_spacing, strategy, variant,
              accept_truncation, out, format);
        self
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub lambda: f64,
    pub kb: f64,
    pub k_list: Vec<f64>,
    pub m: i32,
    pub n_max: u32,
    pub truncation: u32,
    pub grid: TemperatureGrid,
    pub strategy: Strategy,
    pub variant: VariantChoice,
    pub accept_truncation: bool,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// True when `k_list` was not given by any source.
    pub default_k_list: bool,
}

impl RunConfig {
    pub fn resolve(command: Command, s: Settings) -> Result<Self, CliError> {
        let grid_default = TemperatureGrid::default();
        let default_k_list = s.k.is_none() && s.k_list.is_none();
        let k_list = match (s.k, s.k_list) {
            (Some(k), _) => vec![k],
            (None, Some(list)) => list,
            (None, None) => DEFAULT_K_LIST.to_vec(),
        };
        let cfg = RunConfig {
            command,
            alpha: s.alpha.unwrap_or(1.0),
            lambda: s.lambda.unwrap_or(1.0),
            kb: s.kb.unwrap_or(1.0),
            k_list,
            m: s.m.unwrap_or(1),
            n_max: s.n_max.unwrap_or(10),
            truncation: s.truncation.unwrap_or(DEFAULT_TRUNCATION),
            grid: TemperatureGrid {
                min: s.t_min.unwrap_or(grid_default.min),
                max: s.t_max.unwrap_or(grid_default.max),
                count: s.t_count.unwrap_or(grid_default.count),
                spacing: s.t_spacing.unwrap_or(grid_default.spacing),
            },
            strategy: s.strategy.unwrap_or_default(),
            variant: s.variant.unwrap_or_default(),
            accept_truncation: s.accept_truncation.unwrap_or(false),
            output_path: s.out,
            format: s.format.unwrap_or_default(),
            default_k_list,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::config(field, format!("{v} must be finite and > 0")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("lambda", self.lambda)?;
        positive("kb", self.kb)?;
        if self.k_list.is_empty() {
            return Err(CliError::config("k_list", "must not be empty"));
        }
        for &k in &self.k_list {
            self.params(k)?;
        }
        if self.m.unsigned_abs() > 10_000 {
            return Err(CliError::config("m", format!("|{}| must be ≤ 10000", self.m)));
        }
        if self.n_max > 100_000 {
            return Err(CliError::config("n_max", format!("{} must be ≤ 100000", self.n_max)));
        }
        if self.truncation < 1 {
            return Err(CliError::config("N", "must be ≥ 1"));
        }
        TemperatureGrid::new(self.grid.min, self.grid.max, self.grid.count, self.grid.spacing)
            .map_err(|e| CliError::config("T_grid", e))?;
        if self.strategy == Strategy::PaperClosedForm {
            if let Some(k) = self.k_list.iter().find(|&&k| !(k < 0.0)) {
                return Err(CliError::config("k", format!("{k}: the paper strategy needs k < 0")));
            }
        }
        if self.output_path.is_none() && self.format.svg() && self.command != Command::Figures {
            return Err(CliError::config("format", "svg output needs --out"));
        }
        Ok(())
    }

    pub fn params(&self, k: f64) -> Result<SystemParams, CliError> {
        SystemParams::new(self.alpha, k, self.lambda)
            .and_then(|p| p.with_kb(self.kb))
            .map_err(|e| CliError::config("k", e))
    }

    /// `(key, value)` pairs that re-create this configuration when written
    /// as a config file.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = self.k_list.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        let delta_sq = self.k_list.iter().map(|k| (k * self.lambda).to_string()).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("command", self.command.name().to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("alpha", self.alpha.to_string()),
            ("lambda", self.lambda.to_string()),
            ("kb", self.kb.to_string()),
            ("k_list", list),
            ("note", format!("delta_sq = k*lambda = {delta_sq}")),
            ("m", self.m.to_string()),
            ("n_max", self.n_max.to_string()),
            ("N", self.truncation.to_string()),
            ("T_min", self.grid.min.to_string()),
            ("T_max", self.grid.max.to_string()),
            ("T_count", self.grid.count.to_string()),
            ("T_spacing", spacing_name(self.grid.spacing).to_string()),
            ("strategy", strategy_name(self.strategy).to_string()),
            ("variant", variant_name(self.variant).to_string()),
            ("accept_truncation", self.accept_truncation.to_string()),
            ("format", format_name(self.format).to_string()),
        ];
        if self.default_k_list {
            out.push(("note", "k_list is a default choice; the reference figures do not state their k values".into()));
        }
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Settings::parse_file("# comment\nalpha = 2\nk_list = -0.1, -0.4\nN=300\n\nT_spacing = log\n").unwrap();
        assert_eq!(file.alpha, Some(2.0));
        assert_eq!(file.k_list, Some(vec![-0.1, -0.4]));
        let flags = Settings { k: Some(-0.5), truncation: Some(400), ..Default::default() };
        let cfg = RunConfig::resolve(Command::Thermo, Settings::default().overlay(file).overlay(flags)).unwrap();
        assert_eq!(cfg.alpha, 2.0);
        assert_eq!(cfg.k_list, vec![-0.5]);
        assert_eq!(cfg.truncation, 400);
        assert_eq!(cfg.grid.spacing, Spacing::Log);
        assert!(!cfg.default_k_list);
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(Command::Figures, Settings::default()).unwrap();
        assert_eq!(cfg.k_list, DEFAULT_K_LIST.to_vec());
        assert_eq!((cfg.m, cfg.truncation, cfg.grid.count), (1, 500, 500));
        assert!(cfg.default_k_list);
    }

    #[test]
    fn echo_round_trips() {
        let flags = Settings { alpha: Some(1.5), k_list: Some(vec![-0.25, -0.5]), m: Some(2), ..Default::default() };
        let cfg = RunConfig::resolve(Command::Thermo, flags).unwrap();
        let text: String = cfg.echo().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let again = RunConfig::resolve(Command::Thermo, Settings::parse_file(&text).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejections() {
        let bad = |s: Settings| RunConfig::resolve(Command::Thermo, s).unwrap_err();
        assert!(matches!(bad(Settings { alpha: Some(-1.0), ..Default::default() }), CliError::Config { field, .. } if field == "alpha"));
        assert!(matches!(bad(Settings { t_min: Some(5.0), t_max: Some(1.0), ..Default::default() }), CliError::Config { .. }));
        let paper = Settings { strategy: Some(Strategy::PaperClosedForm), k: Some(0.1), ..Default::default() };
        assert_eq!(bad(paper).exit_code(), 2);
        assert!(Settings::parse_file("alpha 1").is_err());
        assert!(Settings::parse_file("colour = red").is_err());
        assert!(Settings::parse_file("m = 1.5").is_err());
    }
}
