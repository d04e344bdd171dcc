//! `key = value` run configuration.
//!
//! Every key is optional. Defaults are the reference phase-diagram
//! setup: `omega1 = 10`, `omega2 = 20`, `tau1 = 0.01`, `tau2 = 0.1`,
//! `T_h = 20`, `T_c = 1`, `gamma0 = 1`, `sigma = 0`, `T_h` grid log-spaced on
//! `[5, 500]`, `sigma_bar` grid on `[0, 0.7]`, `T_c` grid on `[0.1, 20]`, all
//! with 200 points.
//!
//! | key | meaning |
//! |-----|---------|
//! | `omega1`, `omega2`, `tau1`, `tau2`, `T_h`, `T_c`, `gamma0`, `sigma` | engine parameters |
//! | `sigma_bar` | friction as `σ/τ₂`; exclusive with `sigma` |
//! | `<axis>_min`, `<axis>_max`, `<axis>_n`, `<axis>_scale` | grids for `T_h`, `sigma_bar`, `T_c` |
//! | `tol` | `τ_q` search tolerance (default 1e-10) |
//! | `equal_gamma` | use the hot-bath rate on both branches (default false) |
//! | `threads` | sweep threads, 0 = automatic (default 0) |
//! | `oracle_points` | τ samples per oracle comparison (default 200) |
//! | `oracle_rtol` | oracle acceptance threshold (default 1e-5) |
//! | `output_csv`, `output_json` | output paths (default stdout) |
//! | `format` | `json` or `csv` for single records (default json) |

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::RateModel;
use crate::lgi;
use crate::qubit::EngineParams;
use crate::sweep::{Axis, AxisName, AxisScale, SweepOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue { line: usize, key: String, reason: String },

    #[error("line {line}: `{key}` has no value")]
    MissingRequired { line: usize, key: String },
}

impl ConfigError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::UnknownKey { .. } => "unknown_key",
            ConfigError::BadValue { .. } => "bad_value",
            ConfigError::MissingRequired { .. } => "missing_required",
        }
    }

    pub fn line(&self) -> usize {
        match self {
            ConfigError::UnknownKey { line, .. }
            | ConfigError::BadValue { line, .. }
            | ConfigError::MissingRequired { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("expected json or csv, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub scale: AxisScale,
}

impl GridSpec {
    pub fn axis(&self, name: AxisName) -> crate::Result<Axis> {
        Axis::with_scale(name, self.min, self.max, self.n, self.scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `sigma` already reflects `sigma_bar` when that key was given.
    pub params: EngineParams,
    pub t_hot_grid: GridSpec,
    pub sigma_bar_grid: GridSpec,
    pub t_cold_grid: GridSpec,
    pub tol: f64,
    pub equal_gamma: bool,
    pub threads: usize,
    pub oracle_points: usize,
    pub oracle_rtol: f64,
    pub output_csv: Option<PathBuf>,
    pub output_json: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: EngineParams::baseline(),
            t_hot_grid: GridSpec { min: 5.0, max: 500.0, n: 200, scale: AxisScale::Log },
            sigma_bar_grid: GridSpec { min: 0.0, max: 0.7, n: 200, scale: AxisScale::Linear },
            t_cold_grid: GridSpec { min: 0.1, max: 20.0, n: 200, scale: AxisScale::Linear },
            tol: lgi::DEFAULT_TOL,
            equal_gamma: false,
            threads: 0,
            oracle_points: 200,
            oracle_rtol: 1e-5,
            output_csv: None,
            output_json: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn rate_model(&self) -> RateModel {
        RateModel::from_equal_gamma(self.equal_gamma)
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions { rate_model: self.rate_model(), tol: self.tol, threads: self.threads }
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        parse_config(s)
    }
}

fn bad(line: usize, key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { line, key: key.to_string(), reason: reason.into() }
}

fn number(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = raw.parse().map_err(|_| bad(line, key, format!("`{raw}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(line, key, "must be finite"))
    }
}

fn positive(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v = number(line, key, raw)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(bad(line, key, format!("must be positive, got {v}")))
    }
}

fn non_negative(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v = number(line, key, raw)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(bad(line, key, format!("must be >= 0, got {v}")))
    }
}

fn count(line: usize, key: &str, raw: &str) -> Result<usize, ConfigError> {
    raw.parse().map_err(|_| bad(line, key, format!("`{raw}` is not a non-negative integer")))
}

fn flag(line: usize, key: &str, raw: &str) -> Result<bool, ConfigError> {
    match raw {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(bad(line, key, format!("`{raw}` is not a boolean"))),
    }
}

/// Parse and validate a configuration. Later lines override earlier ones.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut sigma_line = None;
    let mut sigma_bar: Option<(usize, f64)> = None;
    // line of the most recent assignment, for cross-field messages
    let mut seen = std::collections::HashMap::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(bad(line, content, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(ConfigError::MissingRequired { line, key: key.to_string() });
        }
        let p = &mut cfg.params;
        match key {
            "omega1" => p.omega1 = positive(line, key, value)?,
            "omega2" => p.omega2 = positive(line, key, value)?,
            "tau1" => p.tau1 = positive(line, key, value)?,
            "tau2" => p.tau2 = positive(line, key, value)?,
            "T_h" => p.t_hot = positive(line, key, value)?,
            "T_c" => p.t_cold = positive(line, key, value)?,
            "gamma0" => p.gamma0 = positive(line, key, value)?,
            "sigma" => {
                p.sigma = non_negative(line, key, value)?;
                sigma_line = Some(line);
            }
            "sigma_bar" => sigma_bar = Some((line, non_negative(line, key, value)?)),
            "tol" => cfg.tol = positive(line, key, value)?,
            "equal_gamma" => cfg.equal_gamma = flag(line, key, value)?,
            "threads" => cfg.threads = count(line, key, value)?,
            "oracle_points" => {
                cfg.oracle_points = count(line, key, value)?;
                if cfg.oracle_points < 2 {
                    return Err(bad(line, key, "need at least 2 points"));
                }
            }
            "oracle_rtol" => cfg.oracle_rtol = positive(line, key, value)?,
            "output_csv" => cfg.output_csv = Some(PathBuf::from(value)),
            "output_json" => cfg.output_json = Some(PathBuf::from(value)),
            "format" => cfg.format = value.parse().map_err(|e: String| bad(line, key, e))?,
            _ => grid_key(&mut cfg, line, key, value)?,
        }
        seen.insert(key.to_string(), line);
    }

    if let Some((line, sb)) = sigma_bar {
        if sigma_line.is_some() {
            return Err(bad(line, "sigma_bar", "`sigma` and `sigma_bar` are mutually exclusive"));
        }
        cfg.params = cfg.params.with_sigma_bar(sb);
    }

    let line_of = |a: &str, b: &str| seen.get(a).copied().max(seen.get(b).copied()).unwrap_or(0);
    let p = &cfg.params;
    if p.omega1 >= p.omega2 {
        let line = line_of("omega1", "omega2");
        let key = if seen.get("omega1").copied().unwrap_or(0) >= seen.get("omega2").copied().unwrap_or(0) {
            "omega1"
        } else {
            "omega2"
        };
        return Err(bad(line, key, format!("need omega1 < omega2, got {} >= {}", p.omega1, p.omega2)));
    }
    if p.t_hot <= p.t_cold {
        let line = line_of("T_h", "T_c");
        let key = if seen.get("T_h").copied().unwrap_or(0) >= seen.get("T_c").copied().unwrap_or(0) {
            "T_h"
        } else {
            "T_c"
        };
        return Err(bad(line, key, format!("need T_h > T_c, got {} <= {}", p.t_hot, p.t_cold)));
    }
    for (prefix, name, grid) in [
        ("T_h", AxisName::THot, cfg.t_hot_grid),
        ("sigma_bar", AxisName::SigmaBar, cfg.sigma_bar_grid),
        ("T_c", AxisName::TCold, cfg.t_cold_grid),
    ] {
        if let Err(e) = grid.axis(name) {
            let line = ["_min", "_max", "_n", "_scale"]
                .iter()
                .filter_map(|s| seen.get(&format!("{prefix}{s}")).copied())
                .max()
                .unwrap_or(0);
            return Err(bad(line, &format!("{prefix}_grid"), e.to_string()));
        }
    }
    Ok(cfg)
}

fn grid_key(cfg: &mut RunConfig, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
    let unknown = || ConfigError::UnknownKey { line, key: key.to_string() };
    let (prefix, field) = key.rsplit_once('_').ok_or_else(unknown)?;
    let grid = match prefix {
        "T_h" => &mut cfg.t_hot_grid,
        "sigma_bar" => &mut cfg.sigma_bar_grid,
        "T_c" => &mut cfg.t_cold_grid,
        _ => return Err(unknown()),
    };
    match field {
        "min" => grid.min = number(line, key, value)?,
        "max" => grid.max = number(line, key, value)?,
        "n" => grid.n = count(line, key, value)?,
        "scale" => grid.scale = value.parse().map_err(|e: crate::Error| bad(line, key, e.to_string()))?,
        _ => return Err(unknown()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        assert_eq!(parse_config("# only a comment\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn baseline_parameters_from_text() {
        let cfg = parse_config("omega1 = 10\nomega2 = 20\ntau1 = 0.01\ntau2 = 0.1\nT_c = 1").unwrap();
        let p = cfg.params;
        assert_eq!((p.omega1, p.omega2, p.tau1, p.tau2, p.t_cold), (10.0, 20.0, 0.01, 0.1, 1.0));
    }

    #[test]
    fn negative_frequency_is_bad_value_on_line_one() {
        match parse_config("omega1 = -3") {
            Err(ConfigError::BadValue { line: 1, key, .. }) => assert_eq!(key, "omega1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_kinds() {
        let e = parse_config("T_c = 1\nfoo = 2").unwrap_err();
        assert_eq!(e, ConfigError::UnknownKey { line: 2, key: "foo".into() });
        assert_eq!(e.kind(), "unknown_key");
        let e = parse_config("\n\ntau1 =  # nothing").unwrap_err();
        assert_eq!(e, ConfigError::MissingRequired { line: 3, key: "tau1".into() });
        assert!(matches!(parse_config("tau2 = abc"), Err(ConfigError::BadValue { line: 1, .. })));
        assert!(matches!(parse_config("T_h_n = 1"), Err(ConfigError::BadValue { line: 1, .. })));
        assert!(matches!(parse_config("T_h_foo = 1"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(parse_config("just text"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn cross_field_errors_point_at_the_later_line() {
        let e = parse_config("omega2 = 20\nomega1 = 30").unwrap_err();
        assert!(matches!(e, ConfigError::BadValue { line: 2, ref key, .. } if key == "omega1"));
        let e = parse_config("T_c = 50\n").unwrap_err();
        assert!(matches!(e, ConfigError::BadValue { line: 1, ref key, .. } if key == "T_c"));
        let e = parse_config("sigma = 0.1\nsigma_bar = 0.5").unwrap_err();
        assert_eq!(e.line(), 2);
    }

    #[test]
    fn flags_and_grids() {
        let cfg = parse_config(
            "sigma_bar = 0.5\nequal_gamma = true\nthreads = 3\nT_c_min = 0.5\nT_c_max = 10\nT_c_n = 40\nT_h_scale = linear\nformat = csv",
        )
        .unwrap();
        assert!((cfg.params.sigma - 0.05).abs() < 1e-15);
        assert_eq!(cfg.rate_model(), RateModel::EqualGamma);
        assert_eq!(cfg.sweep_options().threads, 3);
        assert_eq!(cfg.t_cold_grid, GridSpec { min: 0.5, max: 10.0, n: 40, scale: AxisScale::Linear });
        assert_eq!(cfg.t_hot_grid.scale, AxisScale::Linear);
        assert_eq!(cfg.format, OutputFormat::Csv);
    }

    #[test]
    fn converts_into_crate_error() {
        let e: crate::Error = parse_config("x = 1").unwrap_err().into();
        assert_eq!(e.kind(), "unknown_key");
    }
}
