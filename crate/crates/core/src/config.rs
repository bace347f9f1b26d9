//! Flat key-value run configuration, shared by the config-file parser and the
//! command-line flags.

use crate::error::ConfigError;
use std::path::PathBuf;

/// All knobs of a single simulation run. Defaults reproduce the reference
/// setup: a 15x15 grid over a 20-wavelength box, k_L = 0.1, eps = 0.1,
/// T = 1000, unit coupling, transverse electron momentum k_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_x: usize,
    pub n_y: usize,
    /// box widths in units of the laser wavelength
    pub x_w_lambda: f64,
    pub y_w_lambda: f64,
    pub k_l: f64,
    pub eps: f64,
    pub g0: f64,
    pub t_pulse: f64,
    pub k0: f64,
    pub include_longitudinal: bool,
    pub compute_negative_final: bool,
    pub sequential: bool,
    /// worker threads for the parallel path; 0 picks the machine default
    pub workers: usize,
    pub out_dir: PathBuf,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_x: 15,
            n_y: 15,
            x_w_lambda: 20.0,
            y_w_lambda: 20.0,
            k_l: 0.1,
            eps: 0.1,
            g0: 1.0,
            t_pulse: 1000.0,
            k0: 1.0,
            include_longitudinal: true,
            compute_negative_final: false,
            sequential: false,
            workers: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        }),
    }
}

impl SimConfig {
    /// Applies one `key = value` pair; `line` is only used in diagnostics.
    pub fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = |k: &str, v: &str| ConfigError::InvalidValue {
            line,
            key: k.to_string(),
            value: v.to_string(),
        };
        macro_rules! num {
            ($t:ty) => {
                value.parse::<$t>().map_err(|_| bad(key, value))?
            };
        }
        match key {
            "n_x" => self.n_x = num!(usize),
            "n_y" => self.n_y = num!(usize),
            "x_w_lambda" => self.x_w_lambda = num!(f64),
            "y_w_lambda" => self.y_w_lambda = num!(f64),
            "k_l" => self.k_l = num!(f64),
            "eps" => self.eps = num!(f64),
            "g0" => self.g0 = num!(f64),
            "t_pulse" => self.t_pulse = num!(f64),
            "k0" => self.k0 = num!(f64),
            "include_longitudinal" => self.include_longitudinal = parse_bool(line, key, value)?,
            "compute_negative_final" => self.compute_negative_final = parse_bool(line, key, value)?,
            "sequential" => self.sequential = parse_bool(line, key, value)?,
            "workers" => self.workers = num!(usize),
            "out_dir" => self.out_dir = PathBuf::from(value),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Parses a flat `key = value` file (`#` starts a comment) on top of the
    /// defaults.
    pub fn from_file(path: &std::path::Path) -> Result<SimConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = SimConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| ConfigError::Malformed {
                    line,
                    text: raw.to_string(),
                })?;
            self.apply(key.trim(), value.trim(), line)?;
        }
        Ok(())
    }

    /// Every effective value, one `key = value` per line, parseable by
    /// `apply_text`. Written as `config.resolved` next to the run outputs.
    pub fn resolved_text(&self) -> String {
        format!(
            "n_x = {}\nn_y = {}\nx_w_lambda = {}\ny_w_lambda = {}\nk_l = {}\neps = {}\n\
             g0 = {}\nt_pulse = {}\nk0 = {}\ninclude_longitudinal = {}\n\
             compute_negative_final = {}\nsequential = {}\nworkers = {}\nout_dir = {}\n",
            self.n_x,
            self.n_y,
            self.x_w_lambda,
            self.y_w_lambda,
            self.k_l,
            self.eps,
            self.g0,
            self.t_pulse,
            self.k0,
            self.include_longitudinal,
            self.compute_negative_final,
            self.sequential,
            self.workers,
            self.out_dir.display(),
        )
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_x < 3 || self.n_y < 3 {
            return Err(ConfigError::Invalid(format!(
                "grid must be at least 3x3, got {}x{}",
                self.n_x, self.n_y
            )));
        }
        if self.n_x % 2 == 0 || self.n_y % 2 == 0 {
            return Err(ConfigError::Invalid(format!(
                "grid counts must be odd, got {}x{}",
                self.n_x, self.n_y
            )));
        }
        for (name, v) in [
            ("x_w_lambda", self.x_w_lambda),
            ("y_w_lambda", self.y_w_lambda),
            ("k_l", self.k_l),
            ("eps", self.eps),
            ("t_pulse", self.t_pulse),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ConfigError::Invalid(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !self.g0.is_finite() || !self.k0.is_finite() {
            return Err(ConfigError::Invalid("g0 and k0 must be finite".to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_give_the_reference_setup() {
        let cfg = SimConfig::default();
        assert_eq!((cfg.n_x, cfg.n_y), (15, 15));
        assert_eq!(cfg.k_l, 0.1);
        assert_eq!(cfg.eps, 0.1);
        assert_eq!(cfg.t_pulse, 1000.0);
        assert_eq!(cfg.g0, 1.0);
        assert_eq!(cfg.k0, 1.0);
        assert!(cfg.include_longitudinal);
        cfg.validate().unwrap();
    }

    #[test]
    fn round_trips_through_resolved_text() {
        let mut cfg = SimConfig::default();
        cfg.n_y = 31;
        cfg.y_w_lambda = 40.0;
        cfg.sequential = true;
        cfg.workers = 3;
        let mut parsed = SimConfig::default();
        parsed.apply_text(&cfg.resolved_text()).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn parser_reports_positions_and_keys() {
        let mut cfg = SimConfig::default();
        let err = cfg.apply_text("n_x = 15\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 2, .. }));
        let err = cfg.apply_text("n_x 15\n").unwrap_err();
        assert!(matches!(err, ConfigError::Malformed { line: 1, .. }));
        let err = cfg.apply_text("eps = fast\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { line: 1, .. }));
        // comments and blank lines are fine
        cfg.apply_text("# comment\n\nn_x = 31 # trailing\n")
            .unwrap();
        assert_eq!(cfg.n_x, 31);
    }

    #[test]
    fn validation_rejects_even_and_tiny_grids() {
        let mut cfg = SimConfig::default();
        cfg.n_x = 16;
        assert!(cfg.validate().is_err());
        cfg.n_x = 1;
        assert!(cfg.validate().is_err());
        cfg.n_x = 15;
        cfg.t_pulse = 0.0;
        assert!(cfg.validate().is_err());
    }
}
