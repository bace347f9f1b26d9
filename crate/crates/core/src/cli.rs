//! Command-line interface: every config key is also a flag; flags override
//! values loaded with `--config`.

use crate::config::SimConfig;
use crate::error::ConfigError;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "kdsim",
    about = "Spin-resolved two-photon electron diffraction in a focused standing light wave"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One simulation run with full file output
    Run(Overrides),
    /// Transverse resolution sweep at fixed box width
    SweepYPos(Overrides),
    /// Transverse resolution sweep at fixed momentum box
    SweepYMom(Overrides),
    /// Longitudinal resolution/box triangle study
    SweepX(Overrides),
    /// Paired runs with and without the longitudinal field component
    AblateLongitudinal(Overrides),
    /// Dump beam illustrations and vertex tables
    FieldDump(Overrides),
    /// Print the iteration cost of a config without running it
    Count(Overrides),
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// flat key = value config file applied before the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// box width along the laser axis, in wavelengths
    #[arg(long)]
    pub xw_lambda: Option<f64>,
    /// box width along the electron axis, in wavelengths
    #[arg(long)]
    pub yw_lambda: Option<f64>,
    #[arg(long)]
    pub kl: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub g0: Option<f64>,
    /// interaction duration
    #[arg(long = "t")]
    pub t_pulse: Option<f64>,
    #[arg(long)]
    pub k0: Option<f64>,
    /// zero the longitudinal field component
    #[arg(long)]
    pub no_longitudinal: bool,
    /// also accumulate the negative-energy final block
    #[arg(long)]
    pub negative_final: bool,
    /// single-threaded engine
    #[arg(long)]
    pub sequential: bool,
    /// worker threads for the parallel engine (0 = machine default)
    #[arg(long)]
    pub workers: Option<usize>,
    /// output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<SimConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => SimConfig::from_file(path)?,
            None => SimConfig::default(),
        };
        if let Some(v) = self.nx {
            cfg.n_x = v;
        }
        if let Some(v) = self.ny {
            cfg.n_y = v;
        }
        if let Some(v) = self.xw_lambda {
            cfg.x_w_lambda = v;
        }
        if let Some(v) = self.yw_lambda {
            cfg.y_w_lambda = v;
        }
        if let Some(v) = self.kl {
            cfg.k_l = v;
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.g0 {
            cfg.g0 = v;
        }
        if let Some(v) = self.t_pulse {
            cfg.t_pulse = v;
        }
        if let Some(v) = self.k0 {
            cfg.k0 = v;
        }
        if self.no_longitudinal {
            cfg.include_longitudinal = false;
        }
        if self.negative_final {
            cfg.compute_negative_final = true;
        }
        if self.sequential {
            cfg.sequential = true;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::parse_from([
            "kdsim",
            "run",
            "--ny",
            "31",
            "--yw-lambda",
            "40",
            "--sequential",
            "--out",
            "/tmp/x",
        ]);
        let Command::Run(ov) = cli.command else {
            panic!("expected run")
        };
        let cfg = ov.resolve().unwrap();
        assert_eq!(cfg.n_y, 31);
        assert_eq!(cfg.y_w_lambda, 40.0);
        assert!(cfg.sequential);
        assert_eq!(cfg.out_dir, PathBuf::from("/tmp/x"));
        // untouched keys keep their defaults
        assert_eq!(cfg.n_x, 15);
    }

    #[test]
    fn invalid_grid_is_rejected_at_resolve_time() {
        let cli = Cli::parse_from(["kdsim", "run", "--nx", "16"]);
        let Command::Run(ov) = cli.command else {
            panic!("expected run")
        };
        assert!(ov.resolve().is_err());
    }
}
