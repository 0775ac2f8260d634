//! Experiment runner behind the `landau-lab` binary.
//!
//! Settings come from built-in defaults, then an optional `key = value`
//! file, then flags. Every output starts with a meta record holding the
//! resolved configuration, so a run can be replayed from its own output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{load_config, parse_config, Command, Format, RunConfig, Settings};
pub use error::{CliError, Result};

pub const THREADS_ENV: &str = "LANDAU_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "landau-lab", version, about = "Propagator, maximal-function, rate and Sobolev-norm experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Sub {
    /// `x,t,re,im` samples of the propagated function.
    Propagate,
    /// `x,maximal` over a geometric time grid.
    Maximal,
    /// Fitted convergence exponents along a vertical line or power curve.
    Rate,
    /// Pinned-time sweep of the divergence family.
    Counterexample,
    /// Root, first-order integral and tail bound of the sharpness family.
    Sharpness,
    /// Sobolev norm, Fourier-side norm and their ratio.
    Sobolev,
    /// Dyadic pieces of a spectrum.
    LpDecompose,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Propagate => Command::Propagate,
            Sub::Maximal => Command::Maximal,
            Sub::Rate => Command::Rate,
            Sub::Counterexample => Command::Counterexample,
            Sub::Sharpness => Command::Sharpness,
            Sub::Sobolev => Command::Sobolev,
            Sub::LpDecompose => Command::LpDecompose,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long = "t-min", global = true, allow_hyphen_values = true)]
    pub t_min: Option<String>,
    #[arg(long = "t-max", global = true, allow_hyphen_values = true)]
    pub t_max: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ratio: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long = "R", global = true, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Catalog entry: gaussian, bump, indicator, json:PATH or csv:PATH.
    #[arg(long, global = true)]
    pub data: Option<String>,
    /// vertical or power.
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Comma-separated evaluation points.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Extra regularity of the data; `inf` for Schwartz data.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long = "n-x", global = true, allow_hyphen_values = true)]
    pub n_x: Option<String>,
    #[arg(long = "k-max", global = true, allow_hyphen_values = true)]
    pub k_max: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let pairs = [
            ("a", &self.a),
            ("gamma", &self.gamma),
            ("t-min", &self.t_min),
            ("t-max", &self.t_max),
            ("ratio", &self.ratio),
            ("beta", &self.beta),
            ("theta", &self.theta),
            ("R", &self.r),
            ("s", &self.s),
            ("p", &self.p),
            ("data", &self.data),
            ("curve", &self.curve),
            ("x", &self.x),
            ("delta", &self.delta),
            ("n-x", &self.n_x),
            ("k-max", &self.k_max),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v)?;
            }
        }
        if let Some(f) = &self.format {
            s.set("format", f)?;
        }
        s.output_path = self.out.clone();
        Ok(s)
    }
}

/// Resolves defaults, config file and flags into one configuration.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.flags.config {
        Some(path) => load_config(path)?,
        None => Settings::default(),
    };
    let mut flags = cli.flags.settings()?;
    flags.command = Some(cli.command.into());
    RunConfig::from_settings(file.overlay(flags))
}

/// Parses `LANDAU_LAB_THREADS`.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Threads(v.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_are_global() {
        let cli = Cli::try_parse_from(["landau-lab", "--gamma", "3", "sharpness", "--a", "-1"]).unwrap();
        let cfg = resolve(&cli).unwrap();
        assert_eq!(cfg.params["gamma"], "3");
        assert_eq!(cfg.params["a"], "-1");
        assert_eq!(cfg.command, Command::Sharpness);
    }

    #[test]
    fn threads_env_parsing() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("4")).unwrap(), Some(4));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("many")).is_err());
    }
}
