// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error,
//! 3 resource cap exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Result, WalkError};

use super::config::{ConfigLayer, GridSpec};
use super::execute;

#[derive(Debug, Parser)]
#[command(
    name = "coinwalk",
    version,
    about = "Coined quantum walks under decoherence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named experiment.
    Preset {
        /// line-dist | line-sigma | line-uniformity | cycle-mixing | hypercube-hitting
        name: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run one row per (size, target, p) grid point.
    Sweep {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Resolve and validate a configuration without running it.
    ValidateConfig {
        /// Validate as this preset.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Config file (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// line | cycle | hypercube
    #[arg(long)]
    pub topology: Option<String>,
    /// Line window half-width, cycle length or hypercube dimension.
    #[arg(long)]
    pub size: Option<usize>,
    /// Size grid for sweeps, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "size")]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// hadamard | rotation:THETA | grover | file:PATH
    #[arg(long)]
    pub coin: Option<String>,
    /// none | coin | particle | both | imperfect-coin
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, conflicts_with = "p_grid")]
    pub p: Option<f64>,
    /// a:b:n, n evenly spaced rates from a to b
    #[arg(long)]
    pub p_grid: Option<String>,
    /// pure | density | trajectory
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn layer(&self) -> ConfigLayer {
        let mut l = ConfigLayer::default();
        l.space.topology = self.topology.clone();
        l.space.size = self.size;
        l.space.sizes = self.sizes.clone();
        l.space.coin = self.coin.clone();
        l.noise.target = self.noise.clone();
        l.noise.p = self.p;
        l.noise.p_grid = self.p_grid.clone().map(GridSpec::Range);
        l.run.engine = self.engine.clone();
        l.run.steps = self.steps;
        l.run.trajectories = self.trajectories;
        l.run.epsilon = self.epsilon;
        l.run.horizon = self.horizon;
        l.run.seed = self.seed;
        l.run.threads = self.threads;
        l.output.path = self.out.clone();
        l
    }

    /// File layer, then flags.
    pub fn merged(&self) -> Result<ConfigLayer> {
        let base = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        Ok(base.overlay(&self.layer()))
    }
}

/// Exit code for an error.
pub fn exit_code(err: &WalkError) -> i32 {
    match err.root() {
        WalkError::ResourceCap { .. } => 3,
        WalkError::Config { .. } | WalkError::Io { .. } => 2,
        _ => 1,
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Preset { name, args } => {
            let mut layer = args.merged()?;
            layer.preset = Some(name.clone());
            let config = layer.resolve()?;
            report(execute(&config, &format!("preset {name}"))?);
        }
        Command::Sweep { args } => {
            let mut layer = args.merged()?;
            layer.preset = None;
            let config = layer.resolve()?;
            report(execute(&config, "sweep")?);
        }
        Command::ValidateConfig { preset, args } => {
            let mut layer = args.merged()?;
            if preset.is_some() {
                layer.preset = preset.clone();
            }
            let config = layer.resolve()?;
            let text = serde_json::json!({ "valid": true, "config_sha256": config.digest(), "config": config });
            println!(
                "{}",
                serde_json::to_string_pretty(&text).expect("plain data serializes")
            );
        }
    }
    Ok(())
}

fn report(record: super::RunRecord) {
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    if record.config.out.is_none() {
        eprintln!("{}", record.to_json());
    } else {
        eprintln!(
            "wrote {} ({:.2}s)",
            record
                .outputs
                .iter()
                .map(|o| o.path.as_str())
                .collect::<Vec<_>>()
                .join(", "),
            record.wall_clock_seconds
        );
    }
}
