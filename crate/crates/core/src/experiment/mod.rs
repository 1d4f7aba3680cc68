// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Config-driven experiment runner: presets, sweeps, CSV output and run
//! records.

pub mod cli;
pub mod config;
pub mod output;
pub mod presets;
pub mod runner;
pub mod sweep;

use std::time::Instant;

use crate::error::{Result, WalkError};

pub use config::{
    CoinSpec, ConfigLayer, Engine, EngineChoice, ExperimentConfig, GridSpec, TopologyKind,
};
pub use output::{Cell, RunRecord, Table};
pub use presets::{Outcome, Preset};
pub use sweep::run_sweep;

/// Computes the table for `config` on a pool of `config.threads` workers.
pub fn compute(config: &ExperimentConfig) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| WalkError::config("threads", e.to_string()))?;
    pool.install(|| match config.preset {
        Some(p) => p.run(config),
        None => run_sweep(config),
    })
}

/// Runs `config`, writes the CSV (to `config.out` or stdout) and returns the
/// run record. The record is also written next to the CSV when an output
/// path is set.
pub fn execute(config: &ExperimentConfig, command: &str) -> Result<RunRecord> {
    let start = Instant::now();
    let outcome = compute(config)?;
    let label = match config.preset {
        Some(p) => format!("preset={}", p.name()),
        None => "sweep".to_string(),
    };
    let csv = outcome.table.to_csv(config, &label);
    let digest = output::emit(config.out.as_deref(), &csv)?;
    let record = RunRecord {
        tool: "coinwalk",
        version: output::VERSION,
        command: command.to_string(),
        config: config.clone(),
        config_sha256: config.digest(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: vec![digest],
        summary: outcome.summary,
        warnings: outcome.warnings,
    };
    if let Some(out) = &config.out {
        let path = output::record_path(out);
        std::fs::write(&path, record.to_json())
            .map_err(|e| WalkError::io(path.display().to_string(), e))?;
    }
    Ok(record)
}
