// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over the `size × target × p` grid.
//!
//! Rows are computed independently and emitted in grid order:
//!
//! * line: `size, target, p, sigma, nu`
//! * cycle: `size, target, p, mixing_time, mixed, certified, horizon, final_distance`
//! * hypercube: `size, target, p, peak_time, Ph_at_peak, Ph_concurrent_total`

use serde_json::json;

use crate::error::{Result, WalkError};
use crate::evolution::NoiseTarget;
use crate::observables::{first_peak, std_dev, uniform_window_distance};

use super::config::{space_for, ExperimentConfig, TopologyKind};
use super::output::{Cell, Table};
use super::presets::{map_jobs, Outcome};
use super::runner::{
    concurrent_halts, distribution_series, final_distribution, uniform_mixing, Point,
};

fn columns(topology: TopologyKind) -> Vec<String> {
    let tail: &[&str] = match topology {
        TopologyKind::Line => &["sigma", "nu"],
        TopologyKind::Cycle => &[
            "mixing_time",
            "mixed",
            "certified",
            "horizon",
            "final_distance",
        ],
        TopologyKind::Hypercube => &["peak_time", "Ph_at_peak", "Ph_concurrent_total"],
    };
    ["size", "target", "p"]
        .iter()
        .chain(tail)
        .map(|s| s.to_string())
        .collect()
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Outcome> {
    let mut jobs: Vec<(usize, NoiseTarget, f64)> = Vec::new();
    for &n in &config.sizes {
        for &t in &config.targets {
            for &p in &config.p_grid {
                jobs.push((n, t, p));
            }
        }
    }
    let max_dim = config
        .sizes
        .iter()
        .map(|&n| space_for(config.topology, n).map(|s| s.dim()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let rows = map_jobs(&jobs, max_dim, |&(n, target, p)| {
        sweep_point(config, n, target, p).map_err(|e| WalkError::GridPoint {
            point: format!("size={n} target={} p={p}", target.name()),
            source: Box::new(e),
        })
    })?;
    let mut table = Table::new(columns(config.topology));
    let mut warnings = Vec::new();
    for (row, &(n, target, p)) in rows.into_iter().zip(&jobs) {
        if config.topology == TopologyKind::Cycle && row[4] == Cell::Bool(false) {
            warnings.push(format!(
                "size={n} target={} p={p}: not mixed within the horizon",
                target.name()
            ));
        }
        table.push(row);
    }
    Ok(Outcome {
        table,
        summary: json!({ "points": jobs.len() }),
        warnings,
    })
}

fn sweep_point(
    config: &ExperimentConfig,
    n: usize,
    target: NoiseTarget,
    p: f64,
) -> Result<Vec<Cell>> {
    let space = space_for(config.topology, n)?;
    let coin = config.coin.build(space.coin_degree())?;
    let point = Point::new(config, &space, &coin, target, p)?;
    let mut row: Vec<Cell> = vec![n.into(), target.name().into(), p.into()];
    match config.topology {
        TopologyKind::Line => {
            let d = final_distribution(&point, config.steps)?;
            row.push(std_dev(&d, &space)?.into());
            row.push(uniform_window_distance(&d, &space, config.steps)?.into());
        }
        TopologyKind::Cycle => {
            let horizon = config.horizon_for(n);
            let r = uniform_mixing(&point, config.epsilon, horizon)?;
            row.push(r.value_or_lower_bound().into());
            row.push(r.mixed.into());
            row.push(r.certified.into());
            row.push(r.horizon.into());
            row.push((*r.distance_curve.last().unwrap_or(&f64::NAN)).into());
        }
        TopologyKind::Hypercube => {
            let goal = space.antipode();
            let pure = Point::new(config, &space, &coin, NoiseTarget::None, 0.0)?;
            let pure_curve: Vec<f64> = distribution_series(&pure, config.steps)?
                .iter()
                .map(|d| d[goal])
                .collect();
            let t_peak = first_peak(&pure_curve).map(|(t, _)| t);
            let value = match t_peak {
                Some(t) if point.noise.is_noiseless() => pure_curve[t],
                Some(t) => distribution_series(&point, t)?[t][goal],
                None => f64::NAN,
            };
            let total =
                concurrent_halts(&point, goal, config.steps)?.map_or(f64::NAN, |h| h.iter().sum());
            row.push(t_peak.map_or(Cell::Int(-1), Cell::from));
            row.push(value.into());
            row.push(total.into());
        }
    }
    Ok(row)
}
