// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Named experiments with fixed output layouts.
//!
//! | preset            | columns                                                    |
//! |-------------------|------------------------------------------------------------|
//! | line-dist         | `x, P_quantum, P_classical` (sites of the parity of `T`)   |
//! | line-sigma        | `p, sigma_<target>...`                                     |
//! | line-uniformity   | `p, nu_<target>...`                                        |
//! | cycle-mixing      | `[N,] p, M_<target>..., mixed_<target>...`                 |
//! | hypercube-hitting | `t, Ph_oneshot_p<p>..., Ph_concurrent_p<p>..., Ph_classical` |

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::classical::{
    classical_evolve, classical_hitting_expectation, classical_line_distribution,
};
use crate::error::{Result, WalkError};
use crate::evolution::NoiseTarget;
use crate::hilbert::Distribution;
use crate::observables::{
    find_optimal_p, first_peak, fit_peak_decay, std_dev, uniform_window_distance,
};
use crate::space::WalkSpace;

use super::config::{
    space_for, ConfigLayer, ExperimentConfig, GridSpec, NoiseSection, RunSection, SpaceSection,
};
use super::output::{Cell, Table};
use super::runner::{
    concurrent_halts, distribution_series, final_distribution, uniform_mixing, Point,
};

/// Joint dimension above which grid points run one at a time, so that at
/// most one pair of density buffers is alive.
const SEQUENTIAL_DIMENSION: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    LineDist,
    LineSigma,
    LineUniformity,
    CycleMixing,
    HypercubeHitting,
}

/// Output of a preset or sweep.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub summary: serde_json::Value,
    pub warnings: Vec<String>,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::LineDist,
        Preset::LineSigma,
        Preset::LineUniformity,
        Preset::CycleMixing,
        Preset::HypercubeHitting,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::LineDist => "line-dist",
            Preset::LineSigma => "line-sigma",
            Preset::LineUniformity => "line-uniformity",
            Preset::CycleMixing => "cycle-mixing",
            Preset::HypercubeHitting => "hypercube-hitting",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
                WalkError::config(
                    "preset",
                    format!("unknown preset `{s}` ({})", names.join("|")),
                )
            })
    }

    /// Layer sitting between built-in defaults and the config file.
    pub fn defaults(&self) -> ConfigLayer {
        let (topology, size, steps, p_grid, epsilon) = match self {
            Preset::LineDist => ("line", None, Some(100), None, None),
            Preset::LineSigma => (
                "line",
                None,
                Some(100),
                Some(GridSpec::Range("0:1:21".into())),
                None,
            ),
            Preset::LineUniformity => (
                "line",
                None,
                Some(200),
                Some(GridSpec::Range("0:0.04:21".into())),
                None,
            ),
            Preset::CycleMixing => (
                "cycle",
                Some(30),
                None,
                // logarithmic, 1e-3 ..= 1 at four points per decade
                Some(GridSpec::Values(
                    (0..=12)
                        .map(|k| 10f64.powf(-3.0 + k as f64 / 4.0))
                        .collect(),
                )),
                Some(0.01),
            ),
            Preset::HypercubeHitting => (
                "hypercube",
                Some(9),
                Some(50),
                Some(GridSpec::Values(vec![0.0, 0.05, 0.1])),
                None,
            ),
        };
        ConfigLayer {
            preset: Some(self.name().into()),
            space: SpaceSection {
                topology: Some(topology.into()),
                size,
                ..Default::default()
            },
            noise: NoiseSection {
                p_grid,
                ..Default::default()
            },
            run: RunSection {
                steps,
                epsilon,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    /// Noise targets when none is configured.
    pub fn default_targets(&self, engine: Option<&str>) -> Vec<NoiseTarget> {
        use NoiseTarget::*;
        match self {
            Preset::LineDist => vec![None],
            Preset::HypercubeHitting => vec![Both],
            Preset::LineSigma if engine != Some("density") => {
                vec![Coin, Particle, Both, ImperfectCoin]
            }
            _ => vec![Coin, Particle, Both],
        }
    }

    pub(crate) fn check(&self, config: &ExperimentConfig) -> Result<()> {
        let single_size = config.sizes.len() == 1;
        match self {
            Preset::LineDist => {
                if config.p_grid.len() != 1 {
                    return Err(WalkError::config("p_grid", "line-dist takes a single rate"));
                }
                if config.targets.len() != 1 || !single_size {
                    return Err(WalkError::config(
                        "noise",
                        "line-dist takes a single target and size",
                    ));
                }
            }
            Preset::HypercubeHitting => {
                if config.targets.len() != 1 || !single_size {
                    return Err(WalkError::config(
                        "noise",
                        "hypercube-hitting takes a single target and size",
                    ));
                }
            }
            Preset::LineSigma | Preset::LineUniformity if !single_size => {
                return Err(WalkError::config(
                    "sizes",
                    format!("{} takes a single size", self.name()),
                ));
            }
            _ => {}
        }
        let need = match self {
            Preset::LineDist | Preset::LineSigma | Preset::LineUniformity => "line",
            Preset::CycleMixing => "cycle",
            Preset::HypercubeHitting => "hypercube",
        };
        if config.topology.name() != need {
            return Err(WalkError::config(
                "topology",
                format!(
                    "{} runs on a {need}, not a {}",
                    self.name(),
                    config.topology.name()
                ),
            ));
        }
        Ok(())
    }

    pub fn run(&self, config: &ExperimentConfig) -> Result<Outcome> {
        match self {
            Preset::LineDist => line_dist(config),
            Preset::LineSigma => line_scan(config, "sigma", |d, space, _| std_dev(d, space)),
            Preset::LineUniformity => line_uniformity(config),
            Preset::CycleMixing => cycle_mixing(config),
            Preset::HypercubeHitting => hypercube_hitting(config),
        }
    }
}

/// Column stem for a target, `imperfect-coin` → `imperfect_coin`.
pub(crate) fn target_stem(t: NoiseTarget) -> String {
    t.name().replace('-', "_")
}

/// Maps `f` over `jobs` in order, in parallel unless the walk is large.
pub(crate) fn map_jobs<J: Sync, T: Send>(
    jobs: &[J],
    dim: usize,
    f: impl Fn(&J) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    if dim > SEQUENTIAL_DIMENSION {
        jobs.iter().map(f).collect()
    } else {
        jobs.par_iter().map(f).collect()
    }
}

fn line_dist(config: &ExperimentConfig) -> Result<Outcome> {
    let steps = config.steps;
    let space = space_for(config.topology, config.sizes[0])?;
    let coin = config.coin.build(2)?;
    let point = Point::new(config, &space, &coin, config.targets[0], config.p_grid[0])?;
    let quantum = final_distribution(&point, steps)?;
    let classical = classical_line_distribution(steps);
    let half = steps.max(1) as i64;
    let mut table = Table::new(vec!["x".into(), "P_quantum".into(), "P_classical".into()]);
    let mut placed = vec![0.0; space.vertex_count()];
    for x in (-(steps as i64)..=steps as i64).step_by(2) {
        let v = space.vertex_at(x)?;
        let c = classical[(x + half) as usize];
        placed[v] = c;
        table.push(vec![x.into(), quantum[v].into(), c.into()]);
    }
    let classical_on_window = Distribution::new(placed);
    Ok(Outcome {
        table,
        summary: json!({
            "steps": steps,
            "sigma_quantum": std_dev(&quantum, &space)?,
            "sigma_classical": std_dev(&classical_on_window, &space)?,
            "nu_quantum": uniform_window_distance(&quantum, &space, steps)?,
        }),
        warnings: Vec::new(),
    })
}

/// One column per target of `metric(P(·, T))` against the rate grid.
fn line_scan(
    config: &ExperimentConfig,
    stem: &str,
    metric: impl Fn(&Distribution, &WalkSpace, usize) -> Result<f64> + Sync + Send,
) -> Result<Outcome> {
    let (table, _) = line_table(config, stem, &metric)?;
    let space = space_for(config.topology, config.sizes[0])?;
    let coin = config.coin.build(2)?;
    let pure = Point::new(config, &space, &coin, NoiseTarget::None, 0.0)?;
    let pure_value = metric(
        &final_distribution(&pure, config.steps)?,
        &space,
        config.steps,
    )?;
    Ok(Outcome {
        table,
        summary: {
            let mut m = serde_json::Map::new();
            m.insert("steps".into(), json!(config.steps));
            m.insert(format!("{stem}_pure"), json!(pure_value));
            m.insert(
                "sigma_classical".into(),
                json!((config.steps as f64).sqrt()),
            );
            serde_json::Value::Object(m)
        },
        warnings: Vec::new(),
    })
}

type Grid = HashMap<(usize, u64), f64>;

fn line_table(
    config: &ExperimentConfig,
    stem: &str,
    metric: &(impl Fn(&Distribution, &WalkSpace, usize) -> Result<f64> + Sync + Send),
) -> Result<(Table, Grid)> {
    let space = space_for(config.topology, config.sizes[0])?;
    let coin = config.coin.build(2)?;
    let jobs: Vec<(usize, f64)> = config
        .p_grid
        .iter()
        .flat_map(|&p| (0..config.targets.len()).map(move |k| (k, p)))
        .collect();
    let values = map_jobs(&jobs, space.dim(), |&(k, p)| {
        let point = Point::new(config, &space, &coin, config.targets[k], p)?;
        metric(
            &final_distribution(&point, config.steps)?,
            &space,
            config.steps,
        )
    })?;
    let mut columns = vec!["p".to_string()];
    columns.extend(
        config
            .targets
            .iter()
            .map(|&t| format!("{stem}_{}", target_stem(t))),
    );
    let mut table = Table::new(columns);
    let mut cache = Grid::new();
    for (row, chunk) in values.chunks(config.targets.len()).enumerate() {
        let p = config.p_grid[row];
        let mut cells: Vec<Cell> = vec![p.into()];
        for (k, &v) in chunk.iter().enumerate() {
            cells.push(v.into());
            cache.insert((k, p.to_bits()), v);
        }
        table.push(cells);
    }
    Ok((table, cache))
}

fn line_uniformity(config: &ExperimentConfig) -> Result<Outcome> {
    let steps = config.steps;
    let metric = |d: &Distribution, s: &WalkSpace, t: usize| uniform_window_distance(d, s, t);
    let (table, cache) = line_table(config, "nu", &metric)?;
    let space = space_for(config.topology, config.sizes[0])?;
    let coin = config.coin.build(2)?;
    let mut summary = serde_json::Map::new();
    let mut warnings = Vec::new();
    summary.insert("steps".into(), json!(steps));
    if config.p_grid.len() >= 3 && config.p_grid.windows(2).all(|w| w[0] < w[1]) {
        let optima = config
            .targets
            .par_iter()
            .enumerate()
            .map(|(k, &target)| {
                let objective = |p: f64| match cache.get(&(k, p.to_bits())) {
                    Some(&v) => Ok(v),
                    None => {
                        let point = Point::new(config, &space, &coin, target, p)?;
                        metric(&final_distribution(&point, steps)?, &space, steps)
                    }
                };
                find_optimal_p(objective, &config.p_grid)
            })
            .collect::<Result<Vec<_>>>()?;
        for (&target, opt) in config.targets.iter().zip(optima) {
            if let Some(w) = &opt.warning {
                warnings.push(format!("{}: {w}", target.name()));
            }
            summary.insert(
                target_stem(target),
                json!({ "p_u": opt.p, "p_u_times_T": opt.p * steps as f64, "nu_min": opt.value, "warning": opt.warning }),
            );
        }
    } else {
        warnings.push("optimal rate needs an increasing grid of at least 3 points".into());
    }
    Ok(Outcome {
        table,
        summary: serde_json::Value::Object(summary),
        warnings,
    })
}

fn cycle_mixing(config: &ExperimentConfig) -> Result<Outcome> {
    let multi = config.sizes.len() > 1;
    let nt = config.targets.len();
    let mut columns: Vec<String> = Vec::new();
    if multi {
        columns.push("N".into());
    }
    columns.push("p".into());
    columns.extend(
        config
            .targets
            .iter()
            .map(|&t| format!("M_{}", target_stem(t))),
    );
    columns.extend(
        config
            .targets
            .iter()
            .map(|&t| format!("mixed_{}", target_stem(t))),
    );
    let mut table = Table::new(columns);
    let mut warnings = Vec::new();
    let mut summary = serde_json::Map::new();
    for &n in &config.sizes {
        let space = space_for(config.topology, n)?;
        let coin = config.coin.build(2)?;
        let horizon = config.horizon_for(n);
        let jobs: Vec<(usize, f64)> = config
            .p_grid
            .iter()
            .flat_map(|&p| (0..nt).map(move |k| (k, p)))
            .collect();
        let results = map_jobs(&jobs, space.dim(), |&(k, p)| {
            let point = Point::new(config, &space, &coin, config.targets[k], p)?;
            uniform_mixing(&point, config.epsilon, horizon)
        })?;
        let mut best: Vec<Option<(f64, usize)>> = vec![None; nt];
        for (row, chunk) in results.chunks(nt).enumerate() {
            let p = config.p_grid[row];
            let mut cells: Vec<Cell> = Vec::new();
            if multi {
                cells.push(n.into());
            }
            cells.push(p.into());
            for (k, r) in chunk.iter().enumerate() {
                cells.push(r.value_or_lower_bound().into());
                if r.mixed {
                    let m = r.mixing_time.unwrap_or(0);
                    if best[k].is_none_or(|(_, b)| m < b) {
                        best[k] = Some((p, m));
                    }
                } else {
                    warnings.push(format!(
                        "N={n} {} p={p}: not mixed within horizon {horizon}",
                        config.targets[k].name()
                    ));
                }
            }
            cells.extend(chunk.iter().map(|r| Cell::Bool(r.mixed)));
            table.push(cells);
        }
        let per: serde_json::Map<String, serde_json::Value> = config
            .targets
            .iter()
            .zip(&best)
            .map(|(&t, b)| {
                (
                    target_stem(t),
                    json!(b.map(|(p, m)| json!({ "p": p, "M": m }))),
                )
            })
            .collect();
        summary.insert(
            format!("N{n}"),
            json!({ "horizon": horizon, "fastest": per }),
        );
    }
    Ok(Outcome {
        table,
        summary: serde_json::Value::Object(summary),
        warnings,
    })
}

fn hypercube_hitting(config: &ExperimentConfig) -> Result<Outcome> {
    let steps = config.steps;
    let n = config.sizes[0];
    let space = space_for(config.topology, n)?;
    let coin = config.coin.build(n)?;
    let target = space.antipode();
    let noise = config.targets[0];

    let jobs: Vec<(f64, bool)> = config
        .p_grid
        .iter()
        .flat_map(|&p| [(p, false), (p, true)])
        .collect();
    let curves = map_jobs(&jobs, space.dim(), |&(p, concurrent)| {
        let point = Point::new(config, &space, &coin, noise, p)?;
        if concurrent {
            concurrent_halts(&point, target, steps)
        } else {
            Ok(Some(
                distribution_series(&point, steps)?
                    .iter()
                    .map(|d| d[target])
                    .collect(),
            ))
        }
    })?;
    let classical = {
        let m = space.classical_matrix(0.0)?;
        let p0 = Distribution::point_mass(space.vertex_count(), space.origin())?;
        classical_evolve(&p0, &m, steps)?
    };

    let mut warnings = Vec::new();
    let mut columns = vec!["t".to_string()];
    columns.extend(config.p_grid.iter().map(|p| format!("Ph_oneshot_p{p}")));
    columns.extend(config.p_grid.iter().map(|p| format!("Ph_concurrent_p{p}")));
    columns.push("Ph_classical".into());
    let mut table = Table::new(columns);
    for t in 0..=steps {
        let mut row: Vec<Cell> = vec![t.into()];
        for pass in [false, true] {
            for (k, _) in config.p_grid.iter().enumerate() {
                let v = curves[2 * k + pass as usize]
                    .as_ref()
                    .map_or(f64::NAN, |c| c[t]);
                row.push(v.into());
            }
        }
        row.push(classical.at(t)[target].into());
        table.push(row);
    }
    for (k, p) in config.p_grid.iter().enumerate() {
        if curves[2 * k + 1].is_none() {
            warnings.push(format!("p={p}: concurrent curve needs the density engine"));
        }
    }

    // the peak position comes from the noiseless walk and is held fixed
    let pure = Point::new(config, &space, &coin, NoiseTarget::None, 0.0)?;
    let pure_curve: Vec<f64> = distribution_series(&pure, steps)?
        .iter()
        .map(|d| d[target])
        .collect();
    let mut summary = serde_json::Map::new();
    summary.insert("target".into(), json!(target));
    summary.insert("reference_peak_time".into(), json!(PI * n as f64 / 2.0));
    if let Some((t_peak, p_peak)) = first_peak(&pure_curve) {
        summary.insert("peak_time".into(), json!(t_peak));
        summary.insert("peak_pure".into(), json!(p_peak));
        summary.insert("peak_classical".into(), json!(classical.at(t_peak)[target]));
        let peaks: Vec<f64> = (0..config.p_grid.len())
            .map(|k| curves[2 * k].as_ref().map_or(f64::NAN, |c| c[t_peak]))
            .collect();
        summary.insert("peaks".into(), json!(peaks));
        match fit_peak_decay(&config.p_grid, &peaks, n) {
            Ok(fit) => {
                summary.insert("decay_exponent".into(), json!(fit.exponent));
                summary.insert("alpha".into(), json!(fit.alpha(n)));
                summary.insert("fit_residual".into(), json!(fit.residual));
            }
            Err(e) => warnings.push(format!("no decay fit: {e}")),
        }
    } else {
        warnings.push("target never reached".into());
    }
    match classical_hitting_expectation(&space, space.origin(), target) {
        Ok(h) => {
            summary.insert("classical_expected_hitting_time".into(), json!(h));
        }
        Err(e) => warnings.push(format!("classical hitting time: {e}")),
    }
    Ok(Outcome {
        table,
        summary: serde_json::Value::Object(summary),
        warnings,
    })
}
