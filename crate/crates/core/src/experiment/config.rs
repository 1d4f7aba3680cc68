// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Layered experiment configuration.
//!
//! Precedence, lowest first: built-in defaults, preset defaults, config
//! file, command-line flags. Every layer is the same partial [`ConfigLayer`];
//! [`ConfigLayer::resolve`] validates the merged result into an
//! [`ExperimentConfig`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::evolution::NoiseTarget;
use crate::hilbert::DENSITY_DIMENSION_CAP;
use crate::space::{WalkSpace, MAX_HYPERCUBE_DIMENSION};

use super::presets::Preset;

/// Largest number of recorded cells `(horizon + 1) · |V|` that a trajectory
/// mixing run may hold in memory.
pub const TRAJECTORY_RECORD_CAP: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Line,
    Cycle,
    Hypercube,
}

impl TopologyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(TopologyKind::Line),
            "cycle" => Ok(TopologyKind::Cycle),
            "hypercube" => Ok(TopologyKind::Hypercube),
            _ => Err(WalkError::config(
                "topology",
                format!("unknown topology `{s}` (line|cycle|hypercube)"),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TopologyKind::Line => "line",
            TopologyKind::Cycle => "cycle",
            TopologyKind::Hypercube => "hypercube",
        }
    }
}

/// Coin selection as written on the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoinSpec {
    Hadamard,
    Rotation { theta: f64 },
    Grover,
    File { path: PathBuf },
}

impl CoinSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let err = |m: String| WalkError::config("coin", m);
        match s {
            "hadamard" => Ok(CoinSpec::Hadamard),
            "grover" => Ok(CoinSpec::Grover),
            _ => {
                if let Some(theta) = s.strip_prefix("rotation:") {
                    let theta: f64 = theta
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("rotation angle `{theta}` is not a number")))?;
                    if !theta.is_finite() {
                        return Err(err("rotation angle must be finite".into()));
                    }
                    Ok(CoinSpec::Rotation { theta })
                } else if let Some(path) = s.strip_prefix("file:") {
                    if path.is_empty() {
                        return Err(err("file: needs a path".into()));
                    }
                    Ok(CoinSpec::File { path: path.into() })
                } else {
                    Err(err(format!(
                        "unknown coin `{s}` (hadamard|rotation:THETA|grover|file:PATH)"
                    )))
                }
            }
        }
    }

    /// Builds the operator for a walk with coin degree `d`.
    pub fn build(&self, d: usize) -> Result<CoinOperator> {
        let op = match self {
            CoinSpec::Hadamard => CoinOperator::hadamard(),
            CoinSpec::Rotation { theta } => CoinOperator::rotation(*theta)?,
            CoinSpec::Grover => CoinOperator::grover(d)?,
            CoinSpec::File { path } => CoinOperator::from_file(path)?,
        };
        if op.dim() != d {
            return Err(WalkError::config(
                "coin",
                format!("coin acts on dimension {} but the walk needs {d}", op.dim()),
            ));
        }
        Ok(op)
    }
}

/// `p` grid: either `"a:b:n"` (n evenly spaced values, endpoints included)
/// or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range(String),
    Values(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Values(v) => Ok(v.clone()),
            GridSpec::Range(s) => parse_range(s),
        }
    }
}

/// Parses `a:b:n`.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let err = |m: String| WalkError::config("p_grid", m);
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(err(format!("expected a:b:n, got `{s}`")));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad start `{}`", parts[0])))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad end `{}`", parts[1])))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad count `{}`", parts[2])))?;
    if n == 0 {
        return Err(err("grid needs at least one point".into()));
    }
    if !(a <= b) {
        return Err(err(format!("start {a} exceeds end {b}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k + 1 == n { b } else { a + h * k as f64 })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Pure,
    Density,
    Trajectory,
}

impl EngineChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(EngineChoice::Pure),
            "density" => Ok(EngineChoice::Density),
            "trajectory" => Ok(EngineChoice::Trajectory),
            _ => Err(WalkError::config(
                "engine",
                format!("unknown engine `{s}` (pure|density|trajectory)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub topology: Option<String>,
    pub size: Option<usize>,
    /// Size grid for sweeps.
    pub sizes: Option<Vec<usize>>,
    pub coin: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub target: Option<String>,
    pub p: Option<f64>,
    pub p_grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub engine: Option<String>,
    pub steps: Option<usize>,
    pub trajectories: Option<usize>,
    pub epsilon: Option<f64>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

/// One partial configuration layer; also the on-disk TOML schema.
///
/// ```toml
/// preset = "cycle-mixing"
///
/// [space]
/// topology = "cycle"
/// size = 30
///
/// [noise]
/// target = "coin"
/// p_grid = "0.005:0.05:10"
///
/// [run]
/// epsilon = 0.01
/// seed = 7
///
/// [output]
/// path = "cycle30.csv"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub preset: Option<String>,
    #[serde(default)]
    pub space: SpaceSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($field:ident),+) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )+
    };
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| WalkError::config("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WalkError::io(path.display().to_string(), e))?;
        Self::from_toml(&text).map_err(|e| match e {
            WalkError::Config { message, .. } => {
                WalkError::config(path.display().to_string(), message)
            }
            other => other,
        })
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: &ConfigLayer) -> Self {
        overlay!(self, top, preset);
        overlay!(self.space, top.space, topology, size, sizes, coin);
        overlay!(
            self.run,
            top.run,
            engine,
            steps,
            trajectories,
            epsilon,
            horizon,
            seed,
            threads
        );
        overlay!(self.output, top.output, path);
        overlay!(self.noise, top.noise, target);
        // a single p and a grid are alternatives: the upper layer wins as a unit
        if top.noise.p.is_some() || top.noise.p_grid.is_some() {
            self.noise.p = top.noise.p;
            self.noise.p_grid = top.noise.p_grid.clone();
        }
        self
    }

    /// Validates the merged layers. `preset` layers are folded in underneath
    /// `self` when a preset is named.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let preset = self.preset.as_deref().map(Preset::parse).transpose()?;
        let merged = match preset {
            Some(p) => p.defaults().overlay(self),
            None => self.clone(),
        };
        merged.validate(preset)
    }

    fn validate(&self, preset: Option<Preset>) -> Result<ExperimentConfig> {
        let topology = TopologyKind::parse(
            self.space
                .topology
                .as_deref()
                .ok_or_else(|| WalkError::config("topology", "no topology given"))?,
        )?;

        let steps = self.run.steps.unwrap_or(match topology {
            TopologyKind::Line => 100,
            TopologyKind::Cycle => 0,
            TopologyKind::Hypercube => 50,
        });
        if topology != TopologyKind::Cycle && steps == 0 {
            return Err(WalkError::config("steps", "must be at least 1"));
        }

        let sizes = match (&self.space.sizes, self.space.size) {
            (Some(s), _) => s.clone(),
            (None, Some(n)) => vec![n],
            (None, None) => match topology {
                TopologyKind::Line => vec![steps],
                TopologyKind::Cycle => vec![30],
                TopologyKind::Hypercube => vec![9],
            },
        };
        if sizes.is_empty() {
            return Err(WalkError::config("sizes", "size grid is empty"));
        }
        for &n in &sizes {
            match topology {
                TopologyKind::Line if n < steps => {
                    return Err(WalkError::config(
                        "size",
                        format!("line window half-width {n} is smaller than steps {steps}"),
                    ))
                }
                TopologyKind::Cycle if n < 3 => {
                    return Err(WalkError::config(
                        "size",
                        format!("cycle needs N >= 3, got {n}"),
                    ))
                }
                TopologyKind::Hypercube if !(2..=MAX_HYPERCUBE_DIMENSION).contains(&n) => {
                    return Err(WalkError::config(
                        "size",
                        format!(
                            "hypercube dimension must be in 2..={MAX_HYPERCUBE_DIMENSION}, got {n}"
                        ),
                    ))
                }
                _ => {}
            }
        }

        let coin = match &self.space.coin {
            Some(s) => CoinSpec::parse(s)?,
            None if topology == TopologyKind::Hypercube => CoinSpec::Grover,
            None => CoinSpec::Hadamard,
        };
        for &n in &sizes {
            coin.build(space_for(topology, n)?.coin_degree())?;
        }

        let targets = match &self.noise.target {
            Some(t) => {
                vec![NoiseTarget::parse(t).map_err(|e| WalkError::config("noise", e.to_string()))?]
            }
            None => match preset {
                Some(p) => p.default_targets(self.run.engine.as_deref()),
                None => vec![NoiseTarget::None],
            },
        };

        let p_grid = match (&self.noise.p_grid, self.noise.p) {
            (Some(g), _) => g.values()?,
            (None, Some(p)) => vec![p],
            (None, None) => vec![0.0],
        };
        if p_grid.is_empty() {
            return Err(WalkError::config("p_grid", "grid is empty"));
        }
        if let Some(&p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(WalkError::config("p", format!("rate {p} outside [0, 1]")));
        }

        let engine = self
            .run
            .engine
            .as_deref()
            .map(EngineChoice::parse)
            .transpose()?;
        let trajectories = self.run.trajectories.unwrap_or(1000);
        if trajectories == 0 {
            return Err(WalkError::config("trajectories", "must be at least 1"));
        }
        let epsilon = self.run.epsilon.unwrap_or(0.01);
        if !(epsilon > 0.0 && epsilon <= 2.0) {
            return Err(WalkError::config(
                "epsilon",
                format!("must lie in (0, 2], got {epsilon}"),
            ));
        }
        if self.run.horizon == Some(0) {
            return Err(WalkError::config("horizon", "must be at least 1"));
        }

        let config = ExperimentConfig {
            preset,
            topology,
            sizes,
            coin,
            targets,
            p_grid,
            engine,
            steps,
            trajectories,
            epsilon,
            horizon: self.run.horizon,
            seed: self.run.seed.unwrap_or(0),
            threads: self.run.threads.unwrap_or(0),
            out: self.output.path.clone(),
        };
        config.check_engines()?;
        if let Some(p) = preset {
            p.check(&config)?;
        }
        Ok(config)
    }
}

pub(crate) fn space_for(topology: TopologyKind, size: usize) -> Result<WalkSpace> {
    match topology {
        TopologyKind::Line => WalkSpace::make_line(size),
        TopologyKind::Cycle => WalkSpace::make_cycle(size),
        TopologyKind::Hypercube => WalkSpace::make_hypercube(size),
    }
}

/// Concrete engine used for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Pure,
    Density,
    Trajectory,
}

/// Fully validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub preset: Option<Preset>,
    pub topology: TopologyKind,
    pub sizes: Vec<usize>,
    pub coin: CoinSpec,
    pub targets: Vec<NoiseTarget>,
    pub p_grid: Vec<f64>,
    /// `None` selects automatically per run.
    pub engine: Option<EngineChoice>,
    pub steps: usize,
    pub trajectories: usize,
    pub epsilon: f64,
    pub horizon: Option<usize>,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide. Never affects output.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct DigestView<'a> {
    preset: Option<&'static str>,
    topology: TopologyKind,
    sizes: &'a [usize],
    coin: &'a CoinSpec,
    targets: &'a [NoiseTarget],
    p_grid: &'a [f64],
    engine: Option<EngineChoice>,
    steps: usize,
    trajectories: usize,
    epsilon: f64,
    horizon: Option<usize>,
    seed: u64,
}

impl ExperimentConfig {
    /// SHA-256 over every field that can change the output. Thread count
    /// and output path are excluded.
    pub fn digest(&self) -> String {
        let view = DigestView {
            preset: self.preset.map(|p| p.name()),
            topology: self.topology,
            sizes: &self.sizes,
            coin: &self.coin,
            targets: &self.targets,
            p_grid: &self.p_grid,
            engine: self.engine,
            steps: self.steps,
            trajectories: self.trajectories,
            epsilon: self.epsilon,
            horizon: self.horizon,
            seed: self.seed,
        };
        let bytes = serde_json::to_vec(&view).expect("plain data serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Mixing horizon: `20 N² / ε` on cycles unless set.
    pub fn horizon_for(&self, size: usize) -> usize {
        self.horizon.unwrap_or(match self.topology {
            TopologyKind::Cycle => (20.0 * (size * size) as f64 / self.epsilon).ceil() as usize,
            _ => self.steps,
        })
    }

    /// Engine for a run with the given noise.
    pub fn engine_for(&self, space: &WalkSpace, target: NoiseTarget, p: f64) -> Engine {
        match self.engine {
            Some(EngineChoice::Pure) => Engine::Pure,
            Some(EngineChoice::Density) => Engine::Density,
            Some(EngineChoice::Trajectory) => Engine::Trajectory,
            None if target == NoiseTarget::ImperfectCoin && p > 0.0 => Engine::Trajectory,
            None if space.dim() <= DENSITY_DIMENSION_CAP => Engine::Density,
            None => Engine::Trajectory,
        }
    }

    fn check_engines(&self) -> Result<()> {
        for &n in &self.sizes {
            let space = space_for(self.topology, n)?;
            for &target in &self.targets {
                if target == NoiseTarget::ImperfectCoin && space.coin_degree() != 2 {
                    return Err(WalkError::config(
                        "noise",
                        "imperfect-coin needs a two-dimensional coin",
                    ));
                }
                for &p in &self.p_grid {
                    let noisy = target != NoiseTarget::None && p > 0.0;
                    match self.engine_for(&space, target, p) {
                        Engine::Pure if noisy => {
                            return Err(WalkError::config(
                                "engine",
                                format!(
                                    "pure engine cannot apply {} noise at p = {p}",
                                    target.name()
                                ),
                            ))
                        }
                        Engine::Density if target == NoiseTarget::ImperfectCoin && noisy => {
                            return Err(WalkError::config(
                                "engine",
                                "imperfect-coin noise needs the trajectory engine",
                            ))
                        }
                        Engine::Density if space.dim() > DENSITY_DIMENSION_CAP => {
                            return Err(WalkError::ResourceCap {
                                dimension: space.dim(),
                                cap: DENSITY_DIMENSION_CAP,
                            })
                        }
                        Engine::Trajectory if self.topology == TopologyKind::Cycle => {
                            let cells =
                                (self.horizon_for(n) + 1).saturating_mul(space.vertex_count());
                            if cells > TRAJECTORY_RECORD_CAP {
                                return Err(WalkError::ResourceCap {
                                    dimension: cells,
                                    cap: TRAJECTORY_RECORD_CAP,
                                });
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }
}
