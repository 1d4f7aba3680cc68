// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Evolution engines.
//!
//! * [`pure`]: unitary evolution of a state vector, `ψ ← T (C ⊗ I) ψ`.
//! * [`density`]: exact decohered evolution of a density operator,
//!   `ρ ← (1-p) U ρ U† + p Σ_i P_i U ρ U† P_i`, plus the absorbing variant
//!   used for concurrent hitting.
//! * [`trajectory`]: Monte Carlo unraveling of the same channel with
//!   reproducible per-trajectory seeds.
//!
//! No engine ever forms the `D × D` unitary. The coin acts blockwise per
//! vertex and the translation is an index permutation.

pub mod density;
pub mod pure;
pub mod trajectory;

use serde::{Deserialize, Serialize};

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::hilbert::{Distribution, HilbertLayout};
use crate::space::WalkSpace;

pub use density::{run_absorbing, run_density, step_absorbing, step_density, DensityEvolution};
pub use pure::{run_pure, step_pure};
pub use trajectory::{child_seed, run_ensemble, sample_trajectory, RecordMode, Trajectory};

/// Which degrees of freedom the per-step measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseTarget {
    None,
    Coin,
    Particle,
    Both,
    /// Gaussian error on the Hadamard angle; trajectory engine only.
    ImperfectCoin,
}

impl NoiseTarget {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseTarget::None => "none",
            NoiseTarget::Coin => "coin",
            NoiseTarget::Particle => "particle",
            NoiseTarget::Both => "both",
            NoiseTarget::ImperfectCoin => "imperfect-coin",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => NoiseTarget::None,
            "coin" => NoiseTarget::Coin,
            "particle" => NoiseTarget::Particle,
            "both" => NoiseTarget::Both,
            "imperfect-coin" => NoiseTarget::ImperfectCoin,
            other => {
                return Err(WalkError::invalid(format!(
                    "unknown noise target `{other}`"
                )))
            }
        })
    }

    /// Targets implemented as a projective measurement channel.
    pub fn is_projective(&self) -> bool {
        matches!(
            self,
            NoiseTarget::Coin | NoiseTarget::Particle | NoiseTarget::Both
        )
    }
}

/// Decoherence target together with its per-step rate `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    target: NoiseTarget,
    rate: f64,
}

impl NoiseModel {
    pub fn new(target: NoiseTarget, rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(WalkError::invalid(format!(
                "decoherence rate {rate} outside [0, 1]"
            )));
        }
        Ok(Self { target, rate })
    }

    pub fn none() -> Self {
        Self {
            target: NoiseTarget::None,
            rate: 0.0,
        }
    }

    #[inline]
    pub fn target(&self) -> NoiseTarget {
        self.target
    }

    /// Rate as supplied.
    #[inline]
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Rate actually applied: zero for target `None`.
    #[inline]
    pub fn effective_rate(&self) -> f64 {
        match self.target {
            NoiseTarget::None => 0.0,
            _ => self.rate,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.effective_rate() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Pure,
    Density,
    Trajectory,
    Classical,
}

impl EngineKind {
    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Pure => "pure",
            EngineKind::Density => "density",
            EngineKind::Trajectory => "trajectory",
            EngineKind::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesMeta {
    pub space: String,
    pub coin: Option<String>,
    pub noise: NoiseModel,
    pub engine: EngineKind,
    pub seed: Option<u64>,
    pub trajectories: Option<usize>,
}

/// Per-step record of a run, `t = 0 ..= T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    /// `P(v, t)`.
    pub records: Vec<Distribution>,
    /// Entry `t` is the Cesàro mean of records `0 ..= t`, i.e. the
    /// time-averaged distribution over `t + 1` steps.
    pub running_average: Option<Vec<Distribution>>,
    /// Probability of halting exactly at step `t` (absorbing runs).
    pub halt_probability: Option<Vec<f64>>,
    /// Per-entry standard errors (trajectory ensembles).
    pub standard_errors: Option<Vec<Vec<f64>>>,
    pub meta: SeriesMeta,
}

impl TimeSeries {
    pub(crate) fn new(meta: SeriesMeta) -> Self {
        Self {
            records: Vec::new(),
            running_average: None,
            halt_probability: None,
            standard_errors: None,
            meta,
        }
    }

    /// Number of recorded time points (`T + 1`).
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of steps `T`.
    pub fn steps(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn at(&self, t: usize) -> &Distribution {
        &self.records[t]
    }

    pub fn last(&self) -> &Distribution {
        self.records
            .last()
            .expect("series holds at least the initial record")
    }

    /// Cumulative halt probability after each step.
    pub fn cumulative_halts(&self) -> Option<Vec<f64>> {
        self.halt_probability.as_ref().map(|h| {
            h.iter()
                .scan(0.0, |acc, &x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        })
    }

    /// Sum of the standard errors at step `t`.
    pub fn summed_standard_error(&self, t: usize) -> Option<f64> {
        self.standard_errors.as_ref().map(|se| se[t].iter().sum())
    }

    pub(crate) fn fill_running_average(&mut self) {
        let mut avgs = Vec::with_capacity(self.records.len());
        let mut acc = vec![0.0; self.records.first().map_or(0, |d| d.len())];
        for (t, rec) in self.records.iter().enumerate() {
            for (a, &p) in acc.iter_mut().zip(rec.values()) {
                *a += p;
            }
            let n = (t + 1) as f64;
            avgs.push(Distribution::new(acc.iter().map(|a| a / n).collect()));
        }
        self.running_average = Some(avgs);
    }
}

/// Recording knobs shared by the engines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecordOptions {
    pub running_average: bool,
}

pub(crate) fn check_compatible(
    space: &WalkSpace,
    coin: &CoinOperator,
    layout: HilbertLayout,
) -> Result<()> {
    if coin.dim() != space.coin_degree() {
        return Err(WalkError::DimensionMismatch {
            expected: space.coin_degree(),
            found: coin.dim(),
        });
    }
    if layout != space.layout() {
        return Err(WalkError::DimensionMismatch {
            expected: space.dim(),
            found: layout.dim(),
        });
    }
    Ok(())
}

pub(crate) fn coin_label(coin: &CoinOperator) -> String {
    use crate::coin::CoinStructure;
    match coin.structure() {
        CoinStructure::Grover => format!("grover({})", coin.dim()),
        CoinStructure::Dense if coin.dim() == 2 && *coin == CoinOperator::hadamard() => {
            "hadamard".into()
        }
        CoinStructure::Dense => format!("dense({})", coin.dim()),
    }
}
