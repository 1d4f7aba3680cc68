// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-point simulations shared by presets and sweeps.

use crate::coin::CoinOperator;
use crate::error::Result;
use crate::evolution::pure::apply_unitary;
use crate::evolution::{
    child_seed, run_absorbing, run_ensemble, DensityEvolution, NoiseModel, NoiseTarget, RecordMode,
};
use crate::hilbert::{DensityOperator, Distribution, PureState};
use crate::observables::{density_mixing_time, mixing_time, pure_mixing_time, MixingResult};
use crate::space::WalkSpace;

use super::config::{Engine, ExperimentConfig};

/// Everything needed to simulate one grid point.
#[derive(Debug, Clone)]
pub struct Point<'a> {
    pub space: &'a WalkSpace,
    pub coin: &'a CoinOperator,
    pub noise: NoiseModel,
    pub engine: Engine,
    pub trajectories: usize,
    pub seed: u64,
}

impl<'a> Point<'a> {
    pub fn new(
        config: &ExperimentConfig,
        space: &'a WalkSpace,
        coin: &'a CoinOperator,
        target: NoiseTarget,
        p: f64,
    ) -> Result<Self> {
        Ok(Self {
            space,
            coin,
            noise: NoiseModel::new(target, p)?,
            engine: config.engine_for(space, target, p),
            trajectories: config.trajectories,
            seed: point_seed(config.seed, space.vertex_count(), target, p),
        })
    }

    /// Noiseless points take the unitary path whatever the engine.
    fn unitary(&self) -> bool {
        self.noise.is_noiseless() || self.engine == Engine::Pure
    }

    fn initial(&self) -> PureState {
        self.space.initial_state()
    }
}

/// Seed for a grid point, a function of its parameters only, so repeated
/// or reordered grid values reproduce the same rows.
pub fn point_seed(master: u64, size: usize, target: NoiseTarget, p: f64) -> u64 {
    let t = match target {
        NoiseTarget::None => 0,
        NoiseTarget::Coin => 1,
        NoiseTarget::Particle => 2,
        NoiseTarget::Both => 3,
        NoiseTarget::ImperfectCoin => 4,
    };
    child_seed(child_seed(child_seed(master, size as u64), t), p.to_bits())
}

/// `P(·, steps)`.
pub fn final_distribution(point: &Point<'_>, steps: usize) -> Result<Distribution> {
    if point.unitary() {
        let mut cur = point.initial().amplitudes().to_vec();
        let mut next = cur.clone();
        for _ in 0..steps {
            apply_unitary(point.space, point.coin, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        return Ok(PureState::from_raw(point.space.layout(), cur).position_distribution());
    }
    match point.engine {
        Engine::Trajectory => {
            let s = run_ensemble(
                &point.initial(),
                point.coin,
                point.space,
                point.noise,
                steps,
                point.trajectories,
                point.seed,
                RecordMode::Born,
            )?;
            Ok(s.last().clone())
        }
        _ => {
            let rho = DensityOperator::density_from(&point.initial())?;
            let mut evo = DensityEvolution::new(rho, point.coin, point.space, point.noise)?;
            for _ in 0..steps {
                evo.step();
            }
            Ok(evo.position_distribution())
        }
    }
}

/// `P(·, t)` for `t = 0 ..= steps`.
pub fn distribution_series(point: &Point<'_>, steps: usize) -> Result<Vec<Distribution>> {
    if point.unitary() {
        let mut cur = point.initial().amplitudes().to_vec();
        let mut next = cur.clone();
        let layout = point.space.layout();
        let mut out = vec![PureState::from_raw(layout, cur.clone()).position_distribution()];
        for _ in 0..steps {
            apply_unitary(point.space, point.coin, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            out.push(PureState::from_raw(layout, cur.clone()).position_distribution());
        }
        return Ok(out);
    }
    match point.engine {
        Engine::Trajectory => Ok(run_ensemble(
            &point.initial(),
            point.coin,
            point.space,
            point.noise,
            steps,
            point.trajectories,
            point.seed,
            RecordMode::Born,
        )?
        .records),
        _ => {
            let rho = DensityOperator::density_from(&point.initial())?;
            let mut evo = DensityEvolution::new(rho, point.coin, point.space, point.noise)?;
            let mut out = vec![evo.position_distribution()];
            for _ in 0..steps {
                evo.step();
                out.push(evo.position_distribution());
            }
            Ok(out)
        }
    }
}

/// Time-averaged mixing time against the uniform distribution.
pub fn uniform_mixing(point: &Point<'_>, epsilon: f64, horizon: usize) -> Result<MixingResult> {
    let pi = Distribution::uniform(point.space.vertex_count());
    if point.unitary() {
        return pure_mixing_time(
            &point.initial(),
            point.coin,
            point.space,
            &pi,
            epsilon,
            horizon,
            true,
        );
    }
    match point.engine {
        Engine::Trajectory => {
            let series = run_ensemble(
                &point.initial(),
                point.coin,
                point.space,
                point.noise,
                horizon,
                point.trajectories,
                point.seed,
                RecordMode::Born,
            )?;
            mixing_time(&series, &pi, epsilon, horizon, true)
        }
        _ => {
            let rho = DensityOperator::density_from(&point.initial())?;
            let evo = DensityEvolution::new(rho, point.coin, point.space, point.noise)?;
            density_mixing_time(evo, point.space, &pi, epsilon, horizon, true)
        }
    }
}

/// Per-step halt probabilities of the monitored walk, or `None` when the
/// engine cannot monitor (trajectories).
pub fn concurrent_halts(
    point: &Point<'_>,
    target: usize,
    steps: usize,
) -> Result<Option<Vec<f64>>> {
    point.space.check_vertex(target)?;
    if point.unitary() {
        let v = point.space.vertex_count();
        let d = point.space.coin_degree();
        let mut cur = point.initial().amplitudes().to_vec();
        let mut next = cur.clone();
        let absorb = |psi: &mut [crate::hilbert::C64]| {
            let mut h = 0.0;
            for a in 0..d {
                h += psi[a * v + target].norm_sqr();
                psi[a * v + target] = Default::default();
            }
            h
        };
        let mut halts = vec![absorb(&mut cur)];
        for _ in 0..steps {
            apply_unitary(point.space, point.coin, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            halts.push(absorb(&mut cur));
        }
        return Ok(Some(halts));
    }
    if point.engine == Engine::Trajectory {
        return Ok(None);
    }
    let rho = DensityOperator::density_from(&point.initial())?;
    let series = run_absorbing(&rho, point.coin, point.space, point.noise, target, steps)?;
    Ok(series.halt_probability)
}
