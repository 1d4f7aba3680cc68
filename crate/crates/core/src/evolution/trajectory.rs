// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo unraveling of the decoherence channel.
//!
//! Each trajectory evolves a pure state. After the unitary step a projective
//! measurement in the target's computational basis happens with probability
//! `p`; the outcome is drawn from the Born rule and the state collapses. For
//! the imperfect-coin model the coin of every step is `rotation(θ)` with
//! `θ ~ Normal(π/4, √p · π/4)`, untruncated.
//!
//! Seeding: trajectory `k` of an ensemble uses a ChaCha8 generator seeded
//! with [`child_seed`]`(master_seed, k)`, so ensembles are reproducible and
//! independent of scheduling. Trajectories are accumulated in fixed chunks of
//! [`CHUNK`] whose partial sums are combined in chunk order.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use rayon::prelude::*;

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::hilbert::{Distribution, PureState, C64};
use crate::space::WalkSpace;

use super::pure::apply_unitary;
use super::{
    check_compatible, coin_label, EngineKind, NoiseModel, NoiseTarget, SeriesMeta, TimeSeries,
};

/// Trajectories per accumulation chunk.
pub const CHUNK: usize = 64;

/// SplitMix64 output function.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trajectory `k`: `splitmix64(master ^ splitmix64(k))`.
pub fn child_seed(master_seed: u64, k: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(k))
}

/// What an ensemble averages at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecordMode {
    /// Born position distribution of the trajectory state.
    #[default]
    Born,
    /// Indicator of a position sampled from the Born distribution.
    SampledPosition,
}

/// One recorded trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Born position distribution after each step, `t = 0 ..= steps`.
    pub distributions: Vec<Distribution>,
    /// A vertex sampled from each of those distributions.
    pub samples: Vec<usize>,
    pub final_state: PureState,
}

struct Walker<'a> {
    space: &'a WalkSpace,
    coin: &'a CoinOperator,
    noise: NoiseModel,
    angle: Option<Normal<f64>>,
    cur: Vec<C64>,
    next: Vec<C64>,
    weights: Vec<f64>,
}

impl<'a> Walker<'a> {
    fn new(
        initial: &PureState,
        coin: &'a CoinOperator,
        space: &'a WalkSpace,
        noise: NoiseModel,
    ) -> Result<Self> {
        check_compatible(space, coin, initial.layout())?;
        let angle = if noise.target() == NoiseTarget::ImperfectCoin {
            if space.coin_degree() != 2 {
                return Err(WalkError::Unsupported(format!(
                    "imperfect-coin noise needs a two-dimensional coin, {} has degree {}",
                    space.label(),
                    space.coin_degree()
                )));
            }
            let sd = noise.rate().sqrt() * FRAC_PI_4;
            Some(Normal::new(FRAC_PI_4, sd).map_err(|e| WalkError::invalid(e.to_string()))?)
        } else {
            None
        };
        let n = initial.amplitudes().len();
        Ok(Self {
            space,
            coin,
            noise,
            angle,
            cur: initial.amplitudes().to_vec(),
            next: vec![C64::new(0.0, 0.0); n],
            weights: Vec::with_capacity(n),
        })
    }

    fn reset(&mut self, initial: &PureState) {
        self.cur.copy_from_slice(initial.amplitudes());
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        match self.angle {
            Some(normal) => {
                let theta = normal.sample(rng);
                let c = CoinOperator::rotation_unchecked(theta);
                apply_unitary(self.space, &c, &self.cur, &mut self.next);
            }
            None => apply_unitary(self.space, self.coin, &self.cur, &mut self.next),
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        let p = self.noise.effective_rate();
        if self.noise.target().is_projective() && p > 0.0 && rng.random::<f64>() < p {
            self.measure(rng);
        }
    }

    /// Projective measurement in the target basis with Born-rule outcome.
    fn measure(&mut self, rng: &mut ChaCha8Rng) {
        let v = self.space.vertex_count();
        let d = self.space.coin_degree();
        self.weights.clear();
        match self.noise.target() {
            NoiseTarget::Coin => {
                for block in self.cur.chunks_exact(v) {
                    self.weights.push(block.iter().map(|c| c.norm_sqr()).sum());
                }
            }
            NoiseTarget::Particle => {
                self.weights.resize(v, 0.0);
                for block in self.cur.chunks_exact(v) {
                    for (w, c) in self.weights.iter_mut().zip(block) {
                        *w += c.norm_sqr();
                    }
                }
            }
            NoiseTarget::Both => self.weights.extend(self.cur.iter().map(|c| c.norm_sqr())),
            NoiseTarget::None | NoiseTarget::ImperfectCoin => return,
        }
        let outcome = sample_index(&self.weights, rng);
        let norm = self.weights[outcome].sqrt();
        let keep = |i: usize| match self.noise.target() {
            NoiseTarget::Coin => i / v == outcome,
            NoiseTarget::Particle => i % v == outcome,
            _ => i == outcome,
        };
        for (i, c) in self.cur.iter_mut().enumerate() {
            if keep(i) {
                *c /= norm;
            } else {
                *c = C64::new(0.0, 0.0);
            }
        }
        debug_assert!(d > 0);
    }

    fn distribution_into(&self, out: &mut [f64]) {
        let v = self.space.vertex_count();
        out.iter_mut().for_each(|p| *p = 0.0);
        for block in self.cur.chunks_exact(v) {
            for (p, c) in out.iter_mut().zip(block) {
                *p += c.norm_sqr();
            }
        }
    }
}

fn sample_index(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last_nonzero = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_nonzero = i;
            if u < w {
                return i;
            }
            u -= w;
        }
    }
    last_nonzero
}

/// A single trajectory seeded directly with `seed`.
pub fn sample_trajectory(
    initial: &PureState,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
    steps: usize,
    seed: u64,
) -> Result<Trajectory> {
    let mut walker = Walker::new(initial, coin, space, noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = space.vertex_count();
    let mut distributions = Vec::with_capacity(steps + 1);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut buf = vec![0.0; v];
    for t in 0..=steps {
        if t > 0 {
            walker.step(&mut rng);
        }
        walker.distribution_into(&mut buf);
        samples.push(sample_index(&buf, &mut rng));
        distributions.push(Distribution::new(buf.clone()));
    }
    let final_state = PureState::from_raw(initial.layout(), walker.cur);
    Ok(Trajectory {
        distributions,
        samples,
        final_state,
    })
}

/// Ensemble mean of per-trajectory position records, with per-entry
/// standard errors `s / √n`.
#[allow(clippy::too_many_arguments)]
pub fn run_ensemble(
    initial: &PureState,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
    steps: usize,
    trajectories: usize,
    master_seed: u64,
    mode: RecordMode,
) -> Result<TimeSeries> {
    if trajectories == 0 {
        return Err(WalkError::invalid("ensemble needs at least one trajectory"));
    }
    // validates inputs once up front
    Walker::new(initial, coin, space, noise)?;
    let v = space.vertex_count();
    let cells = (steps + 1) * v;
    let chunks: Vec<usize> = (0..trajectories.div_ceil(CHUNK)).collect();
    let partials: Vec<(Vec<f64>, Vec<f64>)> = chunks
        .par_iter()
        .map(|&chunk| {
            let mut walker = Walker::new(initial, coin, space, noise).expect("validated above");
            let mut sum = vec![0.0; cells];
            let mut sumsq = vec![0.0; cells];
            let mut buf = vec![0.0; v];
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(trajectories);
            for k in start..end {
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(master_seed, k as u64));
                walker.reset(initial);
                for t in 0..=steps {
                    if t > 0 {
                        walker.step(&mut rng);
                    }
                    walker.distribution_into(&mut buf);
                    let sample = sample_index(&buf, &mut rng);
                    let base = t * v;
                    match mode {
                        RecordMode::Born => {
                            for (x, &p) in buf.iter().enumerate() {
                                sum[base + x] += p;
                                sumsq[base + x] += p * p;
                            }
                        }
                        RecordMode::SampledPosition => {
                            sum[base + sample] += 1.0;
                            sumsq[base + sample] += 1.0;
                        }
                    }
                }
            }
            (sum, sumsq)
        })
        .collect();

    let mut sum = vec![0.0; cells];
    let mut sumsq = vec![0.0; cells];
    for (s, q) in &partials {
        for i in 0..cells {
            sum[i] += s[i];
            sumsq[i] += q[i];
        }
    }
    let n = trajectories as f64;
    let mut series = TimeSeries::new(SeriesMeta {
        space: space.label(),
        coin: Some(if noise.target() == NoiseTarget::ImperfectCoin {
            "rotation(normal)".into()
        } else {
            coin_label(coin)
        }),
        noise,
        engine: EngineKind::Trajectory,
        seed: Some(master_seed),
        trajectories: Some(trajectories),
    });
    let mut errors = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        let base = t * v;
        let mean: Vec<f64> = (0..v).map(|x| sum[base + x] / n).collect();
        let se: Vec<f64> = (0..v)
            .map(|x| {
                if trajectories < 2 {
                    return 0.0;
                }
                let m = mean[x];
                let var = ((sumsq[base + x] - n * m * m) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            })
            .collect();
        series.records.push(Distribution::new(mean));
        errors.push(se);
    }
    series.standard_errors = Some(errors);
    Ok(series)
}
