// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Mixing times.
//!
//! `M_ε = min{T | ∀ t > T: ||D(t) - π||_tv < ε}` where `D(t)` is either the
//! instantaneous distribution `P(·, t)` or the time average
//! `(1/t) Σ_{s<t} P(·, s)`.
//!
//! A finite run only sees `t ≤ horizon`. [`MixingTracker`] can additionally
//! *certify* that the distance stays below `ε` for every later `t`, which
//! lets long runs stop as soon as the answer is settled:
//!
//! * The walk channel is unital, so `I/D` is a fixed point. On a bipartite
//!   graph the normalized projectors onto the two vertex classes form a
//!   period-two orbit instead. Call either reference orbit `σ(t)`.
//! * Trace distance contracts under any channel, so
//!   `B = ||ρ(t) - σ(t)||₁ ≥ ||P(s) - P_σ(s)||_tv` for every `s ≥ t`. We use
//!   `√D · ||ρ - σ||_F ≥ ||ρ - σ||₁`, which needs no eigensolver.
//! * Writing `S(t) = Σ_{s<t} (P(s) - π)`, for `T' > t`
//!   `||S(T')|| ≤ ||S(t)|| + (T' - t) B + W`, where `W` bounds the partial
//!   sums of the alternating part `P_σ - π` (zero for `I/D`, `||P_σ - π||`
//!   for the period-two orbit). Hence every later time-averaged distance is
//!   at most `max(B, (||S(t)|| + W + B)/(t + 1))`.

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::evolution::pure::apply_unitary;
use crate::evolution::{check_compatible, DensityEvolution, TimeSeries};
use crate::hilbert::{DensityOperator, Distribution, PureState};
use crate::space::WalkSpace;

use super::tv;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MixingResult {
    /// Whether the distance at the end of the observed range is below `ε`.
    pub mixed: bool,
    /// Last observed time with distance `≥ ε` (or 0), when mixed.
    pub mixing_time: Option<usize>,
    /// Last time index examined.
    pub horizon: usize,
    pub epsilon: f64,
    pub averaged: bool,
    /// True when the distance was proven to stay below `ε` beyond the
    /// horizon; otherwise the value holds only up to `horizon`.
    pub certified: bool,
    /// Distance at `t = 0 ..= horizon`. For the averaged mode entry 0 holds
    /// the instantaneous distance of the initial record.
    pub distance_curve: Vec<f64>,
}

impl MixingResult {
    /// `M_ε` when mixed, otherwise the horizon as a lower bound.
    pub fn value_or_lower_bound(&self) -> usize {
        self.mixing_time.unwrap_or(self.horizon)
    }
}

/// Mixing time of a recorded series, examined up to `horizon`.
///
/// Averaged mode needs `horizon` records, instantaneous mode `horizon + 1`.
pub fn mixing_time(
    series: &TimeSeries,
    pi: &Distribution,
    epsilon: f64,
    horizon: usize,
    averaged: bool,
) -> Result<MixingResult> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(WalkError::invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let needed = if averaged {
        horizon.max(1)
    } else {
        horizon + 1
    };
    if needed > series.len() {
        return Err(WalkError::invalid(format!(
            "horizon {horizon} exceeds the series ({} records)",
            series.len()
        )));
    }
    if pi.len() != series.records[0].len() {
        return Err(WalkError::DimensionMismatch {
            expected: series.records[0].len(),
            found: pi.len(),
        });
    }
    let mut tracker = MixingTracker::new(pi.clone(), epsilon, averaged)?;
    for rec in &series.records[..needed] {
        tracker.push(rec);
    }
    Ok(tracker.finish(false))
}

/// Reference orbit used for certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Fixed point `I/D` (non-bipartite graphs).
    Uniform,
    /// Period-two orbit alternating between the two vertex classes.
    Alternating,
}

impl Reference {
    pub fn for_space(space: &WalkSpace) -> Self {
        if space.is_bipartite() {
            Reference::Alternating
        } else {
            Reference::Uniform
        }
    }

    /// `W`: bound on partial sums of `P_σ(s) - π` for uniform `π`.
    pub fn alternating_amplitude(&self) -> f64 {
        match self {
            Reference::Uniform => 0.0,
            // class-uniform vs uniform: every vertex differs by 1/|V|
            Reference::Alternating => 1.0,
        }
    }
}

/// `√D · ||ρ - σ||_F`, an upper bound on `||ρ - σ||₁`, minimized over the
/// phases of the reference orbit.
pub fn stationary_bound(rho: &DensityOperator, space: &WalkSpace, reference: Reference) -> f64 {
    let dim = rho.dim();
    let v = space.vertex_count();
    let m = rho.matrix();
    let mut off = 0.0;
    let mut diag_sq = [0.0f64; 2];
    let classes = match reference {
        Reference::Uniform => 1,
        Reference::Alternating => 2,
    };
    let mut class_dim = [0usize; 2];
    for i in 0..dim {
        class_dim[space.vertex_parity(i % v)] += 1;
    }
    for i in 0..dim {
        let row = &m[i * dim..(i + 1) * dim];
        for (j, z) in row.iter().enumerate() {
            if j != i {
                off += z.norm_sqr();
            }
        }
        let rii = row[i].re;
        let im_sq = row[i].im * row[i].im;
        match reference {
            Reference::Uniform => {
                let s = 1.0 / dim as f64;
                diag_sq[0] += (rii - s) * (rii - s) + im_sq;
            }
            Reference::Alternating => {
                let cls = space.vertex_parity(i % v);
                for phase in 0..2 {
                    let s = if cls == phase {
                        1.0 / class_dim[phase] as f64
                    } else {
                        0.0
                    };
                    diag_sq[phase] += (rii - s) * (rii - s) + im_sq;
                }
            }
        }
    }
    let best = diag_sq[..classes]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    (dim as f64).sqrt() * (off + best).sqrt()
}

/// Streaming mixing-time evaluation.
#[derive(Debug, Clone)]
pub struct MixingTracker {
    pi: Vec<f64>,
    epsilon: f64,
    averaged: bool,
    sum: Vec<f64>,
    count: usize,
    last_violation: usize,
    curve: Vec<f64>,
    scratch: Vec<f64>,
}

impl MixingTracker {
    pub fn new(pi: Distribution, epsilon: f64, averaged: bool) -> Result<Self> {
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(WalkError::invalid(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let n = pi.len();
        Ok(Self {
            pi: pi.into_values(),
            epsilon,
            averaged,
            sum: vec![0.0; n],
            count: 0,
            last_violation: 0,
            curve: Vec::new(),
            scratch: vec![0.0; n],
        })
    }

    /// Time index of the most recent distance value.
    pub fn time(&self) -> usize {
        if self.averaged {
            self.count
        } else {
            self.count.saturating_sub(1)
        }
    }

    /// Most recent distance value.
    pub fn distance(&self) -> f64 {
        *self.curve.last().unwrap_or(&f64::INFINITY)
    }

    pub fn last_violation(&self) -> usize {
        self.last_violation
    }

    /// Feeds `P(·, s)` for the next `s` and returns the new distance.
    pub fn push(&mut self, p: &Distribution) -> f64 {
        for (s, &x) in self.sum.iter_mut().zip(p.values()) {
            *s += x;
        }
        self.count += 1;
        let dist = if self.averaged {
            let n = self.count as f64;
            for (o, &s) in self.scratch.iter_mut().zip(&self.sum) {
                *o = s / n;
            }
            let d = tv(&self.scratch, &self.pi);
            if self.count == 1 {
                self.curve.push(d);
            }
            d
        } else {
            tv(p.values(), &self.pi)
        };
        self.curve.push(dist);
        let t = self.time();
        if t >= 1 && dist >= self.epsilon {
            self.last_violation = t;
        }
        dist
    }

    /// Whether every later distance is provably below `ε`, given
    /// `bound ≥ sup_{s ≥ t} ||P(s) - P_σ(s)||` for the next unseen `t` and
    /// the reference amplitude `w`.
    pub fn certify(&self, bound: f64, w: f64) -> bool {
        if self.count == 0 {
            return false;
        }
        if self.averaged {
            let t = self.count as f64;
            let accumulated = t * self.distance();
            let worst = bound.max((accumulated + w + bound) / (t + 1.0));
            worst < self.epsilon && self.distance() < self.epsilon
        } else {
            bound + w < self.epsilon && self.distance() < self.epsilon
        }
    }

    pub fn finish(self, certified: bool) -> MixingResult {
        let horizon = self.time();
        let mixed = certified || (self.count > 0 && self.distance() < self.epsilon);
        MixingResult {
            mixed,
            mixing_time: mixed.then_some(self.last_violation),
            horizon,
            epsilon: self.epsilon,
            averaged: self.averaged,
            certified,
            distance_curve: self.curve,
        }
    }
}

/// Runs the density engine until the mixing time is certified or the
/// horizon is reached.
pub fn density_mixing_time(
    mut evolution: DensityEvolution<'_>,
    space: &WalkSpace,
    pi: &Distribution,
    epsilon: f64,
    horizon: usize,
    averaged: bool,
) -> Result<MixingResult> {
    let reference = Reference::for_space(space);
    let w = reference.alternating_amplitude();
    let mut tracker = MixingTracker::new(pi.clone(), epsilon, averaged)?;
    let mut next_check = 0usize;
    let mut stride = 8usize;
    loop {
        tracker.push(&evolution.position_distribution());
        if tracker.time() >= horizon {
            return Ok(tracker.finish(false));
        }
        if tracker.distance() < epsilon && tracker.time() >= next_check {
            let bound = stationary_bound(evolution.state(), space, reference);
            if tracker.certify(bound, w) {
                return Ok(tracker.finish(true));
            }
            next_check = tracker.time() + stride;
            stride = (stride * 2).min(1024);
        } else if tracker.distance() >= epsilon {
            stride = 8;
        }
        evolution.step();
    }
}

/// Unitary counterpart of [`density_mixing_time`]. A unitary walk never
/// contracts, so this always runs to the horizon.
pub fn pure_mixing_time(
    initial: &PureState,
    coin: &CoinOperator,
    space: &WalkSpace,
    pi: &Distribution,
    epsilon: f64,
    horizon: usize,
    averaged: bool,
) -> Result<MixingResult> {
    check_compatible(space, coin, initial.layout())?;
    let mut tracker = MixingTracker::new(pi.clone(), epsilon, averaged)?;
    let mut cur = initial.amplitudes().to_vec();
    let mut next = cur.clone();
    let v = space.vertex_count();
    let mut dist = Distribution::zeros(v);
    loop {
        let d = dist.values_mut();
        d.iter_mut().for_each(|x| *x = 0.0);
        for (i, z) in cur.iter().enumerate() {
            d[i % v] += z.norm_sqr();
        }
        tracker.push(&dist);
        if tracker.time() >= horizon {
            return Ok(tracker.finish(false));
        }
        apply_unitary(space, coin, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
}
