// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical random walks used as baselines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, WalkError};
use crate::evolution::{EngineKind, NoiseModel, SeriesMeta, TimeSeries};
use crate::hilbert::Distribution;
use crate::observables::{tv, MixingResult, MixingTracker};
use crate::space::{StochasticMatrix, WalkSpace};

/// Largest vertex count accepted by the dense hitting-time solve.
pub const HITTING_SOLVE_CAP: usize = 2048;

/// `P(t) = M^t P(0)` for `t = 0 ..= steps`.
pub fn classical_evolve(
    initial: &Distribution,
    matrix: &StochasticMatrix,
    steps: usize,
) -> Result<TimeSeries> {
    if initial.len() != matrix.size() {
        return Err(WalkError::DimensionMismatch {
            expected: matrix.size(),
            found: initial.len(),
        });
    }
    let mut series = TimeSeries::new(classical_meta(format!("classical({})", matrix.size())));
    series.records.reserve(steps + 1);
    series.records.push(initial.clone());
    let mut cur = initial.values().to_vec();
    let mut next = vec![0.0; cur.len()];
    for _ in 0..steps {
        matrix.apply(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        series.records.push(Distribution::new(cur.clone()));
    }
    Ok(series)
}

fn classical_meta(space: String) -> SeriesMeta {
    SeriesMeta {
        space,
        coin: None,
        noise: NoiseModel::none(),
        engine: EngineKind::Classical,
        seed: None,
        trajectories: None,
    }
}

/// Binomial distribution of the unbiased ±1 walk after `steps` steps, laid
/// out on the line window of half-width `max(steps, 1)`.
pub fn classical_line_distribution(steps: usize) -> Distribution {
    let half = steps.max(1);
    let mut row = vec![1.0f64];
    for _ in 0..steps {
        let mut next = vec![0.0; row.len() + 1];
        for (k, &w) in row.iter().enumerate() {
            next[k] += 0.5 * w;
            next[k + 1] += 0.5 * w;
        }
        row = next;
    }
    // row[k]: k steps left out of `steps`, so x = steps - 2k
    let mut values = vec![0.0; 2 * half + 1];
    for (k, &w) in row.iter().enumerate() {
        let x = steps as i64 - 2 * k as i64;
        values[(x + half as i64) as usize] = w;
    }
    Distribution::new(values)
}

/// Expected number of steps of the unbiased walk from `source` until it
/// first reaches `target`, from `(I - Q) h = 1` over non-target vertices.
pub fn classical_hitting_expectation(
    space: &WalkSpace,
    source: usize,
    target: usize,
) -> Result<f64> {
    space.check_vertex(source)?;
    space.check_vertex(target)?;
    if source == target {
        return Ok(0.0);
    }
    let n = space.vertex_count();
    if n > HITTING_SOLVE_CAP {
        return Err(WalkError::ResourceCap {
            dimension: n,
            cap: HITTING_SOLVE_CAP,
        });
    }
    let m = space.classical_matrix(0.0)?;
    // non-target vertices in order, target removed
    let pos = |v: usize| if v < target { v } else { v - 1 };
    let k = n - 1;
    let mut a = DMatrix::<f64>::identity(k, k);
    for i in (0..n).filter(|&i| i != target) {
        for &(j, w) in m.column(i) {
            if j != target {
                a[(pos(i), pos(j))] -= w;
            }
        }
    }
    let b = DVector::<f64>::from_element(k, 1.0);
    let h = a.lu().solve(&b).ok_or_else(|| {
        WalkError::Singular(format!("target {target} unreachable in {}", space.label()))
    })?;
    let value = h[pos(source)];
    if !value.is_finite() || value < 0.0 {
        return Err(WalkError::Singular(format!(
            "target {target} unreachable in {}",
            space.label()
        )));
    }
    Ok(value)
}

/// Streaming mixing time of the classical walk from `initial`, stopping
/// early once every later distance is certified below `epsilon`.
///
/// The bound uses contractivity of stochastic matrices against the
/// stationary orbit: `π` itself, or the two class-uniform distributions for
/// a bipartite graph without resting.
pub fn classical_mixing_time(
    space: &WalkSpace,
    matrix: &StochasticMatrix,
    initial: &Distribution,
    pi: &Distribution,
    epsilon: f64,
    horizon: usize,
    averaged: bool,
) -> Result<MixingResult> {
    let n = matrix.size();
    if initial.len() != n || pi.len() != n {
        return Err(WalkError::DimensionMismatch {
            expected: n,
            found: if initial.len() != n {
                initial.len()
            } else {
                pi.len()
            },
        });
    }
    let alternating = space.is_bipartite() && matrix.resting() == 0.0 && space.vertex_count() == n;
    let orbit: Vec<Vec<f64>> = if alternating {
        let sizes = (0..n).fold([0usize; 2], |mut acc, v| {
            acc[space.vertex_parity(v)] += 1;
            acc
        });
        (0..2)
            .map(|c| {
                (0..n)
                    .map(|v| {
                        if space.vertex_parity(v) == c {
                            1.0 / sizes[c] as f64
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        vec![pi.values().to_vec()]
    };
    let w = if alternating { 1.0 } else { 0.0 };
    let mut tracker = MixingTracker::new(pi.clone(), epsilon, averaged)?;
    let mut cur = initial.values().to_vec();
    let mut next = vec![0.0; n];
    let mut dist = Distribution::zeros(n);
    loop {
        dist.values_mut().copy_from_slice(&cur);
        tracker.push(&dist);
        if tracker.time() >= horizon {
            return Ok(tracker.finish(false));
        }
        if tracker.distance() < epsilon {
            let bound = orbit
                .iter()
                .map(|s| tv(&cur, s))
                .fold(f64::INFINITY, f64::min);
            if tracker.certify(bound, w) {
                return Ok(tracker.finish(true));
            }
        }
        matrix.apply(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
}
