// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Derived quantities: distances, moments, time averages, mixing times,
//! uniformity, hitting statistics and decay fits.
//!
//! Total variational distance follows the convention `Σ_v |p₁(v) - p₂(v)|`
//! without a factor 1/2, so it ranges over `[0, 2]`.

pub mod hitting;
pub mod mixing;
pub mod optimize;

use std::f64::consts::SQRT_2;

use crate::error::{Result, WalkError};
use crate::evolution::TimeSeries;
use crate::hilbert::Distribution;
use crate::space::{Topology, WalkSpace};

pub use hitting::{
    concurrent_hitting, first_peak, fit_peak_decay, one_shot_hitting, DecayFit, HittingCurve,
    HittingMode,
};
pub use mixing::{
    density_mixing_time, mixing_time, pure_mixing_time, stationary_bound, MixingResult,
    MixingTracker, Reference,
};
pub use optimize::{find_optimal_p, golden_section_minimize, OptimalRate};

/// `Σ_v |d1(v) - d2(v)|`.
pub fn total_variation(d1: &Distribution, d2: &Distribution) -> Result<f64> {
    if d1.len() != d2.len() {
        return Err(WalkError::DimensionMismatch {
            expected: d1.len(),
            found: d2.len(),
        });
    }
    Ok(tv(d1.values(), d2.values()))
}

#[inline]
pub(crate) fn tv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Mean of the signed line coordinate.
pub fn mean_position(dist: &Distribution, space: &WalkSpace) -> Result<f64> {
    let (m1, _) = line_moments(dist, space)?;
    Ok(m1)
}

/// `√(Σ x² P(x) - (Σ x P(x))²)` over line coordinates.
pub fn std_dev(dist: &Distribution, space: &WalkSpace) -> Result<f64> {
    let (m1, m2) = line_moments(dist, space)?;
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

fn line_moments(dist: &Distribution, space: &WalkSpace) -> Result<(f64, f64)> {
    let max_steps = match space.topology() {
        Topology::Line { max_steps } => max_steps,
        _ => {
            return Err(WalkError::Unsupported(format!(
                "standard deviation needs line coordinates, got {}",
                space.label()
            )))
        }
    };
    if dist.len() != space.vertex_count() {
        return Err(WalkError::DimensionMismatch {
            expected: space.vertex_count(),
            found: dist.len(),
        });
    }
    let (mut m1, mut m2) = (0.0, 0.0);
    for (i, &p) in dist.values().iter().enumerate() {
        let x = i as f64 - max_steps as f64;
        m1 += x * p;
        m2 += x * x * p;
    }
    Ok((m1, m2))
}

/// Time-averaged distribution `(1/T) Σ_{t<T} P(v, t)`.
pub fn time_average(series: &TimeSeries, steps: usize) -> Result<Distribution> {
    if steps == 0 {
        return Err(WalkError::invalid("time average over zero steps"));
    }
    if steps > series.len() {
        return Err(WalkError::invalid(format!(
            "time average over {steps} records but the series holds {}",
            series.len()
        )));
    }
    let mut acc = vec![0.0; series.records[0].len()];
    for rec in &series.records[..steps] {
        for (a, &p) in acc.iter_mut().zip(rec.values()) {
            *a += p;
        }
    }
    let n = steps as f64;
    Ok(Distribution::new(acc.into_iter().map(|a| a / n).collect()))
}

/// Half-width of the window used by [`uniform_window_distance`]: the
/// largest site of parity `T` that does not exceed `T/√2`, so the window is
/// exactly the parity-`T` sites of `[-T/√2, T/√2]`.
pub fn uniform_window_bound(steps: usize) -> i64 {
    let edge = (steps as f64 / SQRT_2).floor() as i64;
    let parity = (steps % 2) as i64;
    if edge.rem_euclid(2) == parity {
        edge
    } else {
        edge - 1
    }
}

/// `ν = Σ_x |P(x) - P_u(x)|` with `P_u = √2 / T` on the parity-`T` sites of
/// `[-T/√2, T/√2]` and zero elsewhere.
pub fn uniform_window_distance(
    dist: &Distribution,
    space: &WalkSpace,
    steps: usize,
) -> Result<f64> {
    let max_steps = match space.topology() {
        Topology::Line { max_steps } => max_steps,
        _ => {
            return Err(WalkError::Unsupported(
                "uniform window distance is defined on the line".into(),
            ))
        }
    };
    if steps == 0 {
        return Err(WalkError::invalid("uniform window needs T >= 1"));
    }
    if dist.len() != space.vertex_count() {
        return Err(WalkError::DimensionMismatch {
            expected: space.vertex_count(),
            found: dist.len(),
        });
    }
    let reference = uniform_window_reference(space, steps);
    debug_assert_eq!(reference.len(), 2 * max_steps + 1);
    Ok(tv(dist.values(), reference.values()))
}

/// The reference `P_u(T)` laid out on the line window of `space`.
pub fn uniform_window_reference(space: &WalkSpace, steps: usize) -> Distribution {
    let bound = uniform_window_bound(steps);
    let level = SQRT_2 / steps as f64;
    let parity = (steps % 2) as i64;
    let values = (0..space.vertex_count())
        .map(|i| {
            let x = space.coordinate(i).expect("line space");
            if x.abs() <= bound && x.rem_euclid(2) == parity {
                level
            } else {
                0.0
            }
        })
        .collect();
    Distribution::new(values)
}
