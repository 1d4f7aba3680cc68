// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Hitting statistics and the exponential decay fit of the first peak.

use serde::Serialize;

use crate::error::{Result, WalkError};
use crate::evolution::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HittingMode {
    /// Full measurement at a chosen time.
    OneShot,
    /// Per-step monitoring of the target with `{P_v, 1 - P_v}`.
    Concurrent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingCurve {
    pub mode: HittingMode,
    /// `P_h(t)`: one-shot probability at `t`, or halt probability at step `t`.
    pub values: Vec<f64>,
    /// Running total of halts (concurrent mode only).
    pub cumulative: Option<Vec<f64>>,
}

/// `P_h(t) = P(target, t)` from a non-absorbing run.
pub fn one_shot_hitting(series: &TimeSeries, target: usize) -> Result<HittingCurve> {
    let n = series.records.first().map_or(0, |d| d.len());
    if target >= n {
        return Err(WalkError::OutOfRange {
            index: target,
            bound: n,
        });
    }
    Ok(HittingCurve {
        mode: HittingMode::OneShot,
        values: series
            .records
            .iter()
            .map(|d| d[target].clamp(0.0, 1.0))
            .collect(),
        cumulative: None,
    })
}

/// Per-step and cumulative halts of an absorbing run.
pub fn concurrent_hitting(series: &TimeSeries) -> Result<HittingCurve> {
    let halts = series
        .halt_probability
        .as_ref()
        .ok_or_else(|| WalkError::invalid("concurrent hitting needs an absorbing run"))?;
    let values: Vec<f64> = halts.iter().map(|&h| h.max(0.0)).collect();
    let cumulative = values
        .iter()
        .scan(0.0, |acc, &h| {
            *acc += h;
            Some(*acc)
        })
        .collect();
    Ok(HittingCurve {
        mode: HittingMode::Concurrent,
        values,
        cumulative: Some(cumulative),
    })
}

/// Location of the first pronounced peak of a curve.
///
/// The peak region starts at the first value reaching half the global
/// maximum and ends where two consecutive values fall below it; two are
/// needed because bipartite walks put zeros on every other step. Returns
/// `None` for an identically zero curve.
pub fn first_peak(values: &[f64]) -> Option<(usize, f64)> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return None;
    }
    let half = 0.5 * max;
    let start = values.iter().position(|&v| v >= half)?;
    let mut end = values.len();
    for t in start + 1..values.len() {
        if values[t] < half && values.get(t + 1).is_none_or(|&n| n < half) {
            end = t;
            break;
        }
    }
    values[start..end]
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (k, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((start + k, v)),
        })
}

/// Fit of `P_h(p) ≈ P_h(0) · exp(-k p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    /// Fitted exponent `k`.
    pub exponent: f64,
    /// Fitted `log P_h(0)`.
    pub log_amplitude: f64,
    /// Root-mean-square residual of `log P_h`.
    pub residual: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

impl DecayFit {
    /// `α = k - N`.
    pub fn alpha(&self, dimension: usize) -> f64 {
        self.exponent - dimension as f64
    }
}

/// Least-squares line through `(p, log P_h(p))`. Rates must lie in
/// `[0, 1/N]` for a hypercube of dimension `N`.
pub fn fit_peak_decay(rates: &[f64], peaks: &[f64], dimension: usize) -> Result<DecayFit> {
    if rates.len() != peaks.len() {
        return Err(WalkError::DimensionMismatch {
            expected: rates.len(),
            found: peaks.len(),
        });
    }
    if rates.len() < 3 {
        return Err(WalkError::invalid("decay fit needs at least 3 points"));
    }
    if dimension == 0 {
        return Err(WalkError::invalid("decay fit needs a positive dimension"));
    }
    let p_cap = 1.0 / dimension as f64 + 1e-12;
    if let Some(&p) = rates.iter().find(|&&p| !(0.0..=p_cap).contains(&p)) {
        return Err(WalkError::invalid(format!(
            "rate {p} outside [0, 1/{dimension}]"
        )));
    }
    if let Some(&h) = peaks.iter().find(|&&h| h <= 0.0 || !h.is_finite()) {
        return Err(WalkError::invalid(format!(
            "peak value {h} is not positive"
        )));
    }
    let n = rates.len() as f64;
    let logs: Vec<f64> = peaks.iter().map(|h| h.ln()).collect();
    let mx = rates.iter().sum::<f64>() / n;
    let my = logs.iter().sum::<f64>() / n;
    let sxx: f64 = rates.iter().map(|p| (p - mx) * (p - mx)).sum();
    if sxx == 0.0 {
        return Err(WalkError::invalid(
            "decay fit needs at least two distinct rates",
        ));
    }
    let sxy: f64 = rates
        .iter()
        .zip(&logs)
        .map(|(p, y)| (p - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (rates
        .iter()
        .zip(&logs)
        .map(|(p, y)| (y - intercept - slope * p).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit {
        exponent: -slope,
        log_amplitude: intercept,
        residual,
        p_min: rates.iter().cloned().fold(f64::INFINITY, f64::min),
        p_max: rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        points: rates.len(),
    })
}
