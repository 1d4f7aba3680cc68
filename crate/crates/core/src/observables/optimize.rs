// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional minimization of `ν(p, T)` over the decoherence rate.

use serde::Serialize;

use crate::error::{Result, WalkError};

/// `(√5 - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalRate {
    pub p: f64,
    pub value: f64,
    pub evaluations: usize,
    /// Set when the refinement could not be trusted and the grid minimum is
    /// returned instead.
    pub warning: Option<String>,
    /// Objective at each grid point, in grid order.
    pub grid_values: Vec<f64>,
}

/// Golden-section search on `[lo, hi]` until the bracket is narrower than
/// `rel_tol` times its midpoint. Returns `(x_min, f(x_min), evaluations)`.
pub fn golden_section_minimize<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(WalkError::invalid(format!(
            "golden section needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2;
    while (b - a) > rel_tol * (0.5 * (a + b)).abs().max(f64::MIN_POSITIVE) && evals < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        evals += 1;
    }
    Ok(if fc < fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    })
}

/// Grid scan followed by golden-section refinement between the neighbours
/// of the grid minimum, to relative tolerance 1e-2 in `p`.
pub fn find_optimal_p<F>(mut objective: F, grid: &[f64]) -> Result<OptimalRate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if grid.len() < 3 {
        return Err(WalkError::invalid(
            "optimal-rate search needs at least 3 grid points",
        ));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(WalkError::invalid("grid must be strictly increasing"));
    }
    let grid_values = grid
        .iter()
        .map(|&p| objective(p))
        .collect::<Result<Vec<f64>>>()?;
    let (best, &best_value) = grid_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let mut evaluations = grid.len();
    if best == 0 || best + 1 == grid.len() {
        return Ok(OptimalRate {
            p: grid[best],
            value: best_value,
            evaluations,
            warning: Some("minimum on the grid boundary; no bracket to refine".into()),
            grid_values,
        });
    }
    let (p, value, n) =
        golden_section_minimize(&mut objective, grid[best - 1], grid[best + 1], 1e-2)?;
    evaluations += n;
    if value > best_value {
        return Ok(OptimalRate {
            p: grid[best],
            value: best_value,
            evaluations,
            warning: Some("bracket is not unimodal; returning the grid minimum".into()),
            grid_values,
        });
    }
    Ok(OptimalRate {
        p,
        value,
        evaluations,
        warning: None,
        grid_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx, _) =
            golden_section_minimize(|x| Ok((x - 0.3) * (x - 0.3) + 1.0), 0.0, 1.0, 1e-8).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-12);
        assert!(golden_section_minimize(Ok, 1.0, 0.0, 1e-3).is_err());
    }

    #[test]
    fn optimal_p_refines_inside_bracket() {
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 * 0.002).collect();
        let r = find_optimal_p(|p| Ok((p - 0.0131).abs() + 0.06), &grid).unwrap();
        assert!(r.warning.is_none());
        assert!((r.p - 0.0131).abs() < 0.0131 * 1e-2);
        assert!(r.value <= r.grid_values.iter().cloned().fold(f64::INFINITY, f64::min));
    }

    #[test]
    fn boundary_minimum_is_flagged() {
        let grid = [0.1, 0.2, 0.3];
        let r = find_optimal_p(Ok, &grid).unwrap();
        assert_eq!(r.p, 0.1);
        assert!(r.warning.is_some());
        assert!(find_optimal_p(Ok, &[0.1, 0.2]).is_err());
        assert!(find_optimal_p(Ok, &[0.3, 0.2, 0.1]).is_err());
    }
}
