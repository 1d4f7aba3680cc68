// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Unitary evolution of a pure state.

use crate::coin::CoinOperator;
use crate::error::Result;
use crate::hilbert::{PureState, C64};
use crate::space::{WalkSpace, MAX_HYPERCUBE_DIMENSION};

use super::{
    check_compatible, coin_label, EngineKind, NoiseModel, RecordOptions, SeriesMeta, TimeSeries,
};

/// `out = T (C ⊗ I) input`. `out` is fully overwritten.
pub(crate) fn apply_unitary(
    space: &WalkSpace,
    coin: &CoinOperator,
    input: &[C64],
    out: &mut [C64],
) {
    let d = space.coin_degree();
    let v = space.vertex_count();
    let mut block = [C64::new(0.0, 0.0); MAX_HYPERCUBE_DIMENSION];
    let mut mixed = [C64::new(0.0, 0.0); MAX_HYPERCUBE_DIMENSION];
    for x in 0..v {
        let mut any = false;
        for a in 0..d {
            block[a] = input[a * v + x];
            any |= block[a] != C64::new(0.0, 0.0);
        }
        if !any {
            for a in 0..d {
                out[a * v + space.translate(a, x)] = C64::new(0.0, 0.0);
            }
            continue;
        }
        coin.apply(&block[..d], &mut mixed[..d]);
        for a in 0..d {
            out[a * v + space.translate(a, x)] = mixed[a];
        }
    }
}

/// One step `ψ ← T (C ⊗ I) ψ`.
pub fn step_pure(state: &PureState, coin: &CoinOperator, space: &WalkSpace) -> Result<PureState> {
    check_compatible(space, coin, state.layout())?;
    let mut out = vec![C64::new(0.0, 0.0); state.amplitudes().len()];
    apply_unitary(space, coin, state.amplitudes(), &mut out);
    Ok(PureState::from_raw(state.layout(), out))
}

/// `steps` unitary steps, recording `P(v, t)` for `t = 0 ..= steps`.
pub fn run_pure(
    initial: &PureState,
    coin: &CoinOperator,
    space: &WalkSpace,
    steps: usize,
    record: RecordOptions,
) -> Result<TimeSeries> {
    check_compatible(space, coin, initial.layout())?;
    let mut series = TimeSeries::new(SeriesMeta {
        space: space.label(),
        coin: Some(coin_label(coin)),
        noise: NoiseModel::none(),
        engine: EngineKind::Pure,
        seed: None,
        trajectories: None,
    });
    let mut cur = initial.amplitudes().to_vec();
    let mut next = vec![C64::new(0.0, 0.0); cur.len()];
    series.records.push(initial.position_distribution());
    for _ in 0..steps {
        apply_unitary(space, coin, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        series
            .records
            .push(PureState::from_raw(initial.layout(), cur.clone()).position_distribution());
    }
    if record.running_average {
        series.fill_running_average();
    }
    Ok(series)
}

/// Final state after `steps` unitary steps.
pub fn evolve_pure(
    initial: &PureState,
    coin: &CoinOperator,
    space: &WalkSpace,
    steps: usize,
) -> Result<PureState> {
    check_compatible(space, coin, initial.layout())?;
    let mut cur = initial.amplitudes().to_vec();
    let mut next = vec![C64::new(0.0, 0.0); cur.len()];
    for _ in 0..steps {
        apply_unitary(space, coin, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(PureState::from_raw(initial.layout(), cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{LEFT, RIGHT};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn basis(space: &WalkSpace, coin: usize, vertex: usize) -> PureState {
        let mut c = vec![C64::new(0.0, 0.0); space.coin_degree()];
        c[coin] = C64::new(1.0, 0.0);
        PureState::pure_from(&c, vertex, space.layout()).unwrap()
    }

    #[test]
    fn one_hadamard_step_from_right() {
        let line = WalkSpace::make_line(3).unwrap();
        let o = line.origin();
        let psi = step_pure(&basis(&line, RIGHT, o), &CoinOperator::hadamard(), &line).unwrap();
        assert!((psi.amplitude(RIGHT, o + 1).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((psi.amplitude(LEFT, o - 1).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
    }

    /// Sum over all 2^t coin histories of the product of Hadamard entries;
    /// independent of the engine's block/permutation structure.
    fn path_enumeration(t: usize, start_coin: usize) -> std::collections::BTreeMap<i64, f64> {
        let h = [[1.0, 1.0], [1.0, -1.0]];
        let scale = FRAC_1_SQRT_2.powi(t as i32);
        // amplitude keyed by (final coin, final position)
        let mut amp: std::collections::BTreeMap<(usize, i64), f64> = Default::default();
        for hist in 0..(1usize << t) {
            let mut coin = start_coin;
            let mut x = 0i64;
            let mut w = 1.0;
            for s in 0..t {
                let next = (hist >> s) & 1;
                w *= h[next][coin];
                coin = next;
                x += if coin == 0 { 1 } else { -1 };
            }
            *amp.entry((coin, x)).or_default() += w * scale;
        }
        let mut p = std::collections::BTreeMap::new();
        for ((_, x), a) in amp {
            *p.entry(x).or_insert(0.0) += a * a;
        }
        p
    }

    #[test]
    fn three_steps_match_path_enumeration() {
        let oracle = path_enumeration(3, RIGHT);
        // frozen from the oracle: P(3)=1/8, P(1)=5/8, P(-1)=1/8, P(-3)=1/8
        let frozen = [(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)];
        for (x, p) in frozen {
            assert!((oracle[&x] - p).abs() < 1e-15);
        }
        let line = WalkSpace::make_line(3).unwrap();
        let s = run_pure(
            &basis(&line, RIGHT, line.origin()),
            &CoinOperator::hadamard(),
            &line,
            3,
            Default::default(),
        )
        .unwrap();
        for (x, p) in frozen {
            let v = line.vertex_at(x).unwrap();
            assert!((s.at(3)[v] - p).abs() < 1e-14, "x={x}");
        }
        for x in [-2, 0, 2] {
            assert_eq!(s.at(3)[line.vertex_at(x).unwrap()], 0.0);
        }
    }

    #[test]
    fn longer_walk_matches_path_enumeration() {
        let t = 10;
        let oracle = path_enumeration(t, LEFT);
        let line = WalkSpace::make_line(t).unwrap();
        let psi = evolve_pure(
            &basis(&line, LEFT, line.origin()),
            &CoinOperator::hadamard(),
            &line,
            t,
        )
        .unwrap();
        let p = psi.position_distribution();
        for (x, want) in oracle {
            assert!((p[line.vertex_at(x).unwrap()] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn grover_two_cube_reaches_corner_in_two_steps() {
        let q2 = WalkSpace::make_hypercube(2).unwrap();
        let s = FRAC_1_SQRT_2;
        let psi0 =
            PureState::pure_from(&[C64::new(s, 0.0), C64::new(s, 0.0)], 0, q2.layout()).unwrap();
        let series = run_pure(
            &psi0,
            &CoinOperator::grover(2).unwrap(),
            &q2,
            2,
            Default::default(),
        )
        .unwrap();
        assert!((series.at(2)[0b11] - 1.0).abs() < 1e-15);
        assert!(series.at(1)[0b11].abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let q3 = WalkSpace::make_hypercube(3).unwrap();
        let psi = basis(&q3, 0, 0);
        assert!(step_pure(&psi, &CoinOperator::hadamard(), &q3).is_err());
    }
}
