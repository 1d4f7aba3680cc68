// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

use coinwalk::evolution::{run_density, run_ensemble, run_pure, RecordMode};
use coinwalk::observables::total_variation;
use coinwalk::{
    CoinOperator, DensityOperator, HilbertLayout, NoiseModel, NoiseTarget, PureState,
    RecordOptions, WalkSpace, C64,
};
use proptest::prelude::*;

fn target_strategy() -> impl Strategy<Value = NoiseTarget> {
    prop_oneof![
        Just(NoiseTarget::None),
        Just(NoiseTarget::Coin),
        Just(NoiseTarget::Particle),
        Just(NoiseTarget::Both),
    ]
}

fn space_strategy() -> impl Strategy<Value = WalkSpace> {
    prop_oneof![
        (3usize..12).prop_map(|t| WalkSpace::make_line(t).unwrap()),
        (3usize..14).prop_map(|n| WalkSpace::make_cycle(n).unwrap()),
        (2usize..5).prop_map(|n| WalkSpace::make_hypercube(n).unwrap()),
    ]
}

fn coin_for(space: &WalkSpace, theta: f64) -> CoinOperator {
    match space.coin_degree() {
        2 => CoinOperator::rotation(theta).unwrap(),
        d => CoinOperator::grover(d).unwrap(),
    }
}

fn random_state(layout: HilbertLayout, raw: &[(f64, f64)]) -> PureState {
    let mut amps: Vec<C64> = (0..layout.dim())
        .map(|k| {
            let (re, im) = raw[k % raw.len()];
            C64::new(re + 0.01 * k as f64, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    PureState::from_amplitudes(layout, amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn density_stays_a_state(
        space in space_strategy(),
        target in target_strategy(),
        p in 0.0f64..=1.0,
        theta in 0.1f64..1.5,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
    ) {
        let coin = coin_for(&space, theta);
        let psi = random_state(space.layout(), &raw);
        let rho = DensityOperator::density_from(&psi).unwrap();
        let series = run_density(&rho, &coin, &space, NoiseModel::new(target, p).unwrap(), 6, RecordOptions::default()).unwrap();
        for rec in &series.records {
            prop_assert!((rec.mass() - 1.0).abs() < 1e-10);
            prop_assert!(rec.values().iter().all(|&x| x > -1e-12));
        }
    }

    #[test]
    fn noiseless_density_matches_pure(
        space in space_strategy(),
        theta in 0.1f64..1.5,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
    ) {
        let coin = coin_for(&space, theta);
        let psi = random_state(space.layout(), &raw);
        let pure = run_pure(&psi, &coin, &space, 8, RecordOptions::default()).unwrap();
        let rho = DensityOperator::density_from(&psi).unwrap();
        let dens = run_density(&rho, &coin, &space, NoiseModel::none(), 8, RecordOptions::default()).unwrap();
        for (a, b) in pure.records.iter().zip(&dens.records) {
            prop_assert!(total_variation(a, b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn translation_is_a_permutation(space in space_strategy()) {
        let v = space.vertex_count();
        for a in 0..space.coin_degree() {
            let mut image: Vec<usize> = (0..v).map(|x| space.translate(a, x)).collect();
            for (x, &y) in image.iter().enumerate() {
                prop_assert_eq!(space.inverse_translate(a, y), x);
            }
            image.sort_unstable();
            prop_assert_eq!(image, (0..v).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rotation_coins_are_unitary(theta in -10.0f64..10.0) {
        prop_assert!(CoinOperator::rotation(theta).unwrap().unitarity_error() < 1e-12);
    }

    #[test]
    fn ensembles_repeat_under_a_seed(seed in any::<u64>(), target in target_strategy()) {
        let space = WalkSpace::make_line(10).unwrap();
        let coin = CoinOperator::hadamard();
        let noise = NoiseModel::new(target, 0.3).unwrap();
        let run = || run_ensemble(&space.initial_state(), &coin, &space, noise, 10, 70, seed, RecordMode::SampledPosition).unwrap();
        prop_assert_eq!(run().records, run().records);
    }
}

#[test]
fn grover_coins_are_unitary() {
    for d in 2..=12 {
        assert!(
            CoinOperator::grover(d).unwrap().unitarity_error() < 1e-12,
            "d={d}"
        );
    }
}
