//! Monte Carlo trajectories against the exact density evolution.

use coinwalk::evolution::{run_density, run_ensemble, RecordMode};
use coinwalk::observables::total_variation;
use coinwalk::{CoinOperator, DensityOperator, NoiseModel, NoiseTarget, RecordOptions, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let steps = 40;
    let line = WalkSpace::make_line(steps)?;
    let coin = CoinOperator::hadamard();
    let rho = DensityOperator::density_from(&line.initial_state())?;
    for target in [NoiseTarget::Coin, NoiseTarget::Particle, NoiseTarget::Both] {
        let noise = NoiseModel::new(target, 0.1)?;
        let exact = run_density(&rho, &coin, &line, noise, steps, RecordOptions::default())?;
        for n in [100, 1000, 10_000] {
            let ens = run_ensemble(
                &line.initial_state(),
                &coin,
                &line,
                noise,
                steps,
                n,
                42,
                RecordMode::Born,
            )?;
            println!(
                "{:<8} trajectories={n:<6} TV={:.4} summed SE={:.4}",
                target.name(),
                total_variation(ens.last(), exact.last())?,
                ens.summed_standard_error(steps).unwrap_or(f64::NAN)
            );
        }
    }
    // imperfect coins have no exact channel here; the ensemble is the answer
    let noise = NoiseModel::new(NoiseTarget::ImperfectCoin, 0.1)?;
    let ens = run_ensemble(
        &line.initial_state(),
        &coin,
        &line,
        noise,
        steps,
        2000,
        42,
        RecordMode::Born,
    )?;
    println!(
        "imperfect-coin mass at origin {:.4}",
        ens.last()[line.origin()]
    );
    Ok(())
}
