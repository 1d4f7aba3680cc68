//! Time-averaged mixing times on a cycle under coin and particle noise.
//!
//! Odd cycles mix without noise; even cycles need decoherence.

use coinwalk::evolution::DensityEvolution;
use coinwalk::observables::{density_mixing_time, pure_mixing_time};
use coinwalk::{CoinOperator, DensityOperator, Distribution, NoiseModel, NoiseTarget, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let eps = 0.05;
    let coin = CoinOperator::hadamard();
    for n in [11usize, 12] {
        let ring = WalkSpace::make_cycle(n)?;
        let pi = Distribution::uniform(n);
        let horizon = (20.0 * (n * n) as f64 / eps) as usize;
        let pure = pure_mixing_time(&ring.initial_state(), &coin, &ring, &pi, eps, horizon, true)?;
        println!(
            "N={n} p=0: mixed={} M={}",
            pure.mixed,
            pure.value_or_lower_bound()
        );
        for target in [NoiseTarget::Coin, NoiseTarget::Particle] {
            for p in [0.01, 0.05, 0.2] {
                let rho = DensityOperator::density_from(&ring.initial_state())?;
                let evo = DensityEvolution::new(rho, &coin, &ring, NoiseModel::new(target, p)?)?;
                let r = density_mixing_time(evo, &ring, &pi, eps, horizon, true)?;
                println!(
                    "N={n} {:<8} p={p:<4} M={:>6} certified={}",
                    target.name(),
                    r.value_or_lower_bound(),
                    r.certified
                );
            }
        }
    }
    Ok(())
}
