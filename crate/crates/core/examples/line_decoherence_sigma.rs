//! Spread of the line walk as decoherence grows, for each noise target.

use coinwalk::evolution::DensityEvolution;
use coinwalk::observables::std_dev;
use coinwalk::{CoinOperator, DensityOperator, NoiseModel, NoiseTarget, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let steps = 60;
    let line = WalkSpace::make_line(steps)?;
    let coin = CoinOperator::hadamard();
    let targets = [NoiseTarget::Coin, NoiseTarget::Particle, NoiseTarget::Both];

    println!("p,sigma_coin,sigma_particle,sigma_both");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let mut row = format!("{p:.1}");
        for target in targets {
            let rho = DensityOperator::density_from(&line.initial_state())?;
            let mut evo = DensityEvolution::new(rho, &coin, &line, NoiseModel::new(target, p)?)?;
            for _ in 0..steps {
                evo.step();
            }
            row.push_str(&format!(
                ",{:.5}",
                std_dev(&evo.position_distribution(), &line)?
            ));
        }
        println!("{row}");
    }
    eprintln!(
        "p=1 on both is the classical walk: sigma = sqrt(T) = {:.5}",
        (steps as f64).sqrt()
    );
    Ok(())
}
