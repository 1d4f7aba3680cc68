//! Finds the decoherence rate that makes the line distribution flattest.

use coinwalk::evolution::DensityEvolution;
use coinwalk::observables::{find_optimal_p, uniform_window_distance};
use coinwalk::{CoinOperator, DensityOperator, NoiseModel, NoiseTarget, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let steps = 100;
    let line = WalkSpace::make_line(steps)?;
    let coin = CoinOperator::hadamard();
    let nu = |target: NoiseTarget, p: f64| -> coinwalk::Result<f64> {
        let rho = DensityOperator::density_from(&line.initial_state())?;
        let mut evo = DensityEvolution::new(rho, &coin, &line, NoiseModel::new(target, p)?)?;
        for _ in 0..steps {
            evo.step();
        }
        uniform_window_distance(&evo.position_distribution(), &line, steps)
    };

    let grid: Vec<f64> = (0..=10).map(|k| 0.01 * k as f64).collect();
    println!("T={steps} nu(p=0)={:.4}", nu(NoiseTarget::Both, 0.0)?);
    for target in [NoiseTarget::Both, NoiseTarget::Particle, NoiseTarget::Coin] {
        let opt = find_optimal_p(|p| nu(target, p), &grid)?;
        println!(
            "{:<9} p_u={:.5} p_u*T={:.3} nu_min={:.4} evaluations={}{}",
            target.name(),
            opt.p,
            opt.p * steps as f64,
            opt.value,
            opt.evaluations,
            opt.warning.map(|w| format!(" ({w})")).unwrap_or_default(),
        );
    }
    Ok(())
}
