//! One-shot and concurrent hitting of the antipode of a hypercube.

use coinwalk::classical::{classical_evolve, classical_hitting_expectation};
use coinwalk::evolution::{run_absorbing, run_pure};
use coinwalk::observables::first_peak;
use coinwalk::{
    CoinOperator, DensityOperator, Distribution, NoiseModel, NoiseTarget, RecordOptions, WalkSpace,
};

fn main() -> coinwalk::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let steps = 4 * n;
    let cube = WalkSpace::make_hypercube(n)?;
    let coin = CoinOperator::grover(n)?;
    let target = cube.antipode();

    let pure = run_pure(
        &cube.initial_state(),
        &coin,
        &cube,
        steps,
        RecordOptions::default(),
    )?;
    let one_shot: Vec<f64> = pure.records.iter().map(|d| d[target]).collect();
    let classical = classical_evolve(
        &Distribution::point_mass(cube.vertex_count(), 0)?,
        &cube.classical_matrix(0.0)?,
        steps,
    )?;
    let rho = DensityOperator::density_from(&cube.initial_state())?;
    let monitored = run_absorbing(
        &rho,
        &coin,
        &cube,
        NoiseModel::new(NoiseTarget::Both, 0.05)?,
        target,
        steps,
    )?;
    let cumulative = monitored.cumulative_halts().unwrap_or_default();

    println!("t,oneshot,concurrent_p0.05,classical");
    for t in 0..=steps {
        println!(
            "{t},{:.6},{:.6},{:.3e}",
            one_shot[t],
            cumulative[t],
            classical.at(t)[target]
        );
    }
    if let Some((t, p)) = first_peak(&one_shot) {
        eprintln!(
            "N={n}: first peak at t={t} with P={p:.4} (pi N/2 = {:.2})",
            std::f64::consts::PI * n as f64 / 2.0
        );
    }
    eprintln!(
        "classical expected hitting time {:.1}",
        classical_hitting_expectation(&cube, 0, target)?
    );
    Ok(())
}
