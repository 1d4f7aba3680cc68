//! Loads a coin from text and compares it with the Hadamard walk.

use coinwalk::evolution::run_pure;
use coinwalk::observables::{mean_position, std_dev};
use coinwalk::{CoinOperator, RecordOptions, WalkSpace};

// the symmetric coin (1/√2)[[1, i], [i, 1]], row-major `re im` per line
const COIN: &str = "\
0.7071067811865476 0
0 0.7071067811865476
0 0.7071067811865476
0.7071067811865476 0
";

fn main() -> coinwalk::Result<()> {
    let steps = 100;
    let line = WalkSpace::make_line(steps)?;
    let custom = CoinOperator::parse(COIN)?;
    println!(
        "unitarity error {:.2e}, unbiased {}",
        custom.unitarity_error(),
        custom.is_unbiased()
    );
    for (name, coin) in [
        ("hadamard", CoinOperator::hadamard()),
        ("rotation 0.4", CoinOperator::rotation(0.4)?),
        ("file", custom),
    ] {
        let s = run_pure(
            &line.initial_state(),
            &coin,
            &line,
            steps,
            RecordOptions::default(),
        )?;
        println!(
            "{name:<13} mean={:>8.3} sigma={:.3}",
            mean_position(s.last(), &line)?,
            std_dev(s.last(), &line)?
        );
    }
    Ok(())
}
