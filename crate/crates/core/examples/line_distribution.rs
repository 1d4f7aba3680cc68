//! Hadamard walk on the line next to the binomial classical walk.
//!
//! ```text
//! cargo run --release --example line_distribution -- 100
//! ```

use coinwalk::classical::classical_line_distribution;
use coinwalk::evolution::run_pure;
use coinwalk::observables::{mean_position, std_dev};
use coinwalk::{CoinOperator, RecordOptions, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let steps: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let line = WalkSpace::make_line(steps)?;
    let series = run_pure(
        &line.initial_state(),
        &CoinOperator::hadamard(),
        &line,
        steps,
        RecordOptions::default(),
    )?;
    let quantum = series.last();
    let classical = classical_line_distribution(steps);

    println!("x,P_quantum,P_classical");
    for i in 0..line.vertex_count() {
        let x = line.coordinate(i)?;
        if (x - steps as i64).rem_euclid(2) == 0 {
            println!("{x},{:.6e},{:.6e}", quantum[i], classical[i]);
        }
    }
    eprintln!(
        "T={steps} mean={:.4} sigma={:.4} sigma/T={:.4} classical sigma={:.4}",
        mean_position(quantum, &line)?,
        std_dev(quantum, &line)?,
        std_dev(quantum, &line)? / steps as f64,
        std_dev(&classical, &line)?,
    );
    Ok(())
}
