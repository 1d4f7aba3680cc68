//! Classical reference walks: mixing on cycles and hitting on hypercubes.

use coinwalk::classical::{classical_hitting_expectation, classical_mixing_time};
use coinwalk::{Distribution, WalkSpace};

fn main() -> coinwalk::Result<()> {
    let eps = 0.01;
    for n in [8usize, 16, 24, 32] {
        let ring = WalkSpace::make_cycle(n)?;
        let m = ring.classical_matrix(0.0)?;
        let start = Distribution::point_mass(n, 0)?;
        let r = classical_mixing_time(
            &ring,
            &m,
            &start,
            &Distribution::uniform(n),
            eps,
            1_000_000,
            true,
        )?;
        println!(
            "cycle N={n:<3} averaged M={:<6} N^2/(16 eps)={:<6} certified={}",
            r.value_or_lower_bound(),
            (n * n) as f64 / (16.0 * eps),
            r.certified
        );
    }
    for n in 2..=9 {
        let cube = WalkSpace::make_hypercube(n)?;
        let h = classical_hitting_expectation(&cube, 0, cube.antipode())?;
        println!(
            "hypercube N={n} expected hitting time {h:.2} (2^N = {})",
            1 << n
        );
    }
    Ok(())
}
