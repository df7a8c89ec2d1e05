//! Trace distance, generalized (biased) distance and the eigenvalue oracle for a few pairs.

use blochflow::bloch::{
    distinguish_probability, generalized_distance, helstrom_eigenvalue_oracle, trace_distance,
    BlochVector,
};

fn main() -> blochflow::error::Result<()> {
    let pairs = [
        (
            "x vs y",
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(0.0, 1.0, 0.0),
        ),
        (
            "z vs -z",
            BlochVector::new(0.0, 0.0, 1.0),
            BlochVector::new(0.0, 0.0, -1.0),
        ),
        (
            "identical",
            BlochVector::new(0.3, -0.2, 0.5),
            BlochVector::new(0.3, -0.2, 0.5),
        ),
        (
            "mixed",
            BlochVector::state(0.2, 0.1, 0.0)?,
            BlochVector::state(-0.1, 0.0, 0.3)?,
        ),
    ];
    println!(
        "{:<10} {:>8} {:>8} {:>10} {:>10} {:>10}",
        "pair", "D", "P_succ", "D(p=.25)", "oracle", "D(p=.9)"
    );
    for (name, a, b) in pairs {
        let d = trace_distance(a, b);
        println!(
            "{name:<10} {d:>8.4} {:>8.4} {:>10.4} {:>10.4} {:>10.4}",
            distinguish_probability(d)?,
            generalized_distance(a, b, 0.25)?,
            helstrom_eigenvalue_oracle(a, b, 0.25)?,
            generalized_distance(a, b, 0.9)?,
        );
    }
    Ok(())
}
