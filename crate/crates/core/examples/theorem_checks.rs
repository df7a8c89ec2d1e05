//! BLP and GBLP agree on unital dynamics; GBLP Markovianity tracks P-divisibility.

use blochflow::divisibility::{uniform_grid, ClassifyOptions};
use blochflow::verify::{reference_rows, theorem1_tally};
use blochflow::witness::{joint_classification, WitnessConfig};

fn main() -> blochflow::error::Result<()> {
    let cfg = WitnessConfig::default();
    let t = theorem1_tally(42, 100, &cfg)?;
    println!(
        "random unital families: {}/{} consistent, {} non-Markovian, {}/{} GBLP records rescaled",
        t.consistent, t.families, t.non_markovian, t.converted, t.gblp_records
    );

    let grid = uniform_grid(10.0, 200);
    for row in reference_rows()? {
        let got = joint_classification(&row.family, &cfg, &grid, &ClassifyOptions::default())?;
        let mark = if row.matches(&got) { "ok " } else { "BAD" };
        println!("{mark} {:<10} {}", got.family, got.label());
        for v in &got.violations {
            println!("    {v}");
        }
    }
    Ok(())
}
