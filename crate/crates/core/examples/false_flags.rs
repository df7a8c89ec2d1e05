//! Where the biased distance misleads: preparation bias alone, or evolution it cannot see.

use blochflow::witness::false_flag_demos;

fn main() -> blochflow::error::Result<()> {
    let report = false_flag_demos()?;
    for d in report.demos() {
        let (lo, hi) = d
            .series
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
                (l.min(v), h.max(v))
            });
        println!("{} ({}, p = {})", d.name, d.family, d.p);
        println!(
            "  D ranges over [{lo:.4}, {hi:.4}], max deviation from closed form {:.1e}",
            d.max_deviation
        );
        for n in &d.notes {
            println!("  {n}");
        }
    }
    Ok(())
}
