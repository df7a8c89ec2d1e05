//! Round-trip a family through the CSV table format and classify the interpolated copy.
//!
//! `cargo run --example custom_table -- out.csv` also keeps the table on disk.

use blochflow::channel::{family_spin_cosine, ChannelTable};
use blochflow::divisibility::{classify_family, uniform_grid, ClassifyOptions};

fn main() -> blochflow::error::Result<()> {
    let source = family_spin_cosine(0.5);
    let times: Vec<f64> = (0..=400).map(|k| k as f64 * 0.025).collect();
    let table = ChannelTable::sample(&source, &times)?;

    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, &csv)?;
        println!("wrote {path}");
    }

    let reread = ChannelTable::from_reader(csv.as_slice())?.into_family("spin-table");
    let worst = times[..times.len() - 1]
        .iter()
        .map(|&t| {
            reread
                .eval(t + 0.0125)
                .max_abs_diff(&source.eval(t + 0.0125))
        })
        .fold(0.0, f64::max);
    println!("max interpolation error at midpoints: {worst:.2e}");

    let report = classify_family(
        &reread,
        &uniform_grid(10.0, 100),
        &ClassifyOptions::default(),
    )?;
    println!("{}", report.classification.as_str());
    println!("non-invertible near {:?}", report.non_invertible_instants);
    Ok(())
}
