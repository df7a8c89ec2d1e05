//! Write the CSV series behind the three reference figures into a directory.
//!
//! `cargo run --example figures -- target/figures`

use std::path::PathBuf;

use blochflow::cli::{figure_series, series_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    for n in 1..=3 {
        for (name, series) in figure_series(n).map_err(|e| e.to_string())? {
            let path = dir.join(name);
            std::fs::write(&path, series_csv(&series))?;
            let last = series.values.last().copied().unwrap_or(f64::NAN);
            println!(
                "{:<40} {} points, D(end) = {last:.6}",
                path.display(),
                series.len()
            );
        }
    }
    Ok(())
}
