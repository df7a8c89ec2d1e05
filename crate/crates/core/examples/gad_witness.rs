//! Generalized amplitude damping with an oscillating bath: the trace distance only
//! falls, but a biased prior exposes revivals.

use blochflow::channel::family_gad;
use blochflow::witness::{self, Mode, PairSource, WitnessConfig};

fn main() -> blochflow::error::Result<()> {
    let fam = family_gad(0.1, 4.0)?;
    let cfg = WitnessConfig {
        pair_sources: vec![
            PairSource::AxisPure,
            PairSource::AntipodalSweep,
            PairSource::FigurePairs,
        ],
        ..WitnessConfig::default()
    };

    match witness::blp_witness(&fam, &cfg)? {
        Some(w) => println!("BLP witness: {w:?}"),
        None => println!("BLP: no increase of the trace distance"),
    }
    if let Some(w) = witness::gblp_witness(&fam, &cfg)? {
        println!(
            "GBLP witness: p = {}, r1 = {:?}, r2 = {:?}, D {:.6} -> {:.6} on [{:.4}, {:.4}]",
            w.p, w.r1, w.r2, w.d1, w.d2, w.t1, w.t2
        );
    }
    println!(
        "BLP measure  {:.6}",
        witness::nm_measure(&fam, &cfg, Mode::Blp)?
    );
    println!(
        "GBLP measure {:.6}",
        witness::nm_measure(&fam, &cfg, Mode::Gblp)?
    );
    Ok(())
}
