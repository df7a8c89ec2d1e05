//! Divisibility classes of the built-in families.

use blochflow::channel::{
    family_collapse_shift, family_gad, family_isotropic_decay, family_spin_cosine,
};
use blochflow::divisibility::{classify_family, uniform_grid, ClassifyOptions, IntervalVerdict};

fn main() -> blochflow::error::Result<()> {
    let grid = uniform_grid(10.0, 200);
    let opts = ClassifyOptions::default();
    for fam in [
        family_gad(0.1, 4.0)?,
        family_isotropic_decay(0.1)?,
        family_spin_cosine(1.25),
        family_collapse_shift(0.7)?,
    ] {
        let r = classify_family(&fam, &grid, &opts)?;
        println!(
            "{:<10} {:<24} CP {:>3}  P-not-CP {:>3}  non-P {:>3}  non-invertible {:>3}",
            fam.name(),
            r.classification.as_str(),
            r.count(IntervalVerdict::Cp),
            r.count(IntervalVerdict::PNotCp),
            r.count(IntervalVerdict::NonP),
            r.count(IntervalVerdict::NonInvertible),
        );
        if !r.non_invertible_instants.is_empty() {
            println!(
                "           T(t) singular near t = {:.6?}",
                r.non_invertible_instants
            );
        }
    }
    Ok(())
}
