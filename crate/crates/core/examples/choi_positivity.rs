//! CP versus positivity: the transpose is positive but not completely positive.

use blochflow::channel::{compose, family_gad, AffineChannel};
use blochflow::divisibility::{choi_matrix, is_cp, is_positive, DEFAULT_TOL};

fn report(name: &str, ch: &AffineChannel) {
    let cp = is_cp(ch, DEFAULT_TOL);
    let p = is_positive(ch, DEFAULT_TOL);
    println!(
        "{name:<22} Choi spectrum {:>8.4?}  CP {:<5} P {:<5} max |Tn+c| - 1 = {:.2e}",
        choi_matrix(ch).eigenvalues(),
        cp.cp,
        p.positive,
        p.max_excess
    );
}

fn main() -> blochflow::error::Result<()> {
    let transpose = AffineChannel::diagonal([1.0, -1.0, 1.0], [0.0; 3]);
    report("identity", &AffineChannel::identity());
    report("transpose", &transpose);
    let gad = family_gad(0.1, 4.0)?.eval(1.0);
    report("GAD at t = 1", &gad);
    report("transpose . GAD", &compose(&transpose, &gad));
    report(
        "stretch 1.1",
        &AffineChannel::diagonal([1.1, 1.0, 1.0], [0.0; 3]),
    );
    Ok(())
}
