//! Built-in channel families. Every family evaluates to the identity at `t = 0`.

use nalgebra::{Matrix3, Vector3};

use super::{AffineChannel, ChannelFamily};
use crate::error::{Error, Result};

fn positive_rate(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be a finite positive rate, got {v}"),
        })
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {v}"),
        })
    }
}

/// Generalized amplitude damping with an oscillating bath population.
///
/// `T = diag(√η, √η, η)`, `c = (0, 0, (2s − 1)(1 − η))`, with `η = e^{−γt}` and
/// `s = cos²(f t)`.
pub fn family_gad(gamma: f64, f: f64) -> Result<ChannelFamily> {
    positive_rate("gamma", gamma)?;
    finite("f", f)?;
    Ok(ChannelFamily::from_fn(
        "gad",
        vec![("gamma".into(), gamma), ("f".into(), f)],
        move |t| {
            let eta = (-gamma * t).exp();
            let s = (f * t).cos().powi(2);
            let root = eta.sqrt();
            AffineChannel::new(
                Matrix3::from_diagonal(&Vector3::new(root, root, eta)),
                Vector3::new(0.0, 0.0, (2.0 * s - 1.0) * (1.0 - eta)),
            )
        },
    ))
}

/// `T = e^{−γt} I`, `c = 0`.
pub fn family_isotropic_decay(gamma: f64) -> Result<ChannelFamily> {
    positive_rate("gamma", gamma)?;
    Ok(
        ChannelFamily::from_fn("isotropic", vec![("gamma".into(), gamma)], move |t| {
            AffineChannel::diagonal([(-gamma * t).exp(); 3], [0.0; 3])
        })
        .with_unital_hint(true),
    )
}

/// Two coupled spins seen from one of them: `T = diag(cos ωt, cos ωt, 1)`, `c = 0`.
///
/// Non-invertible wherever `cos ωt = 0`.
pub fn family_spin_cosine(omega: f64) -> ChannelFamily {
    ChannelFamily::from_fn("spin", vec![("omega".into(), omega)], move |t| {
        let k = (omega * t).cos();
        AffineChannel::diagonal([k, k, 1.0], [0.0; 3])
    })
    .with_unital_hint(true)
}

/// Collapse to the centre followed by a shift to `(0, 0, c)`, reached as `t → ∞`
/// at unit rate.
pub fn family_collapse_shift(c: f64) -> Result<ChannelFamily> {
    family_collapse_shift_with_rate(c, 1.0)
}

/// `T = e^{−kt} I`, `c(t) = (0, 0, c(1 − e^{−kt}))`.
pub fn family_collapse_shift_with_rate(c: f64, k: f64) -> Result<ChannelFamily> {
    if !(c.abs() <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("shift must lie in [-1, 1], got {c}"),
        });
    }
    positive_rate("k", k)?;
    Ok(ChannelFamily::from_fn(
        "collapse",
        vec![("c".into(), c), ("k".into(), k)],
        move |t| {
            let e = (-k * t).exp();
            AffineChannel::diagonal([e; 3], [0.0, 0.0, c * (1.0 - e)])
        },
    )
    .with_unital_hint(c == 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{trace_distance, BlochVector};
    use crate::channel::intermediate;

    fn builtins() -> Vec<ChannelFamily> {
        vec![
            family_gad(0.1, 4.0).unwrap(),
            family_isotropic_decay(0.1).unwrap(),
            family_spin_cosine(1.25),
            family_collapse_shift(0.7).unwrap(),
        ]
    }

    #[test]
    fn every_builtin_starts_at_identity() {
        for fam in builtins() {
            assert!(
                fam.eval(0.0).max_abs_diff(&AffineChannel::identity()) < 1e-12,
                "{}",
                fam.name()
            );
        }
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(family_gad(0.0, 4.0).is_err());
        assert!(family_gad(-1.0, 4.0).is_err());
        assert!(family_gad(0.1, f64::NAN).is_err());
        assert!(family_isotropic_decay(0.0).is_err());
        assert!(family_collapse_shift(1.2).is_err());
        assert!(family_collapse_shift(-1.0).is_ok());
        assert!(family_collapse_shift_with_rate(0.5, 0.0).is_err());
    }

    #[test]
    fn gad_matches_closed_form() {
        let (g, f) = (0.1, 4.0);
        let fam = family_gad(g, f).unwrap();
        for &t in &[0.3, 1.0, 2.7, 9.5] {
            let ch = fam.eval(t);
            let eta = (-g * t).exp();
            let s = (f * t).cos().powi(2);
            let expected = AffineChannel::diagonal(
                [eta.sqrt(), eta.sqrt(), eta],
                [0.0, 0.0, (2.0 * s - 1.0) * (1.0 - eta)],
            );
            assert!(ch.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn gad_long_time_limit() {
        let fam = family_gad(0.1, 4.0).unwrap();
        let t = 500.0;
        let ch = fam.eval(t);
        assert!(ch.linear.amax() < 1e-10);
        let cz = 2.0 * (4.0 * t).cos().powi(2) - 1.0;
        assert!((ch.translation[2] - cz).abs() < 1e-10);
    }

    #[test]
    fn gad_trace_distance_follows_analytic_decay() {
        let (g, f) = (0.1, 4.0);
        let fam = family_gad(g, f).unwrap();
        let pairs = [
            (
                BlochVector::new(1.0, 0.0, 0.0),
                BlochVector::new(0.0, 1.0, 0.0),
            ),
            (
                BlochVector::new(0.3, -0.2, 0.5),
                BlochVector::new(-0.1, 0.4, -0.6),
            ),
            (
                BlochVector::new(0.0, 0.0, 1.0),
                BlochVector::new(0.0, 0.0, -1.0),
            ),
        ];
        for (r1, r2) in pairs {
            let (dx, dy, dz) = (r2.x - r1.x, r2.y - r1.y, r2.z - r1.z);
            for k in 0..100 {
                let t = 0.1 * k as f64;
                let ch = fam.eval(t);
                let d = trace_distance(ch.apply(r1), ch.apply(r2));
                let analytic = 0.5
                    * ((-g * t).exp() * (dx * dx + dy * dy) + (-2.0 * g * t).exp() * dz * dz)
                        .sqrt();
                assert!((d - analytic).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gad_unitality() {
        let fam = family_gad(0.1, 4.0).unwrap();
        assert!(!fam.eval(0.3).is_unital(1e-12));
        // s = ½ at f t = π/4
        let t = std::f64::consts::FRAC_PI_4 / 4.0;
        assert!(fam.eval(t).is_unital(1e-12));
    }

    #[test]
    fn isotropic_halves_at_log2_over_gamma() {
        let g = 0.1;
        let fam = family_isotropic_decay(g).unwrap();
        let r = fam
            .eval(std::f64::consts::LN_2 / g)
            .apply(BlochVector::new(1.0, 0.0, 0.0));
        assert!((r.x - 0.5).abs() < 1e-15);
        assert_eq!((r.y, r.z), (0.0, 0.0));
    }

    #[test]
    fn spin_collapses_equator_at_quarter_period() {
        let fam = family_spin_cosine(1.25);
        let ch = fam.eval(std::f64::consts::PI / 2.5);
        assert!(ch.linear[(0, 0)].abs() < 1e-15);
        assert!(ch.linear[(1, 1)].abs() < 1e-15);
        assert_eq!(ch.linear[(2, 2)], 1.0);
        assert!(intermediate(&fam, std::f64::consts::PI / 2.5, 2.0).is_err());
    }

    #[test]
    fn spin_leaves_z_axis_pairs_alone() {
        let fam = family_spin_cosine(1.25);
        let (a, b) = (
            BlochVector::new(0.0, 0.0, 0.6),
            BlochVector::new(0.0, 0.0, -0.6),
        );
        for k in 0..50 {
            let ch = fam.eval(0.2 * k as f64);
            assert_eq!(trace_distance(ch.apply(a), ch.apply(b)), 0.6);
        }
    }

    #[test]
    fn collapse_shift_limit() {
        let fam = family_collapse_shift(0.7).unwrap();
        let r = fam.eval(60.0).apply(BlochVector::new(1.0, 0.0, 0.0));
        assert!((r.to_vector() - Vector3::new(0.0, 0.0, 0.7)).amax() < 1e-12);

        let dep = family_collapse_shift(0.0).unwrap().eval(60.0);
        assert!(dep.max_abs_diff(&AffineChannel::diagonal([0.0; 3], [0.0; 3])) < 1e-12);
    }

    #[test]
    fn unital_hints() {
        assert_eq!(
            family_isotropic_decay(0.1).unwrap().unital_hint(),
            Some(true)
        );
        assert_eq!(family_spin_cosine(1.0).unital_hint(), Some(true));
        assert_eq!(family_gad(0.1, 4.0).unwrap().unital_hint(), None);
        for k in 0..20 {
            let t = 0.37 * k as f64;
            assert!(family_isotropic_decay(0.1).unwrap().eval(t).is_unital(0.0));
            assert!(family_spin_cosine(1.25).eval(t).is_unital(0.0));
        }
    }
}
