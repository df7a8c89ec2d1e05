//! Number formatting shared by the CSV and JSON writers.

use serde::Serializer;

/// Significant digits kept in every written float.
pub const SIG_DIGITS: usize = 12;

/// Round to [`SIG_DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIG_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Shortest round-trip text of `v` after rounding to 12 significant digits.
pub fn fmt_f64(v: f64) -> String {
    let r = round_sig(v);
    if r == 0.0 {
        // no "-0"
        return "0".to_string();
    }
    format!("{r}")
}

pub(crate) fn ser_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v))
}

pub(crate) fn ser_opt_f64<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_vec_f64<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| round_sig(*x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_at_twelve_digits() {
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(1e-13), "0.0000000000001");
        assert_eq!(fmt_f64(123456.78901234567), "123456.789012");
    }
}
