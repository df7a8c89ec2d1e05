//! Cases where the generalized distance misreads distinguishability.
//!
//! - collapse-and-shift: identical states keep distance `|p − q|`;
//! - isotropic decay: pairs with `|w| ≤ |p − q|` never change distance while the
//!   states shrink;
//! - spin cosine: the distance freezes at `|p − q|` whenever `|cos ωt| < |p − q|`.

use serde::Serialize;

use super::distance_trajectory;
use crate::bloch::{BlochVector, DistanceSeries};
use crate::channel::{
    family_collapse_shift, family_isotropic_decay, family_spin_cosine, ChannelFamily,
};
use crate::error::Result;
use crate::format::ser_f64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Demo {
    pub name: &'static str,
    pub family: String,
    pub r1: BlochVector,
    pub r2: BlochVector,
    #[serde(serialize_with = "ser_f64")]
    pub p: f64,
    pub series: DistanceSeries,
    /// Closed-form values on the same grid.
    #[serde(serialize_with = "crate::format::ser_vec_f64")]
    pub expected: Vec<f64>,
    pub max_deviation: f64,
    pub notes: Vec<String>,
}

impl Demo {
    fn build(
        name: &'static str,
        fam: &ChannelFamily,
        (r1, r2): (BlochVector, BlochVector),
        p: f64,
        grid: Vec<f64>,
        expected: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let series = distance_trajectory(fam, r1, r2, p, &grid)?;
        let expected: Vec<f64> = grid.iter().map(|&t| expected(t)).collect();
        let max_deviation = series
            .values
            .iter()
            .zip(&expected)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(Self {
            name,
            family: fam.name().to_string(),
            r1,
            r2,
            p,
            series,
            expected,
            max_deviation,
            notes: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FalseFlagReport {
    pub collapse_shift: Demo,
    pub isotropic: Demo,
    pub spin: Demo,
}

impl FalseFlagReport {
    pub fn demos(&self) -> [&Demo; 3] {
        [&self.collapse_shift, &self.isotropic, &self.spin]
    }

    pub fn max_deviation(&self) -> f64 {
        self.demos()
            .iter()
            .map(|d| d.max_deviation)
            .fold(0.0, f64::max)
    }
}

fn linspace(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

pub fn false_flag_demos() -> Result<FalseFlagReport> {
    let p = 0.25;
    let bias = (2.0 * p - 1.0f64).abs();

    let shift = 0.7;
    let r = BlochVector::new(0.3, -0.2, 0.5);
    let mut collapse_shift = Demo::build(
        "collapse-shift",
        &family_collapse_shift(shift)?,
        (r, r),
        p,
        linspace(20.0, 201),
        |_| bias,
    )?;
    collapse_shift.notes.push(format!(
        "identical states stay at |p - q| = {bias}; |(p - q) c| = {} for comparison",
        bias * shift
    ));

    let gamma = 0.1;
    let a = BlochVector::new(0.0, 0.0, 0.5);
    let mut isotropic = Demo::build(
        "isotropic-decay",
        &family_isotropic_decay(gamma)?,
        (a, a.scaled(-1.0)),
        p,
        linspace(30.0, 301),
        |t| (0.5 * (-gamma * t).exp()).max(bias),
    )?;
    isotropic
        .notes
        .push("radius 0.5 pair: |w| = 0.5 e^{-gamma t} never exceeds |p - q|".into());

    let omega = 1.25;
    let mut spin = Demo::build(
        "spin-cosine",
        &family_spin_cosine(omega),
        (
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(-1.0, 0.0, 0.0),
        ),
        p,
        linspace(10.0, 500),
        |t| (omega * t).cos().abs().max(bias),
    )?;
    let flat = spin.series.values.iter().filter(|&&v| v == bias).count();
    spin.notes.push(format!(
        "{flat} of {} samples sit on the |p - q| plateau",
        spin.series.len()
    ));

    Ok(FalseFlagReport {
        collapse_shift,
        isotropic,
        spin,
    })
}
