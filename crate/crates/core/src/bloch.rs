//! Bloch-vector states and the two distinguishability distances.
//!
//! A qubit state is `ρ = ½(I + r·σ)` with `|r| ≤ 1`. Two distances are provided:
//!
//! - the trace distance `½‖ρ₁ − ρ₂‖₁ = ½|r₁ − r₂|`;
//! - the generalized (Helstrom) distance `‖pρ₁ − qρ₂‖₁ = max(|w|, |p − q|)` with
//!   `w = p r₁ − q r₂` and `q = 1 − p`.
//!
//! At `p = ½` the two coincide. [`helstrom_eigenvalue_oracle`] recomputes the
//! generalized distance from the spectrum of the 2×2 Helstrom matrix and is kept
//! independent of the closed form on purpose.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `|r| ≤ 1` when a vector is used as a physical state.
pub const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// Bloch radius.
    pub fn norm(self) -> f64 {
        self.to_vector().norm()
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.y, k * self.z)
    }

    pub fn is_physical(self) -> bool {
        self.norm() <= 1.0 + STATE_TOL
    }

    pub fn is_pure(self) -> bool {
        (self.norm() - 1.0).abs() <= STATE_TOL
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Checked constructor for states read from user input.
    pub fn state(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self::new(x, y, z);
        if !r.is_finite() || !r.is_physical() {
            return Err(Error::InvalidParameter {
                name: "bloch vector",
                reason: format!("({x}, {y}, {z}) has radius {} > 1", r.norm()),
            });
        }
        Ok(r)
    }

    /// Density matrix `½(I + r·σ)`.
    pub fn density_matrix(self) -> Matrix2<Complex64> {
        let h = 0.5;
        Matrix2::new(
            Complex64::new(h * (1.0 + self.z), 0.0),
            Complex64::new(h * self.x, -h * self.y),
            Complex64::new(h * self.x, h * self.y),
            Complex64::new(h * (1.0 - self.z), 0.0),
        )
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// `w = p r₁ − q r₂` together with the bias it was built with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HelstromVector {
    pub w: BlochVector,
    pub p: f64,
}

impl HelstromVector {
    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `|p − q| = |2p − 1|`, the floor of the generalized distance.
    pub fn bias(&self) -> f64 {
        (2.0 * self.p - 1.0).abs()
    }

    /// Generalized distance carried by this vector, `max(|w|, |p − q|)`.
    pub fn distance(&self) -> f64 {
        self.w.norm().max(self.bias())
    }
}

/// Time-indexed distance values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSeries {
    #[serde(serialize_with = "crate::format::ser_vec_f64")]
    pub times: Vec<f64>,
    #[serde(serialize_with = "crate::format::ser_vec_f64")]
    pub values: Vec<f64>,
}

impl DistanceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        check_increasing(&times)?;
        if let Some(v) = values
            .iter()
            .find(|v| !(**v >= 0.0 && **v <= 1.0 + STATE_TOL))
        {
            return Err(Error::DistanceOutOfRange(*v));
        }
        Ok(Self { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Maximal runs of consecutive steps where the value grows by more than
    /// `epsilon`, as index ranges `(start, end)` into the series.
    pub fn increase_runs(&self, epsilon: f64) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for k in 0..self.values.len().saturating_sub(1) {
            let up = self.values[k + 1] - self.values[k] > epsilon;
            match (up, start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    runs.push((s, k));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.values.len() - 1));
        }
        runs
    }
}

pub(crate) fn check_increasing(times: &[f64]) -> Result<()> {
    if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!(
            "times must be strictly increasing, found {} then {}",
            w[0], w[1]
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite time".into()));
    }
    Ok(())
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

/// `½|r₁ − r₂|`.
pub fn trace_distance(r1: BlochVector, r2: BlochVector) -> f64 {
    0.5 * (r1.to_vector() - r2.to_vector()).norm()
}

/// Success probability `(1 + D)/2` of telling two equiprobable states apart.
pub fn distinguish_probability(d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::DistanceOutOfRange(d));
    }
    Ok(0.5 * (1.0 + d))
}

pub fn helstrom_vector(r1: BlochVector, r2: BlochVector, p: f64) -> Result<HelstromVector> {
    check_probability(p)?;
    let w = p * r1.to_vector() - (1.0 - p) * r2.to_vector();
    Ok(HelstromVector {
        w: BlochVector::from_vector(&w),
        p,
    })
}

/// `max(|p r₁ − q r₂|, |2p − 1|)`.
pub fn generalized_distance(r1: BlochVector, r2: BlochVector, p: f64) -> Result<f64> {
    Ok(helstrom_vector(r1, r2, p)?.distance())
}

/// Trace norm of `Δ = pρ₁ − qρ₂` from the eigenvalues of the 2×2 Hermitian matrix.
///
/// `Δ = ½((p − q)I + w·σ)`, so `‖Δ‖₁` already carries the ½ of the trace distance and
/// equals [`generalized_distance`] with no further scaling.
pub fn helstrom_eigenvalue_oracle(r1: BlochVector, r2: BlochVector, p: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    let delta =
        r1.density_matrix() * Complex64::new(p, 0.0) - r2.density_matrix() * Complex64::new(q, 0.0);
    // Δ is Hermitian, so |eig(Δ)| are the singular values and Σ|λ| = Tr√(Δ†Δ).
    let eig = delta.symmetric_eigenvalues();
    Ok(eig.iter().map(|l| l.abs()).sum())
}
