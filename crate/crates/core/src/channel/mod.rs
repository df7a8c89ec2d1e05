//! Affine qubit channels `r ↦ T r + c` and time-parameterized families of them.
//!
//! Composition, inversion and the intermediate map `Λ(t, τ) = E(t) ∘ E(τ)⁻¹` live
//! here; the named families are in [`families`] and tabulated families read from
//! CSV in [`table`].

pub mod families;
pub mod table;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::bloch::{self, BlochVector, HelstromVector};
use crate::error::{Error, Result};

pub use families::{
    family_collapse_shift, family_collapse_shift_with_rate, family_gad, family_isotropic_decay,
    family_spin_cosine,
};
pub use table::ChannelTable;

/// Smallest singular value at or below which `T` is treated as rank deficient.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;

/// Slack on `|T r + c| ≤ 1` before an output is flagged as leaving the ball.
pub const OUTPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChannel {
    /// Rotation, contraction and expansion part.
    pub linear: Matrix3<f64>,
    /// Translation of the Bloch ball.
    pub translation: Vector3<f64>,
}

/// Output of [`AffineChannel::apply_flagged`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mapped {
    pub state: BlochVector,
    /// `|r'| > 1 + OUTPUT_TOL`: the channel is not positive on this input.
    pub outside_ball: bool,
}

impl AffineChannel {
    pub fn new(linear: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    pub fn diagonal(d: [f64; 3], c: [f64; 3]) -> Self {
        Self::new(Matrix3::from_diagonal(&Vector3::from(d)), Vector3::from(c))
    }

    pub fn is_finite(&self) -> bool {
        self.linear
            .iter()
            .chain(self.translation.iter())
            .all(|v| v.is_finite())
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.translation.norm() <= tol
    }

    pub fn apply(&self, r: BlochVector) -> BlochVector {
        BlochVector::from_vector(&(self.linear * r.to_vector() + self.translation))
    }

    pub fn apply_flagged(&self, r: BlochVector) -> Mapped {
        let state = self.apply(r);
        Mapped {
            state,
            outside_ball: state.norm() > 1.0 + OUTPUT_TOL,
        }
    }

    pub fn smallest_singular_value(&self) -> f64 {
        self.linear
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Max-abs entry distance to another channel, over both parts.
    pub fn max_abs_diff(&self, other: &AffineChannel) -> f64 {
        (self.linear - other.linear)
            .iter()
            .chain((self.translation - other.translation).iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sqrt(‖ΔT‖_F² + |Δc|²)`.
    pub fn frobenius_diff(&self, other: &AffineChannel) -> f64 {
        let dt = (self.linear - other.linear).norm_squared();
        let dc = (self.translation - other.translation).norm_squared();
        (dt + dc).sqrt()
    }
}

impl Default for AffineChannel {
    fn default() -> Self {
        Self::identity()
    }
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &AffineChannel, b: &AffineChannel) -> AffineChannel {
    AffineChannel::new(
        a.linear * b.linear,
        a.linear * b.translation + a.translation,
    )
}

pub fn invert(ch: &AffineChannel) -> Result<AffineChannel> {
    invert_with_threshold(ch, SINGULAR_THRESHOLD)
}

pub fn invert_with_threshold(ch: &AffineChannel, threshold: f64) -> Result<AffineChannel> {
    let smallest = ch.smallest_singular_value();
    if !(smallest > threshold) {
        return Err(Error::SingularChannel {
            smallest_singular_value: smallest,
            threshold,
        });
    }
    let inv = ch.linear.try_inverse().ok_or(Error::SingularChannel {
        smallest_singular_value: smallest,
        threshold,
    })?;
    Ok(AffineChannel::new(inv, -(inv * ch.translation)))
}

type EvalFn = dyn Fn(f64) -> AffineChannel + Send + Sync;

/// A one-parameter family `t ↦ E(t, 0)` of affine channels.
#[derive(Clone)]
pub struct ChannelFamily {
    name: String,
    params: Vec<(String, f64)>,
    unital_hint: Option<bool>,
    eval: Arc<EvalFn>,
}

impl ChannelFamily {
    pub fn from_fn<F>(name: impl Into<String>, params: Vec<(String, f64)>, eval: F) -> Self
    where
        F: Fn(f64) -> AffineChannel + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            params,
            unital_hint: None,
            eval: Arc::new(eval),
        }
    }

    pub fn with_unital_hint(mut self, unital: bool) -> Self {
        self.unital_hint = Some(unital);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn unital_hint(&self) -> Option<bool> {
        self.unital_hint
    }

    pub fn eval(&self, t: f64) -> AffineChannel {
        (self.eval)(t)
    }

    /// Largest `|c(t)|` over the grid, with the time it occurs.
    pub fn max_translation(&self, grid: &[f64]) -> (f64, f64) {
        grid.iter()
            .map(|&t| (self.eval(t).translation.norm(), t))
            .fold((0.0, grid.first().copied().unwrap_or(0.0)), |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            })
    }
}

impl fmt::Debug for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelFamily")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("unital_hint", &self.unital_hint)
            .finish_non_exhaustive()
    }
}

/// `Λ(t, τ)` with `compose(Λ, E(τ)) = E(t)`.
pub fn intermediate(fam: &ChannelFamily, tau: f64, t: f64) -> Result<AffineChannel> {
    if !(0.0 <= tau && tau <= t) {
        return Err(Error::TimeOrder { tau, t });
    }
    if tau == t {
        return Ok(AffineChannel::identity());
    }
    let inv = invert(&fam.eval(tau))?;
    Ok(compose(&fam.eval(t), &inv))
}

/// `T(t)(p r₁ − q r₂) + (p − q) c(t)`, the Helstrom vector of the evolved pair.
pub fn evolved_helstrom_vector(
    fam: &ChannelFamily,
    t: f64,
    r1: BlochVector,
    r2: BlochVector,
    p: f64,
) -> Result<HelstromVector> {
    let w0 = bloch::helstrom_vector(r1, r2, p)?;
    Ok(evolve_helstrom(&fam.eval(t), &w0))
}

/// Push an initial Helstrom vector through a channel.
pub fn evolve_helstrom(ch: &AffineChannel, w0: &HelstromVector) -> HelstromVector {
    let w = ch.linear * w0.w.to_vector() + (w0.p - w0.q()) * ch.translation;
    HelstromVector {
        w: BlochVector::from_vector(&w),
        p: w0.p,
    }
}
