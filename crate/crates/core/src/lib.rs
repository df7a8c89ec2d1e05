//! Qubit channels as affine maps of the Bloch ball.
//!
//! [`bloch`] holds states and the two distances, [`channel`] the affine maps and
//! time-dependent families, [`divisibility`] the CP / P tests and interval
//! classification, [`witness`] the revival scans, and [`cli`] the `blochflow` binary.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod channel;
pub mod cli;
pub mod divisibility;
pub mod error;
pub mod format;
pub mod sphere;
pub mod verify;
pub mod witness;
