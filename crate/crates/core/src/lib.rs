//! Absorptive nonlinearity of three-level Λ media under imperfect EIT.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] holds atom, drive and medium parameters and the unit
//!   conversions between Rabi frequencies and intensities.
//! * [`steady_state`] solves the Lindblad master equation exactly and turns
//!   the steady-state coherence into a susceptibility and absorption
//!   coefficient. It is the reference every closed form is checked against.
//! * [`analytic`] implements the closed-form absorption, peak, bandwidth and
//!   group-velocity expressions.
//! * [`propagation`] integrates Beer–Lambert propagation through optically
//!   thick media (uniform and copropagating pump).
//! * [`maxwell_bloch`] marches a noisy pulse envelope through the medium with
//!   a quasi-static Maxwell–Bloch scheme and reports power spectra.
//! * [`cli`] wires material presets, JSON scenarios and CSV/JSON output
//!   together for the `eit-bleach` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fit;
pub mod maxwell_bloch;
pub mod params;
pub mod propagation;
pub mod steady_state;

pub use error::{Error, Result};
