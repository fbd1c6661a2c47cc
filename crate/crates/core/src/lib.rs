//! Receiver front-end (RFE) modeling toolkit.
//!
//! The front end is modeled as a memoryless cascade: additive thermal noise,
//! a radial saturation, automatic gain control and a uniform ADC with `b` bits
//! per real dimension. On top of that cascade the crate computes the squared
//! input/output correlation `rho^2`, the resulting SNDR and spectral
//! efficiency, the front-end power consumption and energy per bit, and
//! searches the knob space (noise figure, saturation level, resolution) for
//! single-antenna, beamformed and 1-bit receivers.
//!
//! All internal quantities are linear SI (Joules, Watts, Hz). dB conversions
//! live in [`units`] and only happen at the configuration boundary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod config;
pub mod error;
pub mod linkbudget;
pub mod metrics;
pub mod model;
pub mod optimizer;
pub mod power;
pub mod presets;
pub mod quadrature;
mod radial;
pub mod special;
pub mod sweep;
pub mod units;

pub use error::{Result, RfeError};
pub use metrics::{OperatingPoint, QuantizerModel, RhoMethod, RhoResult};
pub use model::{ComplexSample, QuantizerSpec, RfeKnobs, SaturationKind};
pub use power::{FiguresOfMerit, PowerBreakdown};
