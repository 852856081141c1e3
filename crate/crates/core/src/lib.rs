//! Small-signal low-noise amplifier design.
//!
//! The flow runs from Touchstone S-parameters through stability analysis,
//! noise and gain circles and reflection-coefficient selection to
//! single-stub matching networks and their microstrip dimensions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod design;
pub mod gain;
pub mod matching;
pub mod noise;
pub mod reference;
pub mod stability;
pub mod touchstone;

#[cfg(test)]
mod testing;

pub use complex::{parse_gamma, polar_deg, Complex, PolarForm, SmithCircle};
pub use design::{design_amplifier, DesignReport, DesignSpec, Objective};
pub use noise::{CascadeStage, NoiseParameters};
pub use stability::{Port, Region, StabilityReport};
pub use touchstone::{parse_touchstone, serialize_touchstone, DataFormat, SweepTable, TwoPortS};
