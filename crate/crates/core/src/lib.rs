//! Simulation and localization toolkit for continuous piezoresistive tactile
//! sensors read through a small set of embedded electrodes.
//!
//! The pipeline mirrors a bench experiment: a resistor lattice stands in for
//! the conductive elastomer, a measurement chain turns pair resistances into
//! ADC counts, indentation protocols produce datasets, and regression models
//! map the per-pair resistance changes back to a contact location.
// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dataset;
pub mod error;
pub mod eval;
pub mod forward_sim;
pub mod geometry;
pub mod learn;
pub mod signal_chain;
pub mod solver;

mod par;

pub use error::{Error, Result};
pub use geometry::{enumerate_pairs, ElectrodePair, Indentation, IndentationRecord, Point2, SensorGeometry};
