//! Uplink rate analysis for massive MIMO with base-station antennas spread
//! evenly on a ring inside a circular cell.
//!
//! * [`geometry`] and [`channel`] build the ring, place users and draw
//!   Rayleigh-faded channels.
//! * [`montecarlo`] estimates zero-forcing ergodic rates by simulation.
//! * [`analytic`] evaluates the large-antenna asymptote and its closed-form
//!   bounds; [`average`] averages them over a uniformly loaded cell.
//! * [`optimizer`] finds the ring radius that maximizes the cell average.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod average;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod params;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use params::{db_to_linear, PowerNormalization, SystemParams};
