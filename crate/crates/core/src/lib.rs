//! Outage analysis, power allocation, and Monte Carlo validation for HARQ
//! retransmission schemes over free-space optical links with Gamma-Gamma
//! turbulence and pointing errors.
//!
//! The crate is generic over the scalar type via [`real::Real`]; `f64` is
//! the working precision of every documented tolerance, with type aliases
//! for the common instantiations exported at the root.

// `!(x > zero)`-style guards are deliberate: they reject NaN where the
// un-negated comparison would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod harq;
pub mod optim;
pub mod real;
pub mod rng;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` instantiations of the core model types.
pub type ChannelModel = channel::ChannelModel<f64>;
pub type TurbulenceParams = channel::TurbulenceParams<f64>;
pub type PointingParams = channel::PointingParams<f64>;
pub type LinkParams = channel::LinkParams<f64>;
pub type HarqConfig = harq::HarqConfig<f64>;
pub type PowerAllocation = harq::PowerAllocation<f64>;
pub type SeriesControl = special::SeriesControl<f64>;
pub type AsymptoticCoefficients = harq::AsymptoticCoefficients<f64>;
pub type OutageResult = harq::OutageResult<f64>;
pub type OptConfig = optim::OptConfig<f64>;
pub type OptResult = optim::OptResult<f64>;
pub type ScaSettings = optim::ScaSettings<f64>;
pub type SimReport = sim::SimReport<f64>;
pub use sim::SimSettings;
