//! Numerical simulator for heralded single-photon entanglement between two
//! nuclear-resonant crystals: time-domain forward-scattering response,
//! magnetic quantum-phase control, interferometer output statistics,
//! entanglement tomography, and XPDC source-rate estimates.
//!
//! The numerical core is generic over the scalar width through [`real::Real`];
//! concrete f64 aliases live at the crate root.

pub mod bessel;
pub mod config;
pub mod driver;
pub mod error;
pub mod event_sim;
pub mod interferometer;
pub mod nuclear;
pub mod rate;
pub mod real;
pub mod tomography;

pub use error::{Error, Result};
pub use real::Real;

/// Concrete f64 aliases for the generic core types.
pub type SampleParams = nuclear::SampleParams<f64>;
pub type FieldSchedule = nuclear::FieldSchedule<f64>;
pub type TimeGrid = nuclear::TimeGrid<f64>;
pub type Wavepacket = nuclear::Wavepacket<f64>;
pub type TwoModeField = interferometer::TwoModeField<f64>;
pub type LinearElement = interferometer::LinearElement<f64>;
pub type FringePoint = interferometer::FringePoint<f64>;
pub type DiagonalProbs = tomography::DiagonalProbs<f64>;
pub type TPEDensityMatrix = tomography::TPEDensityMatrix<f64>;
pub type Visibility = tomography::Visibility<f64>;

/// f32 aliases, for callers trading accuracy for footprint.
pub mod f32_types {
    pub type SampleParams = crate::nuclear::SampleParams<f32>;
    pub type FieldSchedule = crate::nuclear::FieldSchedule<f32>;
    pub type TimeGrid = crate::nuclear::TimeGrid<f32>;
    pub type Wavepacket = crate::nuclear::Wavepacket<f32>;
    pub type TwoModeField = crate::interferometer::TwoModeField<f32>;
    pub type FringePoint = crate::interferometer::FringePoint<f32>;
}
