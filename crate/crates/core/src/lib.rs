//! Shear wave speed estimation in reverberant wave fields.
//!
//! The crate synthesizes reverberant shear-wave phasor fields with
//! compression-wave, bulk-motion and noise contaminants, estimates windowed
//! autocorrelation profiles, and recovers the shear wavenumber by fitting
//! spherical-Bessel curve families. The difference-autocorrelation profile
//! subtracts neighboring particle velocities before correlating, which
//! cancels constant bulk motion exactly and suppresses long-wavelength
//! compression waves without any prefiltering; the plain angular-integral
//! profile plus a Fourier-domain bandpass is kept as the baseline.
//!
//! Profile estimators live behind the [`estimator::ProfileEstimator`] trait
//! and are selected by registry name ("ida", "aia", "ida-identity") in
//! [`mapping::MapConfig`] and the CLI.

pub mod error;
pub mod estimator;
pub mod field;
mod fft;
pub mod fitting;
pub mod io;
pub mod mapping;
pub mod models;
pub mod prefilter;
pub mod synth;

pub use error::{Error, Result};
