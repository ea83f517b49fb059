//! A laboratory for binary-input channel polarization.
//!
//! The crate evolves the Bhattacharyya parameter of a binary-input channel
//! through the polar combining/splitting recursion, enumerates exact synthetic
//! channel spectra for the erasure channel, and measures how fast the good
//! channels improve: the fraction of level-`n` channels below the
//! `2^(-2^((n + t*sqrt(n))/2))` threshold family, its Gaussian-tail target
//! curve, binomial converse bounds, kernel exponents for larger polarization
//! matrices, and the minimum-distance side of the story for the resulting
//! codes.
//!
//! Everything numerically delicate runs in a double-log representation
//! ([`DualLogValue`]), so doubly exponentially small values keep full
//! precision at any practical level.
//!
//! Modules follow the pipeline:
//!
//! * [`channel`]: discrete binary-input channels, Z(W), I(W), exact one-step
//!   transforms.
//! * [`polarization`]: sample paths, trajectories, exact spectra, the
//!   counting events and the bounding processes over them.
//! * [`scaling`]: Gaussian tail functions and the threshold/fraction
//!   experiments.
//! * [`kernel`]: partial distances and exponents of l-by-l binary kernels.
//! * [`code`]: polar code construction, encoding, erasure SC decoding,
//!   minimum-distance analysis.
//! * [`sim`]: deterministic seeding and worker partitioning for Monte Carlo
//!   runs.
//!
//! ## Example
//!
//! ```
//! use polarlab::{DiscreteBMC, ErasureParameter};
//! use polarlab::code::PolarCode;
//! use polarlab::polarization::enumerate_bec_spectrum;
//!
//! let eps = ErasureParameter::new(0.5).unwrap();
//! let w = DiscreteBMC::bec(eps);
//! assert!((w.symmetric_capacity() - 0.5).abs() < 1e-12);
//!
//! // All 1024 exact synthetic-channel values at level 10, and a rate-1/4
//! // code built from the best of them.
//! let spectrum = enumerate_bec_spectrum(eps, 10).unwrap();
//! assert!((spectrum.mean() - 0.5).abs() < 1e-10);
//! let code = PolarCode::construct(&spectrum, 0.25).unwrap();
//! assert_eq!(code.dimension(), 256);
//! ```

pub mod channel;
pub mod code;
mod error;
pub mod kernel;
pub mod polarization;
pub mod scaling;
pub mod sim;

pub use channel::{DiscreteBMC, ErasureParameter};
pub use error::Error;
pub use polarization::{DualLogValue, SamplePath, ZSpectrum, ZTrajectory};
