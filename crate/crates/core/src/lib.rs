//! Force-noise spectra and sensitivity projections for arrays of
//! cavity-optomechanical sensors read out by a single, possibly squeezed,
//! laser beam split across the array.

pub mod array;
pub mod constants;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod presets;
pub mod sensitivity;
pub mod spectra;
pub mod strategy;

pub use error::{Error, Result};
