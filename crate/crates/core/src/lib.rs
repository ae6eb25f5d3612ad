//! Orbital-angular-momentum spectra of SPDC photon pairs under shaped pump
//! beams, diffractive design of the pump shaper, and high-dimensional state
//! tomography of the resulting entangled qudits.

pub mod error;
pub mod quadrature;
pub mod special;
pub mod shaping;
pub mod spectrum;
pub mod tomography;

pub use error::{Error, Result};
