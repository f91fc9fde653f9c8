//! Spectral building blocks for two-dimensional Dirac operators with a Lorentz-scalar
//! delta-shell interaction supported on a broken line (the boundary of a wedge of
//! half-angle `omega`).
//!
//! * [`model`]: parameters, Pauli algebra, transmission matrices, derived constants.
//! * [`spin_orbit`]: eigenvalues of the angular (spin-orbit) operator from a 4x4 secular
//!   determinant.
//! * [`special`]: modified Bessel functions `K_nu` and the deficiency elements.
//! * [`aux1d`]: ground state of the one-dimensional interface model on a strip.
//! * [`variational`]: test-function energies, critical angle, Weyl and singular sequences.

pub mod aux1d;
mod error;
pub mod model;
pub mod quad;
pub mod special;
pub mod spin_orbit;
pub mod variational;

pub use error::{Error, Result};
pub use model::{DerivedConstants, PhysParams, TransmissionMatrix};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
