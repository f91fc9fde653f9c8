//! Independent reference computations for the test suites.

pub mod aux1d;
pub mod band;
pub mod bessel;
pub mod energy;
pub mod identities;
pub mod spin_orbit;
