//! Thermodynamics and wave structure of a singly-ionized monatomic gas in
//! Saha equilibrium.
//!
//! The crate is `no_std` and only needs an allocator. Every routine is a pure
//! function of its inputs.
//!
//! * [`thermo`]: equation of state, entropy, first derivatives.
//! * [`characteristics`]: sound speed, eigenvectors, genuine nonlinearity and
//!   the inflection locus.
//! * [`hugoniot`]: Hugoniot loci, shock states, entropy jumps.
//! * [`rarefaction`]: isentropes and integral curves of the acoustic fields.
//! * [`htl`]: the high-temperature-limit closure.
//! * [`numerics`]: root finding, ODE integration, finite differences and
//!   log-domain helpers.

#![no_std]
// Whenever std is linked into the build (tests, or dev-dependencies enabling
// `num-traits/std`) its inherent float methods shadow `Float`.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod characteristics;
pub mod htl;
pub mod hugoniot;
pub mod numerics;
pub mod rarefaction;
pub mod thermo;

pub use error::{Error, Result};
pub use thermo::{GasModel, Ionization, ThermoState};
