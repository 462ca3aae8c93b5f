//! Quantum tunnelling numerics toolkit.
//!
//! The crate models one-dimensional tunnelling barriers and the quantities
//! built on top of them: semiclassical (JWKB) transmission, an independent
//! exact scattering oracle for piecewise-constant potentials, bound states
//! of the hard-wall well, field-ionization barriers near charged surfaces,
//! and a small Monte Carlo of pathway choice for tunnelling walkers.
//!
//! Working unit system: energies in eV, lengths in nm, fields in V/nm,
//! times in s. See [`constants`] for the derived coefficients that make
//! this system self-consistent.

pub mod arrow;
pub mod barriers;
pub mod cli;
pub mod config;
pub mod constants;
pub mod error;
pub mod esfi;
pub mod exact1d;
pub mod jwkb;
pub mod numerics;
pub mod output;
pub mod well;

pub use barriers::{BarrierGeometry, BarrierProfile, ImagePlacement};
pub use constants::{PhysicalConstants, CODATA_2018};
pub use error::{Error, Result};
