//! Exact second-quantized simulation of linear-optical networks acting on
//! parametric down-conversion light, with heralded preparation of
//! path-entangled (NOON) states by non-local bunching.
//!
//! The crate is organized bottom-up:
//!
//! - [`fock`]: sparse Fock states, ladder operators, ensembles.
//! - [`poly`]: polynomials in annihilation operators (detection operators).
//! - [`optics`]: waveplates, beam splitters, circuits and their Fock-space lift.
//! - [`source`]: down-conversion states and the partial-distinguishability model.
//! - [`herald`]: projective photon counting and the heralding schemes.
//! - [`experiments`]: visibility and fringe scans, visibility inversion.
//! - [`runner`]: JSON experiment configs and their CSV/JSON artifacts.

pub mod error;
pub mod experiments;
pub mod fock;
pub mod herald;
pub mod optics;
pub mod poly;
pub mod runner;
pub mod source;

pub use error::{Error, Result};
pub use fock::{Ensemble, ModeLabel, ModeRegistry, OccupationVector, Polarization, PureState};
