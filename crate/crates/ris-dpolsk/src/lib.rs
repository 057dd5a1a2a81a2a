//! Link-level simulator and numerical theory library for differential
//! polarization shift keying through a programmable reflecting surface.
//!
//! The surface's per-unit dual-polarized phase shifts simultaneously
//! beamform toward the receiver and encode data bits as changes of the
//! scattered wave's polarization state. A non-coherent receiver detects
//! those changes in Stokes space without knowing the link's polarization
//! rotation; a coherent reference scheme (which must estimate the rotation)
//! is included for comparison.
//!
//! Module map:
//! - [`geometry`]: scene layout, distances/angles, unit grid, path phases.
//! - [`polarization`]: Jones/Stokes algebra, rotation, both detectors.
//! - [`modem`]: phase configurations, differential encoding, slot mapping.
//! - [`channel`]: path-loss gain, link budget, noise, both signal paths.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration.
//! - [`theory`]: closed-form and integral BER expressions.
//! - [`simulation`]: deterministic parallel Monte Carlo runs and sweeps.
//! - [`config`] / [`cli`]: JSON configuration and the command-line tool.

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod modem;
pub mod polarization;
pub mod quadrature;
pub mod simulation;
pub mod theory;

pub use error::{Error, Result};
pub use geometry::Scenario;
pub use polarization::{JonesVector, StokesVector};
pub use quadrature::QuadratureSpec;
pub use simulation::{BerRecord, RunSpec, Scheme};
