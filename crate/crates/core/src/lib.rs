//! Pseudo-spectral tools for the decay of compressible viscoelastic flows.
//!
//! - [`spectral`]: lattices, unitary FFTs, Fourier multipliers.
//! - [`littlewood_paley`]: dyadic partition, Besov and hybrid norms.
//! - [`green`]: Green's matrix of the linearized 2×2 systems and decay scans.
//! - [`solver`]: nonlinear time integration and derived quantities.
//! - [`decay`]: experiment orchestration and slope fits.

pub mod decay;
pub mod error;
pub mod green;
pub mod littlewood_paley;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use green::GreenParams;
pub use littlewood_paley::{BesovSpec, DyadicPartition, HybridSpec};
pub use spectral::{Lattice, MatrixField, SpectralField, VectorField};
