//! Periodic-lattice Fourier infrastructure.

pub mod fft;
mod field;
mod lattice;
mod ops;
pub mod vdsf;

pub use fft::FftEngine;
pub use field::{MatrixField, SpectralField, VectorField};
pub use lattice::{Lattice, Wavenumbers};
pub use ops::{
    apply_multiplier, apply_radial, dealias, derivative, dft_forward, dft_forward_complex,
    dft_inverse, dft_inverse_complex, divergence, gradient, lambda_power, leray_curl, leray_div,
    plane_wave, riesz, symmetrize,
};
pub use vdsf::{read_vdsf, write_vdsf, Snapshot};
