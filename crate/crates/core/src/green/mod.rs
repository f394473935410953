//! Green's matrix of the linearized 2×2 subsystems and low-frequency decay.

mod decay;
mod matrix;
pub mod quadrature;

pub use decay::{
    band_decay_curve, log_space, pointwise_bound_fit, radial_band_norms, radial_decay_quadrature,
    radial_norm_squared, sphere_area, sum_bound_scan, sum_bound_term, BandDecay, BoundFit,
    BoundFitOptions, RadialOptions, SumBoundRow,
};
pub use matrix::{
    apply_semigroup, eigenvalues, green_hat, green_hat_eigen_form, semigroup_energy, EigenPair,
    GreenMatrix, GreenParams, DEGENERACY_TOL,
};
