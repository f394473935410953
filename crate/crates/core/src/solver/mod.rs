//! Pseudo-spectral integration of the compressible viscoelastic system with
//! Hookean elasticity, in perturbation variables around `ρ = 1`, `v = 0`,
//! `U = I`.

mod constraints;
mod energy;
mod forcing;
mod functionals;
mod init;
mod integrator;
mod params;
mod reformulate;
mod rhs;
mod state;

pub use constraints::{check_constraints, ConstraintResiduals};
pub use energy::{high_freq_energy, HighFreqEnergy};
pub use forcing::{forcing_terms, lambda_double_riesz, ForcingTerms};
pub use functionals::{decay_functionals, instantaneous_functionals, DecayTracker, Functionals};
pub use init::{init_from_displacement, random_vector_field, InitialData, InitialFamily};
pub use integrator::{simulate, simulate_streaming, step, Record, SeriesRow, SimulateOptions, Simulation, Stepper};
pub use params::{PhysicalParams, Scheme, SolverConfig};
pub use reformulate::{double_riesz, reformulate, riesz_gradient, ReformulatedState};
pub use rhs::{is_in_band, rhs, RhsWorkspace};
pub use state::State;
