use crate::error::{Error, Result};
use crate::spectral::Lattice;

/// Lamé coefficients and pressure law `P(ρ) = ρ^γ / γ` (so `P'(1) = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mu: f64,
    pub lambda: f64,
    pub pressure_gamma: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            lambda: -0.5,
            pressure_gamma: 1.4,
        }
    }
}

impl PhysicalParams {
    pub fn new(mu: f64, lambda: f64, pressure_gamma: f64) -> Result<Self> {
        let p = Self {
            mu,
            lambda,
            pressure_gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.lambda.is_finite() && self.lambda + 2.0 * self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda + 2 mu must be positive, got lambda = {}",
                self.lambda
            )));
        }
        if !(self.pressure_gamma.is_finite() && self.pressure_gamma > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "pressure_gamma must exceed 1, got {}",
                self.pressure_gamma
            )));
        }
        Ok(())
    }

    /// `ν = λ + 2μ`.
    pub fn nu(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        rho.powf(self.pressure_gamma) / self.pressure_gamma
    }

    pub fn pressure_derivative(&self, rho: f64) -> f64 {
        rho.powf(self.pressure_gamma - 1.0)
    }

    /// Enthalpy `Π(ρ) = ∫₁^ρ P'(s)/s ds`, so that `∇Π(ρ) = P'(ρ)∇ρ / ρ`.
    pub fn enthalpy(&self, rho: f64) -> f64 {
        let g = self.pressure_gamma - 1.0;
        ((g * rho.ln()).exp_m1()) / g
    }

    /// `K(a) = P'(1+a)/(1+a) - 1`.
    pub fn k_of(&self, a: f64) -> f64 {
        ((self.pressure_gamma - 2.0) * a.ln_1p()).exp_m1()
    }

    /// `C(a) = a / (1+a)`.
    pub fn c_of(a: f64) -> f64 {
        a / (1.0 + a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Heun's method on the integrating-factor transformed variables.
    IntegratingFactorRk2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub lattice: Lattice,
    pub dt: f64,
    pub t_end: f64,
    /// Steps between emitted snapshots; 0 disables snapshots.
    pub snapshot_stride: usize,
    /// Steps between timeseries rows.
    pub series_stride: usize,
    pub dealias: bool,
    pub scheme: Scheme,
    /// Advective Courant number limit `dt · max|v| / Δx`.
    pub cfl: f64,
}

impl SolverConfig {
    pub fn new(lattice: Lattice, dt: f64, t_end: f64) -> Self {
        Self {
            lattice,
            dt,
            t_end,
            snapshot_stride: 0,
            series_stride: 1,
            dealias: true,
            scheme: Scheme::IntegratingFactorRk2,
            cfl: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.series_stride == 0 {
            return Err(Error::InvalidParameter("series_stride must be at least 1".into()));
        }
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(Error::InvalidParameter(format!("cfl must be positive, got {}", self.cfl)));
        }
        Ok(())
    }

    /// Number of nominal steps, `round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}
