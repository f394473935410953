//! Decay experiments and log-log slope fits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::{apply_semigroup, radial_decay_quadrature, GreenParams, RadialOptions};
use crate::littlewood_paley::{besov_norm_multi, phi, BesovSpec, DyadicPartition};
use crate::solver::{DecayTracker, InitialData, PhysicalParams, SolverConfig, Stepper};
use crate::spectral::{Lattice, SpectralField};

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

/// Radial Fourier-side profiles `Û₀(ξ) = p(|ξ|)` for the linear experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `e^{-|ξ|²}`.
    Gaussian,
    /// The dyadic annulus function `φ(|ξ|)`, supported in `3/4 ≤ |ξ| ≤ 8/3`.
    Annulus,
    /// Transform of the physical bump `(1 - |x|²)²₊`.
    L1Bump,
}

impl Profile {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "annulus" => Ok(Self::Annulus),
            "l1-bump" => Ok(Self::L1Bump),
            _ => Err(Error::InvalidParameter(format!("unknown profile {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Annulus => "annulus",
            Self::L1Bump => "l1-bump",
        }
    }

    /// Profile value at radius `r` in dimension `dim` (2 or 3).
    pub fn eval(&self, r: f64, dim: usize) -> f64 {
        match self {
            Self::Gaussian => (-r * r).exp(),
            Self::Annulus => phi(r),
            Self::L1Bump => bump_transform(r, dim),
        }
    }
}

/// `8 J_ν(r) / r^ν` with `ν = dim/2 + 2`, the unitary transform of `(1 - |x|²)²₊`.
fn bump_transform(r: f64, dim: usize) -> f64 {
    let nu = dim as f64 / 2.0 + 2.0;
    if r < 4.0 {
        let gamma = if dim % 2 == 0 { 6.0 } else { 3.5 * 2.5 * 1.5 * 0.5 * PI.sqrt() };
        let x = -0.25 * r * r;
        let mut term = 1.0 / gamma;
        let mut sum = term;
        for k in 1..40 {
            term *= x / (k as f64 * (nu + k as f64));
            sum += term;
        }
        return 8.0 * sum / 2f64.powf(nu);
    }
    let j = if dim % 2 == 0 {
        bessel_jn(3, r)
    } else {
        let (s, c) = r.sin_cos();
        let j3 = (15.0 / r.powi(3) - 6.0 / r) * s / r - (15.0 / (r * r) - 1.0) * c / r;
        (2.0 * r / PI).sqrt() * j3
    };
    8.0 * j / r.powf(nu)
}

/// Integer-order Bessel function by the trapezoidal rule on its periodic
/// integral representation.
fn bessel_jn(n: i32, z: f64) -> f64 {
    let m = 64 + 2 * z.ceil() as usize;
    let s: f64 = (0..m)
        .map(|k| {
            let tau = 2.0 * PI * k as f64 / m as f64;
            (n as f64 * tau - z * tau.sin()).cos()
        })
        .sum();
    s / m as f64
}

/// Lattice field with coefficients matching continuum data `p(|ξ|)` under the
/// unitary transforms: `c(ξ) = (√(2πN) / L)^dim · p(|ξ|)`.
pub fn profile_field(lattice: &Lattice, profile: Profile, amplitude: f64) -> SpectralField {
    let dim = lattice.dim();
    let scale = ((2.0 * PI * lattice.points_per_dim() as f64).sqrt() / lattice.period()).powi(dim as i32);
    let coeffs: Vec<Complex64> = (0..lattice.len())
        .map(|k| {
            if lattice.is_nyquist(k) {
                return Complex64::default();
            }
            Complex64::new(amplitude * scale * profile.eval(lattice.frequency_norm(k), dim), 0.0)
        })
        .collect();
    SpectralField::from_coeffs(lattice, coeffs, true).expect("coefficient count matches lattice")
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentKind {
    /// Continuum norm of the semigroup applied to radial data, by quadrature.
    LinearQuadrature {
        params: GreenParams,
        dim: usize,
        profile: Profile,
        amplitude: f64,
        options: RadialOptions,
    },
    /// Semigroup applied on a lattice, with `L²` and `Ḃ^{n/2-1}_{2,1}` norms.
    LinearLattice {
        params: GreenParams,
        lattice: Lattice,
        profile: Profile,
        amplitude: f64,
    },
    /// Nonlinear simulation with running-supremum functionals.
    Nonlinear {
        config: SolverConfig,
        params: PhysicalParams,
        initial: InitialData,
        threshold: i32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayExperiment {
    pub kind: ExperimentKind,
    pub times: Vec<f64>,
    pub fit_window: (f64, f64),
}

impl DecayExperiment {
    pub fn new(kind: ExperimentKind, times: Vec<f64>) -> Self {
        Self {
            kind,
            times,
            fit_window: (1e2, 1e4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_times(&self.times)?;
        let t = &self.times;
        let (lo, hi) = self.fit_window;
        if !(lo < hi && lo >= t[0] && hi <= t[t.len() - 1]) {
            return Err(Error::InvalidParameter(format!(
                "fit window [{lo}, {hi}] must lie inside [{}, {}]",
                t[0],
                t[t.len() - 1]
            )));
        }
        let inside = t.iter().filter(|x| **x >= lo && **x <= hi).count();
        if inside < MIN_FIT_POINTS {
            return Err(Error::InvalidParameter(format!(
                "fit window holds {inside} times, at least {MIN_FIT_POINTS} required"
            )));
        }
        self.kind.validate()
    }
}

impl ExperimentKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::LinearQuadrature { dim, amplitude, .. } => {
                if !(2..=3).contains(dim) {
                    return Err(Error::InvalidParameter(format!("dimension must be 2 or 3, got {dim}")));
                }
                check_amplitude(*amplitude)
            }
            Self::LinearLattice { amplitude, .. } => check_amplitude(*amplitude),
            Self::Nonlinear { config, params, .. } => {
                config.validate()?;
                params.validate()
            }
        }
    }
}

fn check_times(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::InvalidParameter("time list is empty".into()));
    }
    if t.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || t.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be finite, nonnegative and nondecreasing".into()));
    }
    Ok(())
}

fn check_amplitude(a: f64) -> Result<()> {
    if a.is_finite() && a >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("amplitude must be nonnegative, got {a}")))
    }
}

/// Table of named columns; column 0 is `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DecayTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidParameter(format!("no column named {name:?}")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

pub fn run_experiment(exp: &DecayExperiment) -> Result<DecayTable> {
    exp.validate()?;
    evaluate(&exp.kind, &exp.times)
}

/// Norm table of `kind` at `times`, without any fit-window requirement.
pub fn evaluate(kind: &ExperimentKind, times: &[f64]) -> Result<DecayTable> {
    check_times(times)?;
    kind.validate()?;
    match kind {
        ExperimentKind::LinearQuadrature {
            params,
            dim,
            profile,
            amplitude,
            options,
        } => {
            let (profile, dim, amp) = (*profile, *dim, *amplitude);
            let p = move |r: f64| {
                let v = amp * profile.eval(r, dim);
                [v, v]
            };
            let values: Vec<f64> = times
                .par_iter()
                .map(|&t| {
                    if amp == 0.0 {
                        Ok(0.0)
                    } else {
                        radial_decay_quadrature(params, &p, dim, t, options)
                    }
                })
                .collect::<Result<_>>()?;
            let mut table = DecayTable::new(&["t", "l2"]);
            table.rows = times.iter().zip(values).map(|(&t, v)| vec![t, v]).collect();
            Ok(table)
        }
        ExperimentKind::LinearLattice {
            params,
            lattice,
            profile,
            amplitude,
        } => {
            let f = profile_field(lattice, *profile, *amplitude);
            let partition = DyadicPartition::new(lattice)?;
            let spec = BesovSpec::homogeneous(lattice.dim() as f64 / 2.0 - 1.0, 2.0, 1.0);
            let rows: Vec<Vec<f64>> = times
                .par_iter()
                .map(|&t| {
                    let (c, u) = apply_semigroup(params, &f, &f, t)?;
                    let l2 = (c.l2_norm().powi(2) + u.l2_norm().powi(2)).sqrt();
                    let b = besov_norm_multi(&[&c, &u], &spec, &partition)?;
                    Ok(vec![t, l2, b])
                })
                .collect::<Result<_>>()?;
            let mut table = DecayTable::new(&["t", "l2", "besov"]);
            table.rows = rows;
            Ok(table)
        }
        ExperimentKind::Nonlinear {
            config,
            params,
            initial,
            threshold,
        } => run_nonlinear(config, params, initial, *threshold, times),
    }
}

fn run_nonlinear(
    config: &SolverConfig,
    params: &PhysicalParams,
    initial: &InitialData,
    threshold: i32,
    times: &[f64],
) -> Result<DecayTable> {
    let lattice = config.lattice;
    let partition = DyadicPartition::new(&lattice)?;
    let mut tracker = DecayTracker::new(&partition, threshold);
    let mut stepper = Stepper::new(&lattice, params, config.dealias)?;
    let mut state = initial.generate(&lattice)?;
    if config.dealias {
        state = state.dealiased();
    }
    let mut table = DecayTable::new(&["t", "l2", "M1", "M2", "M3", "M4", "M"]);
    let mut done = 0usize;
    for &target in times {
        let n = (target / config.dt).round() as usize;
        while done < n {
            let t = done as f64 * config.dt;
            stepper
                .step_cfl(&mut state, config.dt, config.cfl)
                .map_err(|e| match e {
                    Error::BlowUp { reason, .. } => Error::BlowUp { t, reason },
                    other => other,
                })?;
            done += 1;
        }
        let t = done as f64 * config.dt;
        let f = tracker.push(t, &state)?;
        let l2 = state.l2_norm();
        table.rows.push(vec![t, l2, f.m1, f.m2, f.m3, f.m4, f.m]);
    }
    Ok(table)
}

/// Least-squares fit of `ln value = intercept + slope · ln(1 + t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Fits the decay slope of `column` against `t` over `window` (inclusive).
pub fn fit_slope(table: &DecayTable, column: &str, window: (f64, f64)) -> Result<FitResult> {
    let col = table.column_index(column)?;
    let pairs: Vec<(usize, f64, f64)> = table
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r[0] >= window.0 && r[0] <= window.1)
        .map(|(i, r)| (i, r[0], r[col]))
        .collect();
    fit_pairs(&pairs, window)
}

/// [`fit_slope`] on plain `(t, value)` slices.
pub fn fit_series(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<FitResult> {
    if times.len() != values.len() {
        return Err(Error::SizeMismatch {
            expected: times.len(),
            actual: values.len(),
        });
    }
    let pairs: Vec<(usize, f64, f64)> = times
        .iter()
        .zip(values)
        .enumerate()
        .filter(|(_, (t, _))| **t >= window.0 && **t <= window.1)
        .map(|(i, (t, v))| (i, *t, *v))
        .collect();
    fit_pairs(&pairs, window)
}

fn fit_pairs(pairs: &[(usize, f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    if !(window.0 < window.1) || window.0 <= -1.0 {
        return Err(Error::InvalidParameter(format!("invalid fit window [{}, {}]", window.0, window.1)));
    }
    if pairs.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidParameter(format!(
            "fit window holds {} points, at least {MIN_FIT_POINTS} required",
            pairs.len()
        )));
    }
    if let Some(&(index, _, value)) = pairs.iter().find(|p| !(p.2 > 0.0)) {
        return Err(Error::NonPositive { index, value });
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.1.ln_1p()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.2.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("fit window holds a single distinct time".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        window,
        points: pairs.len(),
    })
}
