use super::reformulate::reformulate;
use super::state::State;
use crate::error::{Error, Result};
use crate::littlewood_paley::{besov_norm_multi, hybrid_norm_multi, BesovSpec, DyadicPartition, HybridSpec};
use crate::spectral::SpectralField;

/// Running suprema of the weighted decay norms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Functionals {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m: f64,
}

impl Functionals {
    fn max(&self, o: &Self) -> Self {
        Self {
            m1: self.m1.max(o.m1),
            m2: self.m2.max(o.m2),
            m3: self.m3.max(o.m3),
            m4: self.m4.max(o.m4),
            m: self.m.max(o.m),
        }
    }
}

fn refs(fs: &[SpectralField]) -> Vec<&SpectralField> {
    fs.iter().collect()
}

/// Instantaneous (unweighted, no supremum) values of the five functionals.
///
/// With `n` the dimension, `B^{s}` the homogeneous `Ḃ^s_{2,1}` norm and
/// `B^{s,s'}` the `L²` hybrid norm with threshold `2^{R₀}`:
/// - `M₁`: `‖a‖_{B^{n/2-1,n/2}} + ‖d‖_{B^{n/2-1}}`
/// - `M₂`: `‖𝓔‖_{B^{n/2-1,n/2}} + ‖d‖_{B^{n/2-1}}`
/// - `M₃`: `‖Fᵀ-F‖_{B^{n/2-1,n/2}} + ‖Ω‖_{B^{n/2-1}}`
/// - `M₄`: `‖a‖_{L²} + ‖F‖_{L²} + ‖v‖_{L²}`
/// - `M`: `‖a‖_{B^{n/2}} + ‖F‖_{B^{n/2}} + ‖v‖_{B^{n/2-1}}`
pub fn instantaneous_functionals(state: &State, partition: &DyadicPartition, threshold: i32) -> Result<Functionals> {
    if partition.lattice() != state.lattice() {
        return Err(Error::LatticeMismatch);
    }
    let n = state.dim() as f64;
    let hybrid = HybridSpec {
        threshold,
        ..HybridSpec::l2(n / 2.0 - 1.0, n / 2.0)
    };
    let low = BesovSpec::homogeneous(n / 2.0 - 1.0, 2.0, 1.0);
    let high = BesovSpec::homogeneous(n / 2.0, 2.0, 1.0);
    let r = reformulate(state);
    let d_norm = besov_norm_multi(&[&r.d], &low, partition)?;
    Ok(Functionals {
        m1: hybrid_norm_multi(&[&r.a], &hybrid, partition)? + d_norm,
        m2: hybrid_norm_multi(&[&r.ecal], &hybrid, partition)? + d_norm,
        m3: hybrid_norm_multi(&refs(r.ftf.components()), &hybrid, partition)?
            + besov_norm_multi(&refs(r.omega.components()), &low, partition)?,
        m4: state.a.l2_norm() + state.f.l2_norm() + state.v.l2_norm(),
        m: besov_norm_multi(&[&state.a], &high, partition)?
            + besov_norm_multi(&refs(state.f.components()), &high, partition)?
            + besov_norm_multi(&refs(state.v.components()), &low, partition)?,
    })
}

/// Incremental evaluation of the running suprema
/// `sup_{τ ≤ t} (1+τ)^{n/4} (...)`.
#[derive(Debug, Clone)]
pub struct DecayTracker {
    partition: DyadicPartition,
    threshold: i32,
    current: Option<Functionals>,
    last_t: f64,
}

impl DecayTracker {
    pub fn new(partition: &DyadicPartition, threshold: i32) -> Self {
        Self {
            partition: partition.clone(),
            threshold,
            current: None,
            last_t: f64::NEG_INFINITY,
        }
    }

    /// Adds the state at time `t` (nondecreasing) and returns the suprema so far.
    pub fn push(&mut self, t: f64, state: &State) -> Result<Functionals> {
        if !(t >= self.last_t && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("times must be nonnegative and nondecreasing, got {t}")));
        }
        self.last_t = t;
        let w = (1.0 + t).powf(state.dim() as f64 / 4.0);
        let f = instantaneous_functionals(state, &self.partition, self.threshold)?;
        let weighted = Functionals {
            m1: w * f.m1,
            m2: w * f.m2,
            m3: w * f.m3,
            m4: w * f.m4,
            m: w * f.m,
        };
        let next = match self.current {
            Some(c) => c.max(&weighted),
            None => weighted,
        };
        self.current = Some(next);
        Ok(next)
    }

    pub fn current(&self) -> Option<Functionals> {
        self.current
    }
}

/// Running-supremum functionals for a snapshot series `(t, state)`.
pub fn decay_functionals(
    snapshots: &[(f64, State)],
    partition: &DyadicPartition,
    threshold: i32,
) -> Result<Vec<(f64, Functionals)>> {
    if snapshots.is_empty() {
        return Err(Error::InvalidParameter("at least one snapshot is required".into()));
    }
    let mut tracker = DecayTracker::new(partition, threshold);
    snapshots
        .iter()
        .map(|(t, s)| Ok((*t, tracker.push(*t, s)?)))
        .collect()
}
