use num_complex::Complex64;

use super::constraints::{check_constraints, ConstraintResiduals};
use super::functionals::{DecayTracker, Functionals};
use super::params::{PhysicalParams, SolverConfig};
use super::rhs::{is_in_band, RhsWorkspace};
use super::state::State;
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;

/// Exact propagator of `∂_t v = 𝒜v` over one step, per mode:
/// `e^{-μ|ξ|²h}(I - P) + e^{-ν|ξ|²h}P` with `P = ξξᵀ/|ξ|²`.
struct ViscousFactor {
    h: f64,
    transverse: Vec<f64>,
    longitudinal: Vec<f64>,
}

impl ViscousFactor {
    fn new(ws: &RhsWorkspace, params: &PhysicalParams, h: f64) -> Self {
        let k2 = &ws.wavenumbers().kd2;
        Self {
            h,
            transverse: k2.iter().map(|k| (-params.mu * k * h).exp()).collect(),
            longitudinal: k2.iter().map(|k| (-params.nu() * k * h).exp()).collect(),
        }
    }

    fn apply(&self, ws: &RhsWorkspace, state: &mut State, idx: &[usize]) {
        let wn = ws.wavenumbers();
        let dim = state.dim();
        let v = state.v.components_mut();
        for &k in idx {
            let k2 = wn.kd2[k];
            if k2 == 0.0 {
                continue;
            }
            let et = self.transverse[k];
            let el = self.longitudinal[k];
            let mut dot = Complex64::default();
            for j in 0..dim {
                dot += v[j].coeffs()[k] * wn.kd[j][k];
            }
            let corr = dot * ((el - et) / k2);
            for i in 0..dim {
                let c = &mut v[i].coeffs_mut()[k];
                *c = *c * et + corr * wn.kd[i][k];
            }
        }
    }
}

/// `y ← y + s·x` on the modes `idx`.
fn axpy_modes(y: &mut State, s: f64, x: &State, idx: &[usize]) {
    for (f, g) in y.fields_mut().zip(x.fields()) {
        let (f, g) = (f.coeffs_mut(), g.coeffs());
        for &k in idx {
            f[k] += g[k] * s;
        }
    }
}

/// Integrating-factor Heun stepper. The viscous operator at `ρ = 1` is
/// propagated exactly; everything else is explicit.
pub struct Stepper {
    params: PhysicalParams,
    ws: RhsWorkspace,
    in_band: bool,
    k1: State,
    k2: State,
    stage: State,
    factors: Vec<ViscousFactor>,
    /// Modes that can be nonzero: the 2/3 band when the state is kept in it.
    idx: Vec<usize>,
}

impl Stepper {
    pub fn new(lattice: &crate::spectral::Lattice, params: &PhysicalParams, dealias: bool) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params: *params,
            ws: RhsWorkspace::new(lattice, dealias),
            in_band: dealias,
            k1: State::zeros(lattice),
            k2: State::zeros(lattice),
            stage: State::zeros(lattice),
            factors: Vec::new(),
            idx: Vec::new(),
        })
        .map(|mut s: Self| {
            s.set_in_band(dealias);
            s
        })
    }

    fn set_in_band(&mut self, in_band: bool) {
        self.in_band = in_band;
        self.idx = self.ws.modes(in_band).to_vec();
    }

    /// Largest velocity component at the start of the last step.
    pub fn max_velocity(&self) -> f64 {
        self.ws.max_velocity
    }

    fn factor(&mut self, h: f64) -> usize {
        if let Some(i) = self.factors.iter().position(|f| f.h == h) {
            return i;
        }
        self.factors.push(ViscousFactor::new(&self.ws, &self.params, h));
        self.factors.len() - 1
    }

    /// Evaluates the explicit part at `state` into `k1` (also refreshing the
    /// velocity bound used for the step-size check).
    fn first_stage(&mut self, state: &State) -> Result<()> {
        self.ws.explicit_part(state, &self.params, self.in_band, &mut self.k1)
    }

    /// One step of size `h`, assuming `k1` holds the explicit part at `state`.
    fn finish_step(&mut self, state: &mut State, h: f64) -> Result<()> {
        let fi = self.factor(h);
        let idx = std::mem::take(&mut self.idx);
        for ((st, y), k1) in self.stage.fields_mut().zip(state.fields()).zip(self.k1.fields()) {
            st.set_hermitian(y.is_hermitian());
            let (st, y, k1) = (st.coeffs_mut(), y.coeffs(), k1.coeffs());
            for &k in &idx {
                st[k] = y[k] + k1[k] * h;
            }
        }
        self.factors[fi].apply(&self.ws, &mut self.stage, &idx);
        let r = self
            .ws
            .explicit_part(&self.stage, &self.params, self.in_band, &mut self.k2);
        if let Err(e) = r {
            self.idx = idx;
            return Err(e);
        }
        axpy_modes(state, 0.5 * h, &self.k1, &idx);
        self.factors[fi].apply(&self.ws, state, &idx);
        axpy_modes(state, 0.5 * h, &self.k2, &idx);
        let finite = state
            .fields()
            .all(|f| idx.iter().all(|&k| f.coeffs()[k].re.is_finite() && f.coeffs()[k].im.is_finite()));
        self.idx = idx;
        if !finite {
            return Err(Error::BlowUp {
                t: f64::NAN,
                reason: "non-finite coefficient".into(),
            });
        }
        Ok(())
    }

    /// Advances `state` by `h`.
    pub fn step(&mut self, state: &mut State, h: f64) -> Result<()> {
        self.first_stage(state)?;
        self.finish_step(state, h)
    }

    /// Advances by `h`, splitting into equal substeps when the advective
    /// Courant number `h · max|v| / Δx` exceeds `cfl`. Returns the number of
    /// substeps taken.
    pub fn step_cfl(&mut self, state: &mut State, h: f64, cfl: f64) -> Result<usize> {
        self.first_stage(state)?;
        let dx = state.lattice().spacing();
        let courant = h * self.ws.max_velocity / dx;
        let m = if courant > cfl { (courant / cfl).ceil() as usize } else { 1 };
        let sub = h / m as f64;
        self.finish_step(state, sub)?;
        for _ in 1..m {
            self.step(state, sub)?;
        }
        Ok(m)
    }
}

/// Advances `state` by one step of size `dt`.
pub fn step(state: &State, params: &PhysicalParams, dt: f64) -> Result<State> {
    state.validate()?;
    let mut stepper = Stepper::new(state.lattice(), params, true)?;
    let mut s = state.dealiased();
    let in_band = is_in_band(&s, stepper.ws.wavenumbers());
    stepper.set_in_band(in_band);
    stepper.step(&mut s, dt)?;
    Ok(s)
}

/// One row of the simulation timeseries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub mass: f64,
    pub l2_a: f64,
    pub l2_v: f64,
    pub l2_f: f64,
    pub residuals: ConstraintResiduals,
    pub functionals: Functionals,
}

impl SeriesRow {
    pub const HEADER: &'static str =
        "t,mass,l2_a,l2_v,l2_F,res_det,res_div,res_curl,res_divUoverDet,M1,M2,M3,M4,M";

    pub fn values(&self) -> [f64; 14] {
        let r = &self.residuals;
        let m = &self.functionals;
        [
            self.t,
            self.mass,
            self.l2_a,
            self.l2_v,
            self.l2_f,
            r.det,
            r.div,
            r.curl,
            r.div_u_over_det,
            m.m1,
            m.m2,
            m.m3,
            m.m4,
            m.m,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub series: Vec<SeriesRow>,
    pub snapshots: Vec<(f64, State)>,
    pub final_state: State,
    pub final_time: f64,
    pub steps: usize,
    pub substeps: usize,
}

/// Options for [`simulate`] beyond the solver configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    /// Evaluate the constraint residuals at every timeseries row.
    pub constraints: bool,
    /// Evaluate the decay functionals at every timeseries row.
    pub functionals: bool,
    /// Hybrid-norm threshold `R₀` for the functionals.
    pub threshold: i32,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        Self {
            constraints: true,
            functionals: true,
            threshold: 0,
        }
    }
}

/// Output emitted by [`simulate_streaming`] as the run progresses.
#[derive(Debug, Clone, Copy)]
pub enum Record<'a> {
    Row(&'a SeriesRow),
    Snapshot(f64, &'a State),
}

/// Integrates from `initial` to `config.t_end`.
///
/// The initial state is dealiased first when `config.dealias` is set. On
/// blow-up the error carries the time of the last completed step.
pub fn simulate(
    config: &SolverConfig,
    params: &PhysicalParams,
    initial: &State,
    options: &SimulateOptions,
) -> Result<Simulation> {
    let mut series = Vec::new();
    let mut snapshots = Vec::new();
    let end = simulate_streaming(config, params, initial, options, |r| {
        match r {
            Record::Row(row) => series.push(*row),
            Record::Snapshot(t, s) => snapshots.push((t, s.clone())),
        }
        Ok(())
    })?;
    Ok(Simulation {
        series,
        snapshots,
        ..end
    })
}

/// [`simulate`] handing each timeseries row and snapshot to `sink` as soon as
/// it is produced. The returned [`Simulation`] has empty `series` and
/// `snapshots`.
pub fn simulate_streaming<S>(
    config: &SolverConfig,
    params: &PhysicalParams,
    initial: &State,
    options: &SimulateOptions,
    mut sink: S,
) -> Result<Simulation>
where
    S: FnMut(Record<'_>) -> Result<()>,
{
    config.validate()?;
    initial.validate()?;
    if initial.lattice() != &config.lattice {
        return Err(Error::LatticeMismatch);
    }
    let mut stepper = Stepper::new(&config.lattice, params, config.dealias)?;
    let mut state = if config.dealias { initial.dealiased() } else { initial.clone() };
    if state.min_density() <= 0.0 {
        return Err(Error::BlowUp {
            t: 0.0,
            reason: "initial density not positive".into(),
        });
    }
    let partition = if options.functionals {
        Some(DyadicPartition::new(&config.lattice)?)
    } else {
        None
    };
    let mut tracker = partition
        .as_ref()
        .map(|p| DecayTracker::new(p, options.threshold));
    let steps = config.steps();
    let mut substeps = 0;
    let mut record = |t: f64, s: &State, snapshot: bool, sink: &mut S| -> Result<()> {
        let functionals = match tracker.as_mut() {
            Some(tr) => tr.push(t, s)?,
            None => Functionals::default(),
        };
        let row = SeriesRow {
            t,
            mass: s.mass(),
            l2_a: s.a.l2_norm(),
            l2_v: s.v.l2_norm(),
            l2_f: s.f.l2_norm(),
            residuals: if options.constraints { check_constraints(s) } else { ConstraintResiduals::default() },
            functionals,
        };
        sink(Record::Row(&row))?;
        if snapshot {
            sink(Record::Snapshot(t, s))?;
        }
        Ok(())
    };
    record(0.0, &state, config.snapshot_stride > 0, &mut sink)?;
    for n in 1..=steps {
        let t_prev = (n - 1) as f64 * config.dt;
        match stepper.step_cfl(&mut state, config.dt, config.cfl) {
            Ok(m) => substeps += m,
            Err(Error::BlowUp { reason, .. }) => {
                return Err(Error::BlowUp { t: t_prev, reason });
            }
            Err(e) => return Err(e),
        }
        let t = n as f64 * config.dt;
        let row = n % config.series_stride == 0 || n == steps;
        let snap = config.snapshot_stride > 0 && (n % config.snapshot_stride == 0 || n == steps);
        if row {
            record(t, &state, snap, &mut sink)?;
        } else if snap {
            sink(Record::Snapshot(t, &state))?;
        }
    }
    let final_time = steps as f64 * config.dt;
    if state.min_density() <= 0.0 {
        return Err(Error::BlowUp {
            t: final_time,
            reason: "density not positive at final time".into(),
        });
    }
    Ok(Simulation {
        series: Vec::new(),
        snapshots: Vec::new(),
        final_state: state,
        final_time,
        steps,
        substeps,
    })
}
