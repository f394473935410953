//! Run configuration in sectioned `key = value` form.
//!
//! Grammar: `[section]` headers, `key = value` lines, `#` or `;` comments,
//! blank lines ignored. Every key belongs to a section; unknown sections,
//! unknown keys and repeated keys are rejected. Values are typed per key.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use ini::Ini;
use viscospec::solver::{InitialData, InitialFamily, PhysicalParams, SimulateOptions, SolverConfig};
use viscospec::Lattice;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSection {
    pub dim: usize,
    pub n: usize,
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSection {
    pub mu: f64,
    pub lambda: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSection {
    pub dt: f64,
    pub t_end: f64,
    pub series_stride: usize,
    pub snapshot_stride: usize,
    pub dealias: bool,
    pub cfl: f64,
    pub constraints: bool,
    pub functionals: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSection {
    pub threshold: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialSection {
    pub family: InitialFamily,
    pub amplitude: f64,
    pub velocity_amplitude: f64,
    pub max_mode: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lattice: LatticeSection,
    pub physical: PhysicalSection,
    pub solver: SolverSection,
    pub partition: PartitionSection,
    pub initial: InitialSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeSection {
                dim: 3,
                n: 32,
                period: 2.0 * PI,
            },
            physical: PhysicalSection {
                mu: 1.0,
                lambda: 0.0,
                gamma: 1.4,
            },
            solver: SolverSection {
                dt: 1e-3,
                t_end: 1.0,
                series_stride: 10,
                snapshot_stride: 0,
                dealias: true,
                cfl: 0.5,
                constraints: true,
                functionals: true,
            },
            partition: PartitionSection { threshold: 0 },
            initial: InitialSection {
                family: InitialFamily::Random,
                amplitude: 1e-3,
                velocity_amplitude: 1e-3,
                max_mode: 2,
                seed: 0,
            },
        }
    }
}

fn parse_value<T: FromStr>(section: &str, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("[{section}] {key}: cannot parse {value:?}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let mut cfg = Self::default();
        let mut velocity_given = false;
        let mut seen_sections = BTreeSet::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(CliError::Usage(format!("config: key {k:?} outside any section")));
                }
                continue;
            };
            if !seen_sections.insert(section.to_string()) {
                return Err(CliError::Usage(format!("config: section [{section}] repeated")));
            }
            let mut seen = BTreeSet::new();
            for (key, value) in props.iter() {
                if !seen.insert(key) {
                    return Err(CliError::Usage(format!("config: [{section}] {key} repeated")));
                }
                let v = value.trim();
                let s = section;
                match (section, key) {
                    ("lattice", "dim") => cfg.lattice.dim = parse_value(s, key, v)?,
                    ("lattice", "n") => cfg.lattice.n = parse_value(s, key, v)?,
                    ("lattice", "period") => cfg.lattice.period = parse_value(s, key, v)?,
                    ("physical", "mu") => cfg.physical.mu = parse_value(s, key, v)?,
                    ("physical", "lambda") => cfg.physical.lambda = parse_value(s, key, v)?,
                    ("physical", "gamma") => cfg.physical.gamma = parse_value(s, key, v)?,
                    ("solver", "dt") => cfg.solver.dt = parse_value(s, key, v)?,
                    ("solver", "t_end") => cfg.solver.t_end = parse_value(s, key, v)?,
                    ("solver", "series_stride") => cfg.solver.series_stride = parse_value(s, key, v)?,
                    ("solver", "snapshot_stride") => cfg.solver.snapshot_stride = parse_value(s, key, v)?,
                    ("solver", "dealias") => cfg.solver.dealias = parse_value(s, key, v)?,
                    ("solver", "cfl") => cfg.solver.cfl = parse_value(s, key, v)?,
                    ("solver", "constraints") => cfg.solver.constraints = parse_value(s, key, v)?,
                    ("solver", "functionals") => cfg.solver.functionals = parse_value(s, key, v)?,
                    ("partition", "threshold") => cfg.partition.threshold = parse_value(s, key, v)?,
                    ("initial", "family") => cfg.initial.family = InitialFamily::parse(v)?,
                    ("initial", "amplitude") => cfg.initial.amplitude = parse_value(s, key, v)?,
                    ("initial", "velocity_amplitude") => {
                        cfg.initial.velocity_amplitude = parse_value(s, key, v)?;
                        velocity_given = true;
                    }
                    ("initial", "max_mode") => cfg.initial.max_mode = parse_value(s, key, v)?,
                    ("initial", "seed") => cfg.initial.seed = parse_value(s, key, v)?,
                    ("lattice" | "physical" | "solver" | "partition" | "initial", _) => {
                        return Err(CliError::Usage(format!("config: unknown key [{section}] {key}")));
                    }
                    _ => return Err(CliError::Usage(format!("config: unknown section [{section}]"))),
                }
            }
        }
        if !velocity_given {
            cfg.initial.velocity_amplitude = cfg.initial.amplitude;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.lattice()?;
        self.physical()?;
        self.solver()?.validate()?;
        let i = &self.initial;
        if !(i.amplitude >= 0.0 && i.velocity_amplitude >= 0.0) {
            return Err(CliError::Usage("[initial] amplitudes must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        let l = &self.lattice;
        Ok(Lattice::new(l.dim, l.n, l.period)?)
    }

    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        let p = &self.physical;
        Ok(PhysicalParams::new(p.mu, p.lambda, p.gamma)?)
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let s = &self.solver;
        let mut c = SolverConfig::new(self.lattice()?, s.dt, s.t_end);
        c.series_stride = s.series_stride;
        c.snapshot_stride = s.snapshot_stride;
        c.dealias = s.dealias;
        c.cfl = s.cfl;
        Ok(c)
    }

    pub fn options(&self) -> SimulateOptions {
        SimulateOptions {
            constraints: self.solver.constraints,
            functionals: self.solver.functionals,
            threshold: self.partition.threshold,
        }
    }

    pub fn initial(&self) -> InitialData {
        let i = &self.initial;
        InitialData {
            family: i.family,
            amplitude: i.amplitude,
            velocity_amplitude: i.velocity_amplitude,
            max_mode: i.max_mode,
            seed: i.seed,
        }
    }

    /// Every key with its resolved value; parses back to `self`.
    pub fn to_ini(&self) -> String {
        let (l, p, s, q, i) = (&self.lattice, &self.physical, &self.solver, &self.partition, &self.initial);
        let mut o = String::new();
        let _ = writeln!(o, "[lattice]\ndim = {}\nn = {}\nperiod = {:?}\n", l.dim, l.n, l.period);
        let _ = writeln!(o, "[physical]\nmu = {:?}\nlambda = {:?}\ngamma = {:?}\n", p.mu, p.lambda, p.gamma);
        let _ = writeln!(
            o,
            "[solver]\ndt = {:?}\nt_end = {:?}\nseries_stride = {}\nsnapshot_stride = {}\ndealias = {}\ncfl = {:?}\nconstraints = {}\nfunctionals = {}\n",
            s.dt, s.t_end, s.series_stride, s.snapshot_stride, s.dealias, s.cfl, s.constraints, s.functionals
        );
        let _ = writeln!(o, "[partition]\nthreshold = {}\n", q.threshold);
        let _ = write!(
            o,
            "[initial]\nfamily = {}\namplitude = {:?}\nvelocity_amplitude = {:?}\nmax_mode = {}\nseed = {}\n",
            i.family.name(),
            i.amplitude,
            i.velocity_amplitude,
            i.max_mode,
            i.seed
        );
        o
    }
}
