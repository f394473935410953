use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;
use viscospec::decay::{evaluate, fit_series, ExperimentKind, Profile};
use viscospec::green::{log_space, sum_bound_scan, RadialOptions};
use viscospec::littlewood_paley::{besov_norm_multi, hybrid_norm_multi};
use viscospec::solver::{simulate_streaming, Record, SeriesRow};
use viscospec::spectral::{dft_forward, read_vdsf, write_vdsf};
use viscospec::{BesovSpec, DyadicPartition, GreenParams, HybridSpec, Lattice};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{read_csv, sci, sci_prec, write_atomic, write_csv};
use crate::{BesovArgs, Command, DecayCommand, FitArgs, GreenCommand, GreenDecayArgs, Method, PartitionArgs};
use crate::{PartitionCommand, SimulateArgs, SumBoundArgs, TimeArgs};

pub fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Partition(PartitionCommand::Verify(a)) => partition_verify(a, out),
        Command::Besov(a) => besov(a, out),
        Command::Green(GreenCommand::Decay(a)) => green_decay(a, out),
        Command::Green(GreenCommand::Sumbound(a)) => green_sumbound(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Decay(DecayCommand::Fit(a)) => decay_fit(a, out),
    }
}

pub fn partition_verify(a: &PartitionArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let lattice = Lattice::new(a.dim, a.n, a.period.unwrap_or(2.0 * PI))?;
    let partition = DyadicPartition::new(&lattice)?;
    let (dev, k) = partition.unity_deviation();
    writeln!(out, "lattice dim={} n={} period={}", a.dim, a.n, sci(lattice.period()))?;
    writeln!(out, "blocks {}..={}", partition.q_min(), partition.q_max())?;
    writeln!(out, "max deviation {}", sci(dev))?;
    if dev < 1e-10 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "deviation {} at mode {:?} (|xi| = {})",
            sci(dev),
            &lattice.mode(k)[..a.dim],
            sci(lattice.frequency_norm(k))
        )))
    }
}

pub fn besov(a: &BesovArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = fs::File::open(&a.input).map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let snap = read_vdsf(std::io::BufReader::new(file))?;
    let names: Vec<String> = if a.fields.is_empty() {
        snap.fields.iter().map(|(n, _)| n.clone()).collect()
    } else {
        a.fields.clone()
    };
    if names.is_empty() {
        return Err(CliError::Usage("snapshot holds no fields".into()));
    }
    let fields = names
        .iter()
        .map(|n| {
            let data = snap
                .field(n)
                .ok_or_else(|| CliError::Usage(format!("snapshot has no field {n:?}")))?;
            Ok(dft_forward(data, &snap.lattice)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let refs: Vec<_> = fields.iter().collect();
    let partition = DyadicPartition::new(&snap.lattice)?;
    let value = match a.hybrid_high {
        Some(high) => {
            if a.inhomogeneous {
                return Err(CliError::Usage("hybrid norms are homogeneous".into()));
            }
            let spec = HybridSpec {
                s_low: a.s,
                s_high: high,
                threshold: a.threshold,
                p_low: a.p,
                p_high: a.p,
            };
            hybrid_norm_multi(&refs, &spec, &partition)?
        }
        None => {
            let spec = BesovSpec {
                homogeneous: !a.inhomogeneous,
                s: a.s,
                p: a.p,
                r: a.r,
            };
            besov_norm_multi(&refs, &spec, &partition)?
        }
    };
    writeln!(out, "{}", sci_prec(value, 12))?;
    Ok(())
}

fn times(a: &TimeArgs, lo: f64, hi: f64) -> Result<Vec<f64>, CliError> {
    let t = match &a.times {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Usage(format!("bad time {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let (lo, hi) = (a.t_min.unwrap_or(lo), a.t_max.unwrap_or(hi));
            if !(lo > 0.0 && hi >= lo) || a.points == 0 {
                return Err(CliError::Usage("log-spaced grid needs 0 < t_min <= t_max and points >= 1".into()));
            }
            log_space(lo, hi, a.points)
        }
    };
    if t.is_empty() {
        return Err(CliError::Usage("time list is empty".into()));
    }
    Ok(t)
}

pub fn green_decay(a: &GreenDecayArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = GreenParams::new(a.alpha, a.beta, a.kappa)?;
    let profile = Profile::parse(&a.profile)?;
    let t = times(&a.time, 1e-1, 1e4)?;
    let kind = match a.method {
        Method::Quadrature => ExperimentKind::LinearQuadrature {
            params,
            dim: a.dim,
            profile,
            amplitude: a.amplitude,
            options: RadialOptions {
                r_cut: a.r_cut,
                rel_tol: a.rel_tol,
                ..RadialOptions::default()
            },
        },
        Method::Lattice => ExperimentKind::LinearLattice {
            params,
            lattice: Lattice::new(a.dim, a.n, a.period.unwrap_or(8.0 * PI))?,
            profile,
            amplitude: a.amplitude,
        },
    };
    let table = evaluate(&kind, &t)?;
    let rows: Vec<Vec<f64>> = table.rows.iter().map(|r| vec![r[0], r[1]]).collect();
    write_csv(&a.out, "t,value", &rows)?;
    writeln!(out, "wrote {} rows to {}", rows.len(), a.out.display())?;
    Ok(())
}

pub fn green_sumbound(a: &SumBoundArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let t = times(&a.time, 1e-2, 1e6)?;
    let scan = sum_bound_scan(a.theta, a.r_max, &t)?;
    let rows: Vec<Vec<f64>> = scan
        .iter()
        .map(|r| vec![r.t, r.s, r.k_star as f64, r.i, r.ii, r.iii])
        .collect();
    write_csv(&a.out, "t,value,q,I,II,III", &rows)?;
    let sup = scan.iter().map(|r| r.s).fold(0.0, f64::max);
    writeln!(out, "sup S = {}", sci(sup))?;
    Ok(())
}

pub fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.config).map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let solver = cfg.solver()?;
    let params = cfg.physical()?;
    let initial = cfg.initial().generate(&solver.lattice)?;
    fs::create_dir_all(&a.out)?;
    write_atomic(&a.out.join("config.ini"), cfg.to_ini().as_bytes())?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut snapshots = 0usize;
    let dir: &Path = &a.out;
    let result = simulate_streaming(&solver, &params, &initial, &cfg.options(), |r| {
        match r {
            Record::Row(row) => rows.push(row.values().to_vec()),
            Record::Snapshot(t, s) => {
                let step = (t / solver.dt).round() as u64;
                let path = dir.join(format!("snapshot_{step:08}.vdsf"));
                let mut buf = Vec::new();
                write_vdsf(&mut buf, &s.to_snapshot())?;
                write_atomic(&path, &buf).map_err(|e| viscospec::Error::Io(std::io::Error::other(e.to_string())))?;
                snapshots += 1;
            }
        }
        Ok(())
    });
    let series = timeseries_path(&a.out);
    write_csv(&series, SeriesRow::HEADER, &rows)?;
    match result {
        Ok(sim) => {
            writeln!(
                out,
                "steps {} substeps {} final t {} rows {} snapshots {}",
                sim.steps,
                sim.substeps,
                sci(sim.final_time),
                rows.len(),
                snapshots
            )?;
            Ok(())
        }
        Err(viscospec::Error::BlowUp { t, reason }) => Err(CliError::BlowUp(format!(
            "blow-up after t = {}: {reason}; partial output ({} rows, {snapshots} snapshots) kept in {}",
            sci(t),
            rows.len(),
            a.out.display()
        ))),
        Err(e) => Err(e.into()),
    }
}

pub fn timeseries_path(dir: &Path) -> PathBuf {
    dir.join("timeseries.csv")
}

pub fn decay_fit(a: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.input).map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let (header, rows) = read_csv(&text)?;
    let col = header
        .iter()
        .position(|c| c == &a.column)
        .ok_or_else(|| CliError::Usage(format!("no column named {:?}", a.column)))?;
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let v: Vec<f64> = rows.iter().map(|r| r[col]).collect();
    let fit = fit_series(&t, &v, (a.t_min, a.t_max))?;
    writeln!(out, "slope {}", sci(fit.slope))?;
    writeln!(out, "intercept {}", sci(fit.intercept))?;
    writeln!(out, "r_squared {}", sci(fit.r_squared))?;
    writeln!(out, "points {}", fit.points)?;
    let report = json!({
        "input": a.input.display().to_string(),
        "column": a.column,
        "window": [fit.window.0, fit.window.1],
        "points": fit.points,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
    });
    let path = a.report.clone().unwrap_or_else(|| {
        let mut p = a.input.clone().into_os_string();
        p.push(".fit.json");
        PathBuf::from(p)
    });
    let mut body = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
    body.push('\n');
    write_atomic(&path, body.as_bytes())?;
    Ok(())
}
