use std::f64::consts::PI;

use proptest::prelude::*;
use viscospec::decay::*;
use viscospec::green::{log_space, RadialOptions};
use viscospec::solver::{InitialData, InitialFamily, PhysicalParams, SolverConfig};
use viscospec::{Error, GreenParams, Lattice};

fn power_table(c: f64, slope: f64, times: &[f64]) -> DecayTable {
    let mut t = DecayTable::new(&["t", "v"]);
    t.rows = times.iter().map(|&x| vec![x, c * (1.0 + x).powf(slope)]).collect();
    t
}

fn quadrature(params: GreenParams, profile: Profile, amplitude: f64, times: Vec<f64>) -> DecayExperiment {
    DecayExperiment::new(
        ExperimentKind::LinearQuadrature {
            params,
            dim: 3,
            profile,
            amplitude,
            options: RadialOptions::default(),
        },
        times,
    )
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Direct radial transform of `(1 - |x|²)²₊`.
fn bump_oracle(r: f64, dim: usize) -> f64 {
    let b = |s: f64| (1.0 - s * s).powi(2);
    match dim {
        3 => {
            let sinc = |z: f64| if z == 0.0 { 1.0 } else { z.sin() / z };
            4.0 * PI / (2.0 * PI).powf(1.5) * simpson(|s| b(s) * s * s * sinc(r * s), 0.0, 1.0, 4000)
        }
        2 => {
            let j0 = |z: f64| simpson(|th| (z * th.sin()).cos(), 0.0, PI, 400) / PI;
            simpson(|s| b(s) * s * j0(r * s), 0.0, 1.0, 2000)
        }
        _ => unreachable!(),
    }
}

#[test]
fn exact_power_law_is_recovered() {
    let times = log_space(1e-1, 1e5, 61);
    let fit = fit_slope(&power_table(3.0, -0.75, &times), "v", (1e2, 1e4)).unwrap();
    assert!((fit.slope + 0.75).abs() < 1e-10);
    assert!((fit.intercept - 3f64.ln()).abs() < 1e-9);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
    assert_eq!(fit.window, (1e2, 1e4));
    assert!((20..=21).contains(&fit.points));
}

#[test]
fn exponential_fits_poorly() {
    let times = log_space(1.0, 1e2, 30);
    let mut t = DecayTable::new(&["t", "v"]);
    t.rows = times.iter().map(|&x| vec![x, (-0.1 * x).exp()]).collect();
    let fit = fit_slope(&t, "v", (1.0, 1e2)).unwrap();
    assert!(fit.r_squared < 0.9, "{}", fit.r_squared);
    assert!((0.0..=1.0).contains(&fit.r_squared));
}

#[test]
fn fit_rejects_bad_input() {
    let times = log_space(1.0, 1e4, 41);
    let mut t = power_table(1.0, -1.0, &times);
    t.rows[30][1] = 0.0;
    match fit_slope(&t, "v", (1e2, 1e4)) {
        Err(Error::NonPositive { index, value }) => {
            assert_eq!(index, 30);
            assert_eq!(value, 0.0);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(fit_slope(&t, "missing", (1e2, 1e4)).is_err());
    assert!(fit_slope(&t, "v", (1e3, 1.1e3)).is_err());
    assert!(fit_slope(&t, "v", (1e4, 1e2)).is_err());
    assert!(fit_series(&times, &times[1..], (1.0, 1e4)).is_err());
}

#[test]
fn experiment_validation() {
    let p = GreenParams::density_divergence(1.0).unwrap();
    let ok = quadrature(p, Profile::Gaussian, 1.0, log_space(1.0, 1e4, 41));
    assert!(ok.validate().is_ok());
    let short = quadrature(p, Profile::Gaussian, 1.0, log_space(1.0, 1e4, 9));
    assert!(short.validate().is_err());
    let mut outside = ok.clone();
    outside.fit_window = (1e2, 1e5);
    assert!(outside.validate().is_err());
    let unsorted = quadrature(p, Profile::Gaussian, 1.0, vec![3.0, 1.0]);
    assert!(unsorted.validate().is_err());
    let negative = quadrature(p, Profile::Gaussian, -1.0, log_space(1.0, 1e4, 41));
    assert!(run_experiment(&negative).is_err());
}

#[test]
fn profile_names_round_trip() {
    for p in [Profile::Gaussian, Profile::Annulus, Profile::L1Bump] {
        assert_eq!(Profile::parse(p.name()).unwrap(), p);
    }
    assert!(Profile::parse("box").is_err());
}

#[test]
fn bump_profile_matches_direct_transform() {
    for dim in [2, 3] {
        for r in [0.0, 0.3, 2.0, 3.99, 4.01, 7.5, 15.0, 30.0] {
            let got = Profile::L1Bump.eval(r, dim);
            let want = bump_oracle(r, dim);
            assert!((got - want).abs() < 1e-9 * bump_oracle(0.0, dim), "dim {dim} r {r}: {got} vs {want}");
        }
    }
}

#[test]
fn profile_field_has_continuum_norm() {
    let l = Lattice::new(3, 32, 8.0 * PI).unwrap();
    let f = profile_field(&l, Profile::Gaussian, 2.0);
    let want = 2.0 * (PI / 2.0).powf(0.75);
    assert!((f.l2_norm() - want).abs() < 1e-12 * want);
    assert_eq!(f.hermitian_defect(), 0.0);
}

#[test]
fn zero_data_gives_zero_table() {
    let p = GreenParams::rotational(1.0).unwrap();
    let times = log_space(1.0, 1e4, 20);
    let t = run_experiment(&quadrature(p, Profile::Gaussian, 0.0, times.clone())).unwrap();
    assert!(t.column("l2").unwrap().iter().all(|v| *v == 0.0));
    let exp = DecayExperiment::new(
        ExperimentKind::LinearLattice {
            params: p,
            lattice: Lattice::new(2, 16, 2.0 * PI).unwrap(),
            profile: Profile::Annulus,
            amplitude: 0.0,
        },
        times,
    );
    let t = run_experiment(&exp).unwrap();
    assert!(t.rows.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
}

#[test]
fn quadrature_curve_is_decreasing_with_optimal_slope() {
    let p = GreenParams::density_divergence(1.0).unwrap();
    let times = log_space(1e-1, 1e4, 41);
    let table = run_experiment(&quadrature(p, Profile::Gaussian, 1.0, times.clone())).unwrap();
    assert_eq!(table.times(), times);
    let l2 = table.column("l2").unwrap();
    assert!(l2.windows(2).all(|w| w[1] < w[0]));
    let fit = fit_slope(&table, "l2", (1e2, 1e4)).unwrap();
    assert!((-0.80..=-0.70).contains(&fit.slope), "slope {}", fit.slope);
}

#[test]
fn lattice_matches_quadrature_for_moderate_times() {
    let l = Lattice::new(3, 32, 8.0 * PI).unwrap();
    let times = log_space(1e-2, 4.0, 10);
    for p in [
        GreenParams::density_divergence(1.0).unwrap(),
        GreenParams::elastic_divergence(1.5).unwrap(),
        GreenParams::rotational(1.0).unwrap(),
    ] {
        let mut exp = quadrature(p, Profile::Gaussian, 1.0, times.clone());
        exp.fit_window = (times[0], times[9]);
        let q = run_experiment(&exp).unwrap();
        exp.kind = ExperimentKind::LinearLattice {
            params: p,
            lattice: l,
            profile: Profile::Gaussian,
            amplitude: 1.0,
        };
        let lt = run_experiment(&exp).unwrap();
        for (a, b) in q.column("l2").unwrap().iter().zip(lt.column("l2").unwrap()) {
            assert!((a - b).abs() < 0.02 * a, "{a} vs {b}");
        }
        assert!(lt.column("besov").unwrap().iter().all(|b| *b > 0.0));
    }
}

#[test]
fn nonlinear_experiment_tracks_running_suprema() {
    let l = Lattice::new(3, 8, 2.0 * PI).unwrap();
    let params = PhysicalParams::new(1.0, -0.5, 1.4).unwrap();
    let times: Vec<f64> = (0..10).map(|i| i as f64 * 0.05).collect();
    let mut exp = DecayExperiment::new(
        ExperimentKind::Nonlinear {
            config: SolverConfig::new(l, 1e-2, 0.45),
            params,
            initial: InitialData::new(InitialFamily::Random, 1e-3),
            threshold: 0,
        },
        times.clone(),
    );
    exp.fit_window = (0.0, 0.45);
    let t = run_experiment(&exp).unwrap();
    assert_eq!(t.columns, ["t", "l2", "M1", "M2", "M3", "M4", "M"]);
    for (row, want) in t.rows.iter().zip(&times) {
        assert!((row[0] - want).abs() < 1e-12);
    }
    for c in ["M1", "M2", "M3", "M4", "M"] {
        let col = t.column(c).unwrap();
        assert!(col.windows(2).all(|w| w[1] >= w[0]), "{c}");
    }
    let l2 = t.column("l2").unwrap();
    assert!(l2.windows(2).all(|w| w[1] < w[0]));
    if let ExperimentKind::Nonlinear { initial, .. } = &mut exp.kind {
        initial.family = InitialFamily::Equilibrium;
    }
    let z = run_experiment(&exp).unwrap();
    assert!(z.rows.iter().all(|r| r[1..].iter().all(|v| *v == 0.0)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_fit_is_scale_invariant(c in 1e-6f64..1e6, slope in -3.0f64..0.0, noise in 0u64..1000) {
        let times = log_space(1e-1, 1e5, 41);
        let mut t = power_table(1.0, slope, &times);
        for (i, r) in t.rows.iter_mut().enumerate() {
            r[1] *= 1.0 + 0.01 * (((i as u64 * 7919 + noise) % 101) as f64 / 101.0);
        }
        let a = fit_slope(&t, "v", (1e2, 1e4)).unwrap();
        for r in t.rows.iter_mut() {
            r[1] *= c;
        }
        let b = fit_slope(&t, "v", (1e2, 1e4)).unwrap();
        prop_assert!((a.slope - b.slope).abs() < 1e-12);
        prop_assert!((b.intercept - a.intercept - c.ln()).abs() < 1e-9);
    }
}
