use proptest::prelude::*;
use viscospec::solver::InitialFamily;
use viscospec_cli::output::{csv_string, read_csv, sci, sci_prec};
use viscospec_cli::RunConfig;

#[test]
fn scientific_format_matches_printf() {
    let cases = [
        (1.0, "1.0000000000000000e+00"),
        (123456.789, "1.2345678900000000e+05"),
        (-2.5e-300, "-2.5000000000000000e-300"),
        (6.02214076e23, "6.0221407599999999e+23"),
        (0.1, "1.0000000000000001e-01"),
        (5e-324, "4.9406564584124654e-324"),
        (f64::MAX, "1.7976931348623157e+308"),
        (0.0, "0.0000000000000000e+00"),
        (-0.0, "0.0000000000000000e+00"),
    ];
    for (x, want) in cases {
        assert_eq!(sci(x), want);
    }
    assert_eq!(sci_prec(std::f64::consts::PI, 12), "3.141592653590e+00");
    assert_eq!(sci(f64::NAN), "nan");
}

#[test]
fn csv_round_trip() {
    let rows = vec![vec![0.0, 1.5], vec![1e-3, -2.0]];
    let text = csv_string("t,x", &rows);
    assert_eq!(text, "t,x\n0.0000000000000000e+00,1.5000000000000000e+00\n1.0000000000000000e-03,-2.0000000000000000e+00\n");
    let (h, r) = read_csv(&text).unwrap();
    assert_eq!(h, ["t", "x"]);
    assert_eq!(r, rows);
    assert!(read_csv("t,x\n1,2,3\n").is_err());
    assert!(read_csv("").is_err());
}

#[test]
fn config_defaults_and_overrides() {
    let c = RunConfig::parse("").unwrap();
    assert_eq!(c, RunConfig::default());
    let c = RunConfig::parse("# comment\n[initial]\namplitude = 0.02\n; other\n[lattice]\nn = 16\n").unwrap();
    assert_eq!(c.initial.amplitude, 0.02);
    assert_eq!(c.initial.velocity_amplitude, 0.02);
    assert_eq!(c.lattice.n, 16);
    let c = RunConfig::parse("[initial]\namplitude = 0.02\nvelocity_amplitude = 0\nfamily = solenoidal\n").unwrap();
    assert_eq!(c.initial.velocity_amplitude, 0.0);
    assert_eq!(c.initial.family, InitialFamily::Solenoidal);
    assert!(RunConfig::parse("[lattice]\nn = 12\n").is_err());
    assert!(RunConfig::parse("[solver]\ndealias = maybe\n").is_err());
    assert!(RunConfig::parse("[lattice]\nn = 8\n[lattice]\ndim = 2\n").is_err());
}

proptest! {
    #[test]
    fn prop_resolved_config_round_trips(
        dim in 2usize..=3,
        log_n in 3u32..=6,
        period in 0.1f64..100.0,
        mu in 0.01f64..10.0,
        lambda_frac in -0.99f64..5.0,
        gamma in 1.01f64..3.0,
        dt in 1e-5f64..1e-1,
        steps in 1usize..1000,
        strides in (1usize..50, 0usize..50),
        flags in (any::<bool>(), any::<bool>(), any::<bool>()),
        threshold in -5i32..5,
        family in 0usize..4,
        amps in (0.0f64..0.1, 0.0f64..0.1),
        seed in any::<u64>(),
    ) {
        let mut c = RunConfig::default();
        c.lattice.dim = dim;
        c.lattice.n = 1 << log_n;
        c.lattice.period = period;
        c.physical.mu = mu;
        c.physical.lambda = 2.0 * mu * lambda_frac;
        c.physical.gamma = gamma;
        c.solver.dt = dt;
        c.solver.t_end = dt * steps as f64;
        c.solver.series_stride = strides.0;
        c.solver.snapshot_stride = strides.1;
        c.solver.dealias = flags.0;
        c.solver.constraints = flags.1;
        c.solver.functionals = flags.2;
        c.partition.threshold = threshold;
        c.initial.family = [
            InitialFamily::Equilibrium,
            InitialFamily::Random,
            InitialFamily::Solenoidal,
            InitialFamily::Irrotational,
        ][family];
        c.initial.amplitude = amps.0;
        c.initial.velocity_amplitude = amps.1;
        c.initial.seed = seed;
        let back = RunConfig::parse(&c.to_ini()).unwrap();
        prop_assert_eq!(back, c);
    }
}
