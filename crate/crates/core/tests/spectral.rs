use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viscospec::spectral::fft::direct_dft;
use viscospec::spectral::*;

fn random_real(lattice: &Lattice, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..lattice.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn random_field(lattice: &Lattice, seed: u64) -> SpectralField {
    dft_forward(&random_real(lattice, seed), lattice).unwrap()
}

/// Random field without Nyquist content and without mean.
fn smooth_field(lattice: &Lattice, seed: u64) -> SpectralField {
    let f = random_field(lattice, seed);
    let mut out = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0));
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        if k == 0 || lattice.is_nyquist(k) {
            *c = Complex64::default();
        }
    }
    out
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn forward_matches_direct_summation_16_cubed() {
    let lattice = Lattice::new(3, 16, 2.0 * std::f64::consts::PI).unwrap();
    let x = random_real(&lattice, 7);
    let f = dft_forward(&x, &lattice).unwrap();
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let oracle = direct_dft(&lattice, &xc, false);
    assert!(max_diff(f.coeffs(), &oracle) < 1e-12);
    assert!(f.is_hermitian());
}

#[test]
fn inverse_matches_direct_summation_2d() {
    let lattice = Lattice::new(2, 16, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z: Vec<Complex64> = (0..lattice.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let f = SpectralField::from_coeffs(&lattice, z.clone(), false).unwrap();
    let oracle = direct_dft(&lattice, &z, true);
    assert!(max_diff(&dft_inverse_complex(&f), &oracle) < 1e-12);
}

#[test]
fn dirac_comb_has_flat_spectrum() {
    let lattice = Lattice::new(2, 8, 1.0).unwrap();
    let mut x = vec![0.0; lattice.len()];
    x[13] = 1.0;
    let f = dft_forward(&x, &lattice).unwrap();
    let expected = 1.0 / (lattice.len() as f64).sqrt();
    for c in f.coeffs() {
        assert!((c.norm() - expected).abs() < 1e-14);
    }
}

#[test]
fn constant_field_only_zero_mode() {
    let lattice = Lattice::new(3, 8, 1.0).unwrap();
    let f = dft_forward(&vec![2.5; lattice.len()], &lattice).unwrap();
    assert!((f.coeffs()[0].re - 2.5 * (lattice.len() as f64).sqrt()).abs() < 1e-12);
    assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-13));
    assert!((f.mean() - 2.5).abs() < 1e-14);
}

#[test]
fn size_mismatch_rejected() {
    let lattice = Lattice::new(2, 8, 1.0).unwrap();
    assert!(dft_forward(&[0.0; 10], &lattice).is_err());
}

#[test]
fn bad_lattices_rejected() {
    assert!(Lattice::new(3, 4, 1.0).is_err());
    assert!(Lattice::new(3, 12, 1.0).is_err());
    assert!(Lattice::new(1, 8, 1.0).is_err());
    assert!(Lattice::new(2, 8, 0.0).is_err());
}

#[test]
fn round_trip_all_sizes() {
    for dim in [2, 3] {
        for n in [8, 16, 32] {
            let lattice = Lattice::new(dim, n, 5.0).unwrap();
            let x = random_real(&lattice, n as u64);
            let back = dft_inverse(&dft_forward(&x, &lattice).unwrap());
            let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12, "dim {dim} n {n}: {err}");
        }
    }
}

#[test]
fn parseval_equality() {
    let lattice = Lattice::new(3, 16, 7.0).unwrap();
    let x = random_real(&lattice, 11);
    let phys: f64 = x.iter().map(|v| v * v).sum::<f64>() * lattice.cell_volume();
    let f = dft_forward(&x, &lattice).unwrap();
    assert!((f.l2_norm().powi(2) - phys).abs() < 1e-10 * phys);
}

#[test]
fn plane_wave_is_multiplier_eigenfunction() {
    let lattice = Lattice::new(3, 16, 2.0 * std::f64::consts::PI).unwrap();
    let f = plane_wave(&lattice, [1, 2, -2], 1.0, 0.3);
    let g = lambda_power(&f, 0.5);
    let k = 3.0f64;
    let err = max_diff(g.coeffs(), f.scaled(k.sqrt()).coeffs());
    assert!(err < 1e-12);
    let g2 = lambda_power(&plane_wave(&lattice, [0, 2, 0], 1.0, 0.0), 2.0);
    let expect = plane_wave(&lattice, [0, 2, 0], 4.0, 0.0);
    assert!(max_diff(g2.coeffs(), expect.coeffs()) < 1e-12);
}

#[test]
fn unit_symbol_is_identity_and_zero_mode_convention() {
    let lattice = Lattice::new(2, 16, 4.0).unwrap();
    let f = random_field(&lattice, 5);
    let g = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0));
    assert_eq!(g.coeffs(), f.coeffs());
    assert!(g.is_hermitian());
    let h = apply_multiplier(&f, |xi| {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        Complex64::new(1.0 / r, 0.0)
    });
    assert_eq!(h.coeffs()[0], Complex64::default());
}

#[test]
fn inverse_lambda_matches_direct_oracle() {
    let lattice = Lattice::new(2, 8, 2.0).unwrap();
    let mut f = random_field(&lattice, 9);
    f.coeffs_mut()[0] = Complex64::default();
    let g = lambda_power(&f, -1.0);
    // Oracle: synthesize physical values by direct summation of the symbol.
    let scaled: Vec<Complex64> = (0..lattice.len())
        .map(|k| {
            let r = lattice.frequency_norm(k);
            if k == 0 {
                Complex64::default()
            } else {
                f.coeffs()[k] / r
            }
        })
        .collect();
    let oracle = direct_dft(&lattice, &scaled, true);
    assert!(max_diff(&dft_inverse_complex(&g), &oracle) < 1e-12);
    assert_eq!(g.coeffs()[0], Complex64::default());
}

#[test]
fn lambda_composition_identity() {
    let lattice = Lattice::new(3, 16, 3.0).unwrap();
    let mut f = random_field(&lattice, 21);
    f.coeffs_mut()[0] = Complex64::default();
    let g = lambda_power(&lambda_power(&f, 1.0), -1.0);
    assert!(max_diff(g.coeffs(), f.coeffs()) < 1e-12 * f.max_coeff().max(1.0));
}

#[test]
fn leray_div_of_gradient_is_minus_lambda() {
    let lattice = Lattice::new(3, 16, 2.0 * std::f64::consts::PI).unwrap();
    let g = smooth_field(&lattice, 4);
    let d = leray_div(&gradient(&g));
    let mut sum = d.add(&lambda_power(&g, 1.0));
    sum.set_hermitian(true);
    assert!(sum.max_coeff() < 1e-11 * lambda_power(&g, 1.0).max_coeff());
}

#[test]
fn leray_ops_on_solenoidal_and_gradient_fields() {
    let lattice = Lattice::new(3, 16, 2.0 * std::f64::consts::PI).unwrap();
    let g = smooth_field(&lattice, 8);
    let omega = leray_curl(&gradient(&g));
    for c in omega.components() {
        assert!(c.max_coeff() < 1e-12);
    }
    // v = curl of (0, 0, g) is divergence free.
    let v = VectorField::new(vec![
        derivative(&g, 1),
        derivative(&g, 0).scaled(-1.0),
        SpectralField::zeros(&lattice),
    ])
    .unwrap();
    assert!(leray_div(&v).max_coeff() < 1e-12);
}

#[test]
fn leray_ops_match_multiplier_oracle() {
    let lattice = Lattice::new(3, 8, 2.5).unwrap();
    let v = VectorField::new((0..3).map(|s| random_field(&lattice, 30 + s)).collect()).unwrap();
    let d = leray_div(&v);
    let omega = leray_curl(&v);
    for k in 1..lattice.len() {
        let xi = lattice.derivative_frequency(k);
        let r = lattice.frequency_norm(k);
        let mut acc = Complex64::default();
        for j in 0..3 {
            acc += Complex64::i() * xi[j] * v.get(j).coeffs()[k] / r;
        }
        assert!((acc - d.coeffs()[k]).norm() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let o = Complex64::i() * (xi[j] * v.get(i).coeffs()[k] - xi[i] * v.get(j).coeffs()[k]) / r;
                assert!((o - omega.get(i, j).coeffs()[k]).norm() < 1e-12);
                assert_eq!(omega.get(i, j).coeffs()[k], -omega.get(j, i).coeffs()[k]);
            }
        }
    }
    assert_eq!(d.coeffs()[0], Complex64::default());
    assert!(d.is_hermitian() && d.hermitian_defect() < 1e-12);
}

#[test]
fn dealias_properties() {
    let lattice = Lattice::new(3, 16, 1.0).unwrap();
    let inside = dealias(&random_field(&lattice, 77));
    assert_eq!(dealias(&inside).coeffs(), inside.coeffs());
    let nyq = plane_wave(&lattice, [8, 0, 0], 1.0, 0.0);
    assert!(dealias(&nyq).max_coeff() == 0.0);
    let f = random_field(&lattice, 1);
    assert!(dealias(&f).l2_norm() <= f.l2_norm());
}

#[test]
fn engine_pair_transforms_match_single() {
    let lattice = Lattice::new(3, 16, 1.0).unwrap();
    let mut eng = FftEngine::new(&lattice);
    let x = random_real(&lattice, 2);
    let y = random_real(&lattice, 3);
    let fx = dft_forward(&x, &lattice).unwrap();
    let fy = dft_forward(&y, &lattice).unwrap();
    let mut ox = vec![Complex64::default(); lattice.len()];
    let mut oy = ox.clone();
    eng.forward_pair(&x, &y, &mut ox, &mut oy, false);
    assert!(max_diff(&ox, fx.coeffs()) < 1e-13);
    assert!(max_diff(&oy, fy.coeffs()) < 1e-13);

    let dx = dealias(&fx);
    let dy = dealias(&fy);
    eng.forward_pair(&x, &y, &mut ox, &mut oy, true);
    assert!(max_diff(&ox, dx.coeffs()) < 1e-13);
    assert!(max_diff(&oy, dy.coeffs()) < 1e-13);
    eng.forward_real_dealiased(&x, &mut ox);
    assert!(max_diff(&ox, dx.coeffs()) < 1e-13);

    let mut px = vec![0.0; lattice.len()];
    let mut py = px.clone();
    eng.inverse_pair(dx.coeffs(), dy.coeffs(), &mut px, &mut py, true);
    let rx = dft_inverse(&dx);
    let ry = dft_inverse(&dy);
    let e = px.iter().zip(&rx).chain(py.iter().zip(&ry)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(e < 1e-13);
}

#[test]
fn vdsf_round_trip_and_rejection() {
    let lattice = Lattice::new(2, 8, 3.5).unwrap();
    let snap = Snapshot {
        lattice,
        fields: vec![
            ("a".into(), random_real(&lattice, 1)),
            ("v1".into(), random_real(&lattice, 2)),
        ],
    };
    let mut buf = Vec::new();
    write_vdsf(&mut buf, &snap).unwrap();
    assert_eq!(&buf[..4], b"VDSF");
    let back = read_vdsf(buf.as_slice()).unwrap();
    assert_eq!(back, snap);
    assert!(read_vdsf(&buf[..buf.len() - 3]).is_err());
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(read_vdsf(bad.as_slice()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplier_composition(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let lattice = Lattice::new(2, 16, 3.0).unwrap();
        let f = random_field(&lattice, seed);
        let s1 = move |xi: [f64; 3]| Complex64::new((a * xi[0]).cos(), (b * xi[1]).sin());
        let s2 = move |xi: [f64; 3]| Complex64::new(1.0 / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]), a);
        let both = apply_multiplier(&f, move |xi| s1(xi) * s2(xi));
        let seq = apply_multiplier(&apply_multiplier(&f, s1), s2);
        prop_assert!(max_diff(both.coeffs(), seq.coeffs()) < 1e-13 * (1.0 + f.max_coeff()));
    }

    #[test]
    fn real_symbols_preserve_hermitian(seed in 0u64..1000, s in -3.0f64..3.0) {
        let lattice = Lattice::new(3, 8, 2.0).unwrap();
        let f = random_field(&lattice, seed);
        let g = lambda_power(&f, s);
        prop_assert!(g.is_hermitian());
        prop_assert!(g.hermitian_defect() < 1e-12);
        let h = apply_multiplier(&f, |xi| Complex64::new((-xi[0] * xi[0]).exp(), 0.0));
        prop_assert!(h.is_hermitian());
    }

    #[test]
    fn parseval_on_random_fields(seed in 0u64..1000) {
        let lattice = Lattice::new(2, 32, 9.0).unwrap();
        let x = random_real(&lattice, seed);
        let phys: f64 = x.iter().map(|v| v * v).sum::<f64>() * lattice.cell_volume();
        let f = dft_forward(&x, &lattice).unwrap();
        prop_assert!((f.l2_norm().powi(2) - phys).abs() < 1e-10 * phys);
    }

    #[test]
    fn div_of_gradient_identity(seed in 0u64..1000) {
        let lattice = Lattice::new(2, 16, 6.0).unwrap();
        let g = smooth_field(&lattice, seed);
        let lam = lambda_power(&g, 1.0);
        let sum = leray_div(&gradient(&g)).add(&lam);
        prop_assert!(sum.max_coeff() < 1e-11 * lam.max_coeff());
    }
}
