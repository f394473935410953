use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viscospec::littlewood_paley::*;
use viscospec::spectral::*;

fn lattice3(n: usize) -> Lattice {
    Lattice::new(3, n, 2.0 * PI * 16.0).unwrap()
}

fn random_field(lattice: &Lattice, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..lattice.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    dft_forward(&x, lattice).unwrap()
}

fn zero_mean(mut f: SpectralField) -> SpectralField {
    f.coeffs_mut()[0] = Complex64::default();
    f
}

fn physical_l2(values: &[f64], lattice: &Lattice) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() * lattice.cell_volume()).sqrt()
}

#[test]
fn partition_of_unity_on_lattices() {
    for n in [32, 64] {
        let p = DyadicPartition::new(&lattice3(n)).unwrap();
        let (dev, _) = p.unity_deviation();
        assert!(dev < 1e-10, "n = {n}: {dev}");
    }
    let p = DyadicPartition::new(&Lattice::new(2, 64, 2.0 * PI).unwrap()).unwrap();
    assert!(p.unity_deviation().0 < 1e-10);
}

#[test]
fn block_range_and_small_lattice_rejection() {
    let p = DyadicPartition::new(&lattice3(32)).unwrap();
    assert_eq!((p.q_min(), p.q_max()), (-5, 1));
    // Every admissible lattice spans at least three blocks; smaller grids are
    // rejected when the lattice is built.
    assert!(Lattice::new(3, 4, 2.0 * PI).is_err());
    let p = DyadicPartition::new(&Lattice::new(2, 8, 2.0 * PI).unwrap()).unwrap();
    assert!(p.q_max() - p.q_min() + 1 >= 3);
}

#[test]
fn bump_supports() {
    for i in 0..=4000 {
        let r = i as f64 * 1e-3;
        if !(0.75..=8.0 / 3.0).contains(&r) {
            assert_eq!(phi(r), 0.0, "phi({r})");
        }
        if r > 4.0 / 3.0 {
            assert_eq!(chi(r), 0.0, "chi({r})");
        }
        let mut s = chi(r);
        for q in 0..8 {
            s += phi(r * 2f64.powi(-q));
        }
        assert!((s - 1.0).abs() < 1e-12);
        let active = (-8..8).filter(|&q| phi(r * 2f64.powi(-q)) > 0.0).count();
        assert!(active <= 2);
    }
    assert_eq!(chi(0.0), 1.0);
}

#[test]
fn plane_wave_unit_frequency_blocks() {
    let lattice = Lattice::new(3, 32, 2.0 * PI * 8.0).unwrap();
    let p8 = DyadicPartition::new(&lattice).unwrap();
    let f = plane_wave(&lattice, [0, 8, 0], 1.0, 0.4);
    let nonzero: Vec<i32> = p8
        .blocks(true)
        .filter(|&q| dyadic_block(&f, q, &p8, true).max_coeff() > 1e-14)
        .collect();
    assert_eq!(nonzero, vec![-1, 0]);
    // Oracle: block by block, apply φ(2^{-q}|ξ|) and integrate physically.
    let s = 0.7;
    let mut expected = 0.0;
    for q in p8.blocks(true) {
        let block = apply_multiplier(&f, |xi| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            Complex64::new(phi(r * 2f64.powi(-q)), 0.0)
        });
        expected += 2f64.powf(q as f64 * s) * physical_l2(&dft_inverse(&block), &lattice);
    }
    let got = besov_norm(&f, &BesovSpec::homogeneous(s, 2.0, 1.0), &p8).unwrap();
    assert!((got - expected).abs() < 1e-12 * expected);
    let l2 = f.l2_norm();
    let closed = (2f64.powf(-s) * phi(2.0) + phi(1.0)) * l2;
    assert!((got - closed).abs() < 1e-12 * closed);
}

#[test]
fn blocks_reconstruct_and_telescope() {
    let lattice = lattice3(32);
    let p = DyadicPartition::new(&lattice).unwrap();
    let f = zero_mean(random_field(&lattice, 3));
    let mut sum = SpectralField::zeros(&lattice);
    for q in p.blocks(true) {
        sum.axpy(1.0, &dyadic_block(&f, q, &p, true));
    }
    assert!(sum.sub(&f).max_coeff() < 1e-10);
    let mut inh = SpectralField::zeros(&lattice);
    let g = random_field(&lattice, 4);
    for q in p.blocks(false) {
        inh.axpy(1.0, &dyadic_block(&g, q, &p, false));
    }
    assert!(inh.sub(&g).max_coeff() < 1e-10);

    for q in p.blocks(true) {
        let mut acc = low_cutoff(&f, q, &p, true);
        for k in q..=p.q_max() {
            acc.axpy(1.0, &dyadic_block(&f, k, &p, true));
        }
        assert!(acc.sub(&f).max_coeff() < 1e-10);
    }
    assert!(low_cutoff(&f, p.q_max() + 5, &p, true).sub(&f).max_coeff() < 1e-10);
    assert_eq!(low_cutoff(&f, p.q_min() - 3, &p, true).max_coeff(), 0.0);
    assert_eq!(dyadic_block(&f, p.q_max() + 3, &p, true).max_coeff(), 0.0);
}

#[test]
fn annulus_spectrum_touches_at_most_three_blocks() {
    let lattice = lattice3(32);
    let p = DyadicPartition::new(&lattice).unwrap();
    let f = random_field(&lattice, 8);
    let ann = apply_radial(&f, |r| if (0.3..0.6).contains(&r) { 1.0 } else { 0.0 });
    let active: Vec<i32> = p
        .blocks(true)
        .filter(|&q| dyadic_block(&ann, q, &p, true).max_coeff() > 0.0)
        .collect();
    assert!(active.len() <= 3);
    assert!(active.windows(2).all(|w| w[1] == w[0] + 1));
}

#[test]
fn almost_orthogonality() {
    let lattice = lattice3(16);
    let lattice = Lattice::new(3, 16, lattice.period() / 2.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    let f = random_field(&lattice, 9);
    for q in p.blocks(true) {
        for q2 in p.blocks(true) {
            if (q - q2).abs() >= 2 {
                let b = dyadic_block(&dyadic_block(&f, q, &p, true), q2, &p, true);
                assert_eq!(b.max_coeff(), 0.0);
            }
        }
    }
}

#[test]
fn zero_field_norms_vanish() {
    let lattice = lattice3(16);
    let lattice = Lattice::new(3, 16, lattice.period() / 2.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    let z = SpectralField::zeros(&lattice);
    for spec in [
        BesovSpec::homogeneous(0.5, 2.0, 1.0),
        BesovSpec::homogeneous(0.5, 1.0, 2.0),
        BesovSpec::inhomogeneous(1.5, f64::INFINITY, f64::INFINITY),
    ] {
        assert_eq!(besov_norm(&z, &spec, &p).unwrap(), 0.0);
    }
    assert_eq!(hybrid_norm(&z, &HybridSpec::l2(0.5, 1.5), &p).unwrap(), 0.0);
}

#[test]
fn lp_quadrature_agrees_with_parseval_path() {
    let lattice = Lattice::new(2, 32, 2.0 * PI * 4.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    let f = random_field(&lattice, 12);
    let fast = block_norms(&[&f], 2.0, &p, false).unwrap();
    for (q, n) in fast {
        let b = dyadic_block(&f, q, &p, false);
        let direct = physical_l2(&dft_inverse(&b), &lattice);
        assert!((n - direct).abs() < 1e-12 * direct.max(1e-300));
    }
    // L^∞ block norm is the maximum of the physical block.
    let sup = block_norms(&[&f], f64::INFINITY, &p, true).unwrap();
    for (q, n) in sup {
        let b = dft_inverse(&dyadic_block(&f, q, &p, true));
        let m = b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((n - m).abs() <= 1e-14 * m.max(1.0));
    }
}

#[test]
fn non_hermitian_rejected_for_p_not_two() {
    let lattice = Lattice::new(2, 16, 2.0 * PI * 4.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    let mut f = random_field(&lattice, 1);
    f.coeffs_mut()[3] += Complex64::new(0.0, 1.0);
    f.set_hermitian(false);
    assert!(besov_norm(&f, &BesovSpec::homogeneous(0.0, 1.0, 1.0), &p).is_err());
    assert!(besov_norm(&f, &BesovSpec::homogeneous(0.0, 2.0, 1.0), &p).is_ok());
    assert!(besov_norm(&f, &BesovSpec::homogeneous(0.0, 0.5, 1.0), &p).is_err());
}

#[test]
fn chemin_lerner_examples() {
    let lattice = Lattice::new(2, 32, 2.0 * PI * 8.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    // Single-block field: plateau region of φ for q = 0 is |ξ| ∈ [1, 2].
    let f = plane_wave(&lattice, [12, 0, 0], 1.0, 0.0);
    let nonzero: Vec<i32> = p
        .blocks(true)
        .filter(|&q| dyadic_block(&f, q, &p, true).max_coeff() > 0.0)
        .collect();
    assert_eq!(nonzero, vec![0]);
    let times = [0.0, 0.5, 1.25, 3.0];
    let snaps = vec![f.clone(); 4];
    for r in [1.0, 2.0, 3.5] {
        let spec = BesovSpec::homogeneous(0.8, 2.0, 1.0);
        let got = chemin_lerner_norm(&snaps, &times, r, &spec, &p).unwrap();
        let expected = 3f64.powf(1.0 / r) * f.l2_norm();
        assert!((got - expected).abs() < 1e-12 * expected);
    }
    let scaled: Vec<SpectralField> = [1.0, 3.0, 2.0, 0.5].iter().map(|&s| f.scaled(s)).collect();
    let spec = BesovSpec::homogeneous(0.0, 2.0, 1.0);
    let sup = chemin_lerner_norm(&scaled, &times, f64::INFINITY, &spec, &p).unwrap();
    assert!((sup - 3.0 * f.l2_norm()).abs() < 1e-12);
    assert!(chemin_lerner_norm(&scaled[..1], &times[..1], 1.0, &spec, &p).is_err());
    assert!(chemin_lerner_norm(&scaled[..2], &[1.0, 1.0], 1.0, &spec, &p).is_err());
    let other = SpectralField::zeros(&Lattice::new(2, 32, 3.0).unwrap());
    assert!(chemin_lerner_norm(&[f.clone(), other], &[0.0, 1.0], 1.0, &spec, &p).is_err());
}

#[test]
fn chemin_lerner_dominates_time_integrated_norm() {
    let lattice = Lattice::new(2, 32, 2.0 * PI * 8.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..10 {
        let n = 6;
        let mut times = vec![0.0];
        for _ in 1..n {
            let last = *times.last().unwrap();
            times.push(last + rng.gen_range(0.1..1.0));
        }
        let snaps: Vec<SpectralField> = (0..n).map(|i| random_field(&lattice, 100 * trial + i as u64)).collect();
        for r in [1.0, 2.0, 4.0] {
            let spec = BesovSpec::homogeneous(0.3, 2.0, 1.0);
            let tilde = chemin_lerner_norm(&snaps, &times, r, &spec, &p).unwrap();
            let vals: Vec<f64> = snaps
                .iter()
                .map(|s| besov_norm(s, &spec, &p).unwrap().powf(r))
                .collect();
            let plain: f64 = times
                .windows(2)
                .zip(vals.windows(2))
                .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
                .sum::<f64>()
                .powf(1.0 / r);
            assert!(tilde >= plain * (1.0 - 1e-12), "r = {r}: {tilde} < {plain}");
        }
    }
}

#[test]
fn hybrid_monotonicity_on_band_limited_fields() {
    let lattice = Lattice::new(3, 32, 2.0 * PI * 8.0).unwrap();
    let p = DyadicPartition::new(&lattice).unwrap();
    for seed in 0..5 {
        let f = random_field(&lattice, seed);
        // Keep a low band and a high band, both away from |ξ| ≈ 1.
        let g = apply_radial(&f, |r| if (0.2..0.5).contains(&r) || (2.5..4.0).contains(&r) { 1.0 } else { 0.0 });
        let base = hybrid_norm(&g, &HybridSpec::l2(0.2, 1.4), &p).unwrap();
        let tighter = hybrid_norm(&g, &HybridSpec::l2(0.7, 0.9), &p).unwrap();
        assert!(tighter <= base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn interpolation_inequality(seed in 0u64..10_000, theta in 0.05f64..0.95, s1 in -1.0f64..1.0, s2 in 0.0f64..2.0) {
        let lattice = Lattice::new(2, 32, 2.0 * PI * 8.0).unwrap();
        let p = DyadicPartition::new(&lattice).unwrap();
        let f = random_field(&lattice, seed);
        let s = theta * s1 + (1.0 - theta) * s2;
        for pe in [2.0, 3.0] {
            let n = |s| besov_norm(&f, &BesovSpec::homogeneous(s, pe, 1.0), &p).unwrap();
            prop_assert!(n(s) <= n(s1).powf(theta) * n(s2).powf(1.0 - theta) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn hybrid_identity_and_ratio(seed in 0u64..10_000, s in -1.0f64..1.0, dt in 0.0f64..2.0) {
        let lattice = Lattice::new(3, 16, 2.0 * PI * 4.0).unwrap();
        let p = DyadicPartition::new(&lattice).unwrap();
        let f = random_field(&lattice, seed);
        let hb = BesovSpec::homogeneous(s, 2.0, 1.0);
        prop_assert_eq!(hybrid_norm(&f, &HybridSpec::l2(s, s), &p).unwrap(), besov_norm(&f, &hb, &p).unwrap());
        let t = s + dt;
        let hyb = hybrid_norm(&f, &HybridSpec::l2(s, t), &p).unwrap();
        let sum = besov_norm(&f, &hb, &p).unwrap() + besov_norm(&f, &BesovSpec::homogeneous(t, 2.0, 1.0), &p).unwrap();
        let ratio = hyb / sum;
        prop_assert!((0.5..=1.0 + 1e-12).contains(&ratio), "ratio {}", ratio);
    }

    #[test]
    fn l2_ratio_bound(seed in 0u64..10_000) {
        let lattice = Lattice::new(3, 16, 2.0 * PI * 4.0).unwrap();
        let p = DyadicPartition::new(&lattice).unwrap();
        let f = zero_mean(random_field(&lattice, seed));
        let b = besov_norm(&f, &BesovSpec::homogeneous(0.0, 2.0, 2.0), &p).unwrap();
        let ratio = b / f.l2_norm();
        prop_assert!(ratio >= 1.0 / 2f64.sqrt() - 1e-12 && ratio <= 1.0 + 1e-12, "ratio {}", ratio);
    }

    #[test]
    fn absolute_homogeneity(seed in 0u64..10_000, c in -5.0f64..5.0) {
        let lattice = Lattice::new(2, 16, 2.0 * PI * 2.0).unwrap();
        let p = DyadicPartition::new(&lattice).unwrap();
        let f = random_field(&lattice, seed);
        for spec in [BesovSpec::homogeneous(0.5, 2.0, 1.0), BesovSpec::inhomogeneous(1.0, 1.5, 2.0)] {
            let a = besov_norm(&f.scaled(c), &spec, &p).unwrap();
            let b = c.abs() * besov_norm(&f, &spec, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }
}
