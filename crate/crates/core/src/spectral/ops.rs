//! Transforms and Fourier multipliers on [`SpectralField`]s.
//!
//! Conventions used everywhere in the crate:
//! - `∂_j` has symbol `+i ξ_j`; on the Nyquist plane of axis `j` the symbol is
//!   0 so that odd operators keep real fields real.
//! - Even symbols such as `|ξ|^s` use the full frequency vector.
//! - Homogeneous symbols that are singular at the origin send the zero mode
//!   to 0.

use num_complex::Complex64;

use super::fft::FftEngine;
use super::field::{MatrixField, SpectralField, VectorField};
use super::lattice::Lattice;
use crate::error::{Error, Result};

pub fn dft_forward(physical: &[f64], lattice: &Lattice) -> Result<SpectralField> {
    if physical.len() != lattice.len() {
        return Err(Error::SizeMismatch {
            expected: lattice.len(),
            actual: physical.len(),
        });
    }
    let mut engine = FftEngine::new(lattice);
    let mut coeffs = vec![Complex64::default(); lattice.len()];
    engine.forward_real(physical, &mut coeffs);
    // Exact Hermitian symmetry: the imaginary parts of self-conjugate modes
    // and the mismatch between ±ξ are pure rounding.
    symmetrize(lattice, &mut coeffs);
    SpectralField::from_coeffs(lattice, coeffs, true)
}

/// Forward transform of complex physical data.
pub fn dft_forward_complex(physical: &[Complex64], lattice: &Lattice) -> Result<SpectralField> {
    if physical.len() != lattice.len() {
        return Err(Error::SizeMismatch {
            expected: lattice.len(),
            actual: physical.len(),
        });
    }
    let mut engine = FftEngine::new(lattice);
    let mut coeffs = physical.to_vec();
    engine.forward_complex(&mut coeffs);
    SpectralField::from_coeffs_detect(lattice, coeffs)
}

/// Physical values (real part) of a field.
pub fn dft_inverse(f: &SpectralField) -> Vec<f64> {
    let mut engine = FftEngine::new(f.lattice());
    let mut out = vec![0.0; f.lattice().len()];
    engine.inverse_real(f.coeffs(), &mut out);
    out
}

pub fn dft_inverse_complex(f: &SpectralField) -> Vec<Complex64> {
    let mut engine = FftEngine::new(f.lattice());
    let mut out = f.coeffs().to_vec();
    engine.inverse_complex(&mut out);
    out
}

/// Replaces `c(ξ)` by `(c(ξ) + conj c(-ξ)) / 2`.
pub fn symmetrize(lattice: &Lattice, coeffs: &mut [Complex64]) {
    for k in 0..coeffs.len() {
        let m = lattice.negated(k);
        if m < k {
            continue;
        }
        let avg = (coeffs[k] + coeffs[m].conj()) * 0.5;
        coeffs[k] = avg;
        coeffs[m] = avg.conj();
    }
}

/// Multiplies every coefficient by `symbol(ξ)`, `ξ` the full frequency vector
/// (unused trailing components are 0).
///
/// A non-finite `symbol(0)` sends the zero mode to 0. The output is flagged
/// Hermitian when the input is and the sampled symbol satisfies
/// `σ(-ξ) = conj σ(ξ)` on the lattice.
pub fn apply_multiplier<S>(f: &SpectralField, symbol: S) -> SpectralField
where
    S: Fn([f64; 3]) -> Complex64,
{
    let lattice = *f.lattice();
    let sym: Vec<Complex64> = (0..lattice.len())
        .map(|k| {
            let s = symbol(lattice.frequency(k));
            if s.re.is_finite() && s.im.is_finite() {
                s
            } else if k == 0 {
                Complex64::default()
            } else {
                s
            }
        })
        .collect();
    let symmetric = (0..lattice.len()).all(|k| {
        let a = sym[lattice.negated(k)];
        let b = sym[k].conj();
        (a - b).norm() <= 1e-14 * (1.0 + b.norm())
    });
    let coeffs = f.coeffs().iter().zip(&sym).map(|(c, s)| c * s).collect();
    SpectralField::from_coeffs(&lattice, coeffs, f.is_hermitian() && symmetric)
        .expect("length preserved")
}

/// Multiplies by a real, even symbol given as a function of `|ξ|`. Keeps the
/// Hermitian flag.
pub fn apply_radial<S>(f: &SpectralField, symbol: S) -> SpectralField
where
    S: Fn(f64) -> f64,
{
    let lattice = *f.lattice();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let s = symbol(lattice.frequency_norm(k));
            if s.is_finite() {
                c * s
            } else {
                Complex64::default()
            }
        })
        .collect();
    SpectralField::from_coeffs(&lattice, coeffs, f.is_hermitian()).expect("length preserved")
}

/// `Λ^s f`, symbol `|ξ|^s`. The zero mode is kept only for `s = 0`.
pub fn lambda_power(f: &SpectralField, s: f64) -> SpectralField {
    if s == 0.0 {
        return f.clone();
    }
    apply_radial(f, |r| if r == 0.0 { 0.0 } else { r.powf(s) })
}

/// `∂_j f`.
pub fn derivative(f: &SpectralField, axis: usize) -> SpectralField {
    let lattice = *f.lattice();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::new(0.0, lattice.derivative_frequency(k)[axis]))
        .collect();
    SpectralField::from_coeffs(&lattice, coeffs, f.is_hermitian()).expect("length preserved")
}

/// Riesz-type operator `Λ^{-1} ∂_j f`, symbol `i ξ_j / |ξ|`.
pub fn riesz(f: &SpectralField, axis: usize) -> SpectralField {
    let lattice = *f.lattice();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let r = lattice.frequency_norm(k);
            if r == 0.0 {
                Complex64::default()
            } else {
                c * Complex64::new(0.0, lattice.derivative_frequency(k)[axis] / r)
            }
        })
        .collect();
    SpectralField::from_coeffs(&lattice, coeffs, f.is_hermitian()).expect("length preserved")
}

pub fn gradient(f: &SpectralField) -> VectorField {
    let comps = (0..f.lattice().dim()).map(|j| derivative(f, j)).collect();
    VectorField::new(comps).expect("consistent components")
}

pub fn divergence(v: &VectorField) -> SpectralField {
    let mut out = derivative(v.get(0), 0);
    for j in 1..v.dim() {
        out.axpy(1.0, &derivative(v.get(j), j));
    }
    out
}

/// `d = Λ^{-1} div v`, i.e. `d̂(ξ) = i ξ·v̂(ξ) / |ξ|`, zero mode 0.
pub fn leray_div(v: &VectorField) -> SpectralField {
    let mut out = riesz(v.get(0), 0);
    for j in 1..v.dim() {
        out.axpy(1.0, &riesz(v.get(j), j));
    }
    out
}

/// `Ω = Λ^{-1} curl v` with `(curl v)_{ij} = ∂_j v^i - ∂_i v^j`.
pub fn leray_curl(v: &VectorField) -> MatrixField {
    let dim = v.dim();
    let mut out = MatrixField::zeros(v.lattice());
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut w = riesz(v.get(i), j);
            w.axpy(-1.0, &riesz(v.get(j), i));
            let neg = w.scaled(-1.0);
            out.set(i, j, w);
            out.set(j, i, neg);
        }
    }
    out
}

/// 2/3-rule truncation: zero every mode with some `|m_i| > n/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let lattice = *f.lattice();
    let cut = (lattice.points_per_dim() / 3) as i64;
    let mut out = f.clone();
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        let m = lattice.mode(k);
        if m.iter().any(|mi| mi.abs() > cut) {
            *c = Complex64::default();
        }
    }
    out
}

/// Plane wave `amplitude · cos(ξ·x + phase)` for the integer mode `m`,
/// built directly in Fourier space (exactly two nonzero coefficients).
pub fn plane_wave(lattice: &Lattice, m: [i64; 3], amplitude: f64, phase: f64) -> SpectralField {
    let mut ix = [0usize; 3];
    for a in 0..lattice.dim() {
        ix[a] = lattice.axis_index(m[a]);
    }
    let k = lattice.ravel(ix);
    let neg = lattice.negated(k);
    let root = (lattice.len() as f64).sqrt();
    let mut f = SpectralField::zeros(lattice);
    let c = f.coeffs_mut();
    if neg == k {
        c[k] = Complex64::new(amplitude * root * phase.cos(), 0.0);
    } else {
        let z = Complex64::from_polar(0.5 * amplitude * root, phase);
        c[k] = z;
        c[neg] = z.conj();
    }
    f
}
