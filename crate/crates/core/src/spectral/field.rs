use num_complex::Complex64;

use super::lattice::Lattice;
use crate::error::{Error, Result};

/// Fourier coefficients of a scalar field on a periodic lattice.
///
/// `hermitian` records whether the physical values are real, i.e. whether
/// `c(-ξ) = conj(c(ξ))` holds for every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
    hermitian: bool,
}

impl SpectralField {
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            lattice: *lattice,
            coeffs: vec![Complex64::default(); lattice.len()],
            hermitian: true,
        }
    }

    pub fn from_coeffs(lattice: &Lattice, coeffs: Vec<Complex64>, hermitian: bool) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::SizeMismatch {
                expected: lattice.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            lattice: *lattice,
            coeffs,
            hermitian,
        })
    }

    /// Builds a field and decides the Hermitian flag by inspecting the data.
    pub fn from_coeffs_detect(lattice: &Lattice, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut f = Self::from_coeffs(lattice, coeffs, false)?;
        f.hermitian = f.hermitian_defect() <= 1e-12;
        Ok(f)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn set_hermitian(&mut self, hermitian: bool) {
        self.hermitian = hermitian;
    }

    /// `max |c(-ξ) - conj c(ξ)| / max |c|` (0 for the zero field).
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let m = self.coeffs[self.lattice.negated(k)];
            worst = worst.max((m - c.conj()).norm());
        }
        worst / scale
    }

    /// Mean value of the physical field.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / (self.lattice.len() as f64).sqrt()
    }

    /// `Σ_ξ |c(ξ)|²`.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Physical `L²` norm with midpoint quadrature, computed through Parseval.
    pub fn l2_norm(&self) -> f64 {
        (self.lattice.cell_volume() * self.coeff_energy()).sqrt()
    }

    /// Physical real inner product `∫ f g dx` (real part for complex data).
    pub fn inner(&self, other: &Self) -> f64 {
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        s * self.lattice.cell_volume()
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        debug_assert_eq!(self.lattice, other.lattice);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
        self.hermitian &= other.hermitian;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn check_same_lattice(&self, other: &Self) -> Result<()> {
        if self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }
}

/// `dim` scalar components sharing one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<SpectralField>,
}

impl VectorField {
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            components: vec![SpectralField::zeros(lattice); lattice.dim()],
        }
    }

    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let first = components.first().ok_or(Error::SizeMismatch { expected: 2, actual: 0 })?;
        let lattice = *first.lattice();
        if components.len() != lattice.dim() {
            return Err(Error::SizeMismatch {
                expected: lattice.dim(),
                actual: components.len(),
            });
        }
        if components.iter().any(|c| *c.lattice() != lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { components })
    }

    pub fn lattice(&self) -> &Lattice {
        self.components[0].lattice()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralField] {
        &mut self.components
    }

    pub fn get(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut SpectralField {
        &mut self.components[i]
    }

    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        self.components.iter_mut().for_each(|c| c.scale(s));
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(s, b);
        }
    }
}

/// `dim × dim` scalar components, row-major: `get(i, j)` is `F^{ij}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    dim: usize,
    components: Vec<SpectralField>,
}

impl MatrixField {
    pub fn zeros(lattice: &Lattice) -> Self {
        let dim = lattice.dim();
        Self {
            dim,
            components: vec![SpectralField::zeros(lattice); dim * dim],
        }
    }

    /// Components in row-major order.
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let first = components.first().ok_or(Error::SizeMismatch { expected: 4, actual: 0 })?;
        let lattice = *first.lattice();
        let dim = lattice.dim();
        if components.len() != dim * dim {
            return Err(Error::SizeMismatch {
                expected: dim * dim,
                actual: components.len(),
            });
        }
        if components.iter().any(|c| *c.lattice() != lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { dim, components })
    }

    pub fn lattice(&self) -> &Lattice {
        self.components[0].lattice()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralField] {
        &mut self.components
    }

    pub fn get(&self, i: usize, j: usize) -> &SpectralField {
        &self.components[i * self.dim + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut SpectralField {
        &mut self.components[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: SpectralField) {
        self.components[i * self.dim + j] = f;
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.components[i * d + j] = self.components[j * d + i].clone();
            }
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        self.components.iter_mut().for_each(|c| c.scale(s));
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(s, b);
        }
    }
}
