use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::State;
use crate::error::{Error, Result};
use crate::spectral::{dft_forward, dft_inverse, gradient, symmetrize, Lattice, MatrixField, SpectralField, VectorField};

/// Builds a state satisfying all four compatibility constraints from a small
/// displacement `ψ`.
///
/// The deformation is `U₀ = (I - ∇ψ)⁻¹`, the Jacobian of the inverse of the map
/// `x ↦ x - ψ(x)`, and `ρ₀ = det(I - ∇ψ) = 1 / det U₀`. To first order
/// `F₀ = ∇ψ` and `a₀ = -div ψ`.
pub fn init_from_displacement(psi: &VectorField, velocity: Option<&VectorField>) -> Result<State> {
    let lattice = *psi.lattice();
    let dim = lattice.dim();
    if psi.dim() != dim {
        return Err(Error::InvalidParameter("displacement must have one component per axis".into()));
    }
    if let Some(v) = velocity {
        if v.lattice() != &lattice {
            return Err(Error::LatticeMismatch);
        }
    }
    let grads: Vec<Vec<Vec<f64>>> = (0..dim)
        .map(|i| gradient(psi.get(i)).components().iter().map(dft_inverse).collect())
        .collect();
    let len = lattice.len();
    let mut rho = vec![0.0; len];
    let mut u = vec![vec![0.0; len]; dim * dim];
    for x in 0..len {
        let mut m = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                m[i][j] = if i == j { 1.0 } else { 0.0 } - grads[i][j][x];
            }
        }
        let (det, inv) = invert(&m, dim);
        if !(det > 0.5) {
            return Err(Error::InvalidParameter(format!(
                "displacement too large: det(I - ∇ψ) = {det} at point {x}"
            )));
        }
        rho[x] = det - 1.0;
        for i in 0..dim {
            for j in 0..dim {
                u[i * dim + j][x] = inv[i][j] - if i == j { 1.0 } else { 0.0 };
            }
        }
    }
    let a = dft_forward(&rho, &lattice)?;
    let f = MatrixField::new(u.iter().map(|c| dft_forward(c, &lattice)).collect::<Result<_>>()?)?;
    let v = match velocity {
        Some(v) => v.clone(),
        None => VectorField::zeros(&lattice),
    };
    State::new(a, v, f)
}

/// Determinant and inverse of the leading `dim × dim` block.
pub(crate) fn invert(m: &[[f64; 3]; 3], dim: usize) -> (f64, [[f64; 3]; 3]) {
    let mut inv = [[0.0; 3]; 3];
    if dim == 2 {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        inv[0][0] = m[1][1] / det;
        inv[0][1] = -m[0][1] / det;
        inv[1][0] = -m[1][0] / det;
        inv[1][1] = m[0][0] / det;
        return (det, inv);
    }
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    inv[0][0] = c00 / det;
    inv[1][0] = c01 / det;
    inv[2][0] = c02 / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    (det, inv)
}

pub(crate) fn det(m: &[[f64; 3]; 3], dim: usize) -> f64 {
    if dim == 2 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    } else {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Named initial-data families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialFamily {
    Equilibrium,
    /// Generic random displacement and velocity.
    Random,
    /// Divergence-free displacement and velocity: only the rotational pair
    /// `(Fᵀ - F, Ω)` is excited at linear order.
    Solenoidal,
    /// Gradient displacement and velocity: only `(a, d)` and `(𝓔, d)` are
    /// excited at linear order.
    Irrotational,
}

impl InitialFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "equilibrium" => Ok(Self::Equilibrium),
            "random" => Ok(Self::Random),
            "solenoidal" => Ok(Self::Solenoidal),
            "irrotational" => Ok(Self::Irrotational),
            _ => Err(Error::InvalidParameter(format!("unknown initial family {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Equilibrium => "equilibrium",
            Self::Random => "random",
            Self::Solenoidal => "solenoidal",
            Self::Irrotational => "irrotational",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub family: InitialFamily,
    /// Max pointwise entry of `∇ψ`.
    pub amplitude: f64,
    /// Max pointwise velocity component.
    pub velocity_amplitude: f64,
    /// Modes with `1 ≤ max|m_i| ≤ max_mode` are excited.
    pub max_mode: usize,
    pub seed: u64,
}

impl InitialData {
    pub fn new(family: InitialFamily, amplitude: f64) -> Self {
        Self {
            family,
            amplitude,
            velocity_amplitude: amplitude,
            max_mode: 2,
            seed: 0,
        }
    }

    pub fn generate(&self, lattice: &Lattice) -> Result<State> {
        if !(self.amplitude >= 0.0 && self.velocity_amplitude >= 0.0) {
            return Err(Error::InvalidParameter("amplitudes must be nonnegative".into()));
        }
        if self.family == InitialFamily::Equilibrium {
            return Ok(State::zeros(lattice));
        }
        let mut psi = random_vector_field(lattice, self.max_mode, self.seed, self.family)?;
        let grad_max = psi
            .components()
            .iter()
            .flat_map(|c| gradient(c).components().iter().map(max_abs).collect::<Vec<_>>())
            .fold(0.0, f64::max);
        if grad_max > 0.0 {
            psi.scale(self.amplitude / grad_max);
        }
        let mut v = random_vector_field(lattice, self.max_mode, self.seed.wrapping_add(1), self.family)?;
        let v_max = v.components().iter().map(max_abs).fold(0.0, f64::max);
        if v_max > 0.0 {
            v.scale(self.velocity_amplitude / v_max);
        }
        init_from_displacement(&psi, Some(&v))
    }
}

fn max_abs(f: &SpectralField) -> f64 {
    dft_inverse(f).iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Smooth random real vector field with unit-scale coefficients on the modes
/// `1 ≤ max|m_i| ≤ max_mode`, projected according to `family`.
pub fn random_vector_field(lattice: &Lattice, max_mode: usize, seed: u64, family: InitialFamily) -> Result<VectorField> {
    let dim = lattice.dim();
    let n = lattice.points_per_dim() as i64;
    if max_mode == 0 || 2 * max_mode as i64 >= n {
        return Err(Error::InvalidParameter(format!(
            "max_mode must lie in 1..{}, got {max_mode}",
            n / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = lattice.len();
    let mut comps = vec![vec![Complex64::default(); len]; dim];
    for k in 0..len {
        let m = lattice.mode(k);
        let mx = m.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        if mx == 0 || mx > max_mode as u64 {
            continue;
        }
        for c in comps.iter_mut() {
            c[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    if matches!(family, InitialFamily::Solenoidal | InitialFamily::Irrotational) {
        for k in 0..len {
            let xi = lattice.derivative_frequency(k);
            let k2: f64 = xi[..dim].iter().map(|x| x * x).sum();
            if k2 == 0.0 {
                continue;
            }
            let dot: Complex64 = (0..dim).map(|i| comps[i][k] * xi[i]).sum();
            for i in 0..dim {
                let par = dot * (xi[i] / k2);
                comps[i][k] = match family {
                    InitialFamily::Solenoidal => comps[i][k] - par,
                    _ => par,
                };
            }
        }
    }
    let fields = comps
        .into_iter()
        .map(|mut c| {
            symmetrize(lattice, &mut c);
            SpectralField::from_coeffs(lattice, c, true)
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(fields)
}
