use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Relative discriminant below which the eigenvalues count as a double root.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Coefficients of the model system
/// `∂_t c + α Λ u = 0`, `∂_t u - κ Δ u - β Λ c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenParams {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
}

impl GreenParams {
    pub fn new(alpha: f64, beta: f64, kappa: f64) -> Result<Self> {
        for (name, x) in [("alpha", alpha), ("beta", beta), ("kappa", kappa)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(Self { alpha, beta, kappa })
    }

    /// Density / velocity-divergence pair `(a, d)`: `(1, 2, ν)`.
    pub fn density_divergence(nu: f64) -> Result<Self> {
        Self::new(1.0, 2.0, nu)
    }

    /// Elastic-compression / velocity-divergence pair `(𝓔, d)`: `(2, 1, ν)`.
    pub fn elastic_divergence(nu: f64) -> Result<Self> {
        Self::new(2.0, 1.0, nu)
    }

    /// Antisymmetric deformation / vorticity pair `(Fᵀ - F, Ω)`: `(1, 1, μ)`.
    pub fn rotational(mu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, mu)
    }

    /// Radius of the circle where the two eigenvalues coincide.
    pub fn degenerate_radius(&self) -> f64 {
        2.0 * (self.alpha * self.beta).sqrt() / self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub degenerate: bool,
}

/// Roots of `λ² + κ r² λ + αβ r² = 0`.
pub fn eigenvalues(params: &GreenParams, xi_mag: f64) -> EigenPair {
    let r2 = xi_mag * xi_mag;
    let a = params.kappa * params.kappa * r2 * r2;
    let b = 4.0 * params.alpha * params.beta * r2;
    let disc = a - b;
    let m = -0.5 * params.kappa * r2;
    let degenerate = disc.abs() < DEGENERACY_TOL * a.max(b) || (a == 0.0 && b == 0.0);
    let (lp, lm) = if disc >= 0.0 {
        let s = 0.5 * disc.sqrt();
        let lm = m - s;
        // Vieta avoids the cancellation in m + s.
        let lp = if lm != 0.0 { params.alpha * params.beta * r2 / lm } else { 0.0 };
        (Complex64::new(lp, 0.0), Complex64::new(lm, 0.0))
    } else {
        let w = 0.5 * (-disc).sqrt();
        (Complex64::new(m, w), Complex64::new(m, -w))
    };
    EigenPair {
        lambda_plus: lp,
        lambda_minus: lm,
        degenerate,
    }
}

/// Real 2×2 matrix `Ĝ(|ξ|, t)`, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenMatrix {
    pub entries: [[f64; 2]; 2],
}

impl GreenMatrix {
    pub const IDENTITY: Self = Self {
        entries: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub fn apply(&self, x: [Complex64; 2]) -> [Complex64; 2] {
        let e = &self.entries;
        [e[0][0] * x[0] + e[0][1] * x[1], e[1][0] * x[0] + e[1][1] * x[1]]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.entries;
        let b = &other.entries;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { entries: out }
    }

    pub fn det(&self) -> f64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// `cosh(σt)` and `sinh(σt)/σ` as entire functions of `z = σ²`.
fn cosh_sinhc(z: f64, t: f64) -> (f64, f64) {
    let zt2 = z * t * t;
    if zt2.abs() < 1.0 {
        let mut c = 0.0;
        let mut s = 0.0;
        let mut term = 1.0;
        // term_k = (z t²)^k / (2k)!, sinh part uses (2k+1)!.
        for k in 0..30 {
            c += term;
            let sterm = term / (2 * k + 1) as f64;
            s += sterm;
            term *= zt2 / (((2 * k + 1) * (2 * k + 2)) as f64);
            if term.abs() < 1e-18 * c.abs() {
                break;
            }
        }
        (c, s * t)
    } else if z > 0.0 {
        let sigma = z.sqrt();
        let x = sigma * t;
        (x.cosh(), x.sinh() / sigma)
    } else {
        let w = (-z).sqrt();
        let x = w * t;
        (x.cos(), x.sin() / w)
    }
}

/// Green's matrix of the model system at `|ξ| = xi_mag`, time `t ≥ 0`.
///
/// `Ĝ = e^{mt}[cosh(σt) I + sinh(σt)/σ (A - mI)]` with
/// `A = [[0, -α r], [β r, -κ r²]]`, `m = -κr²/2`, `σ² = κ²r⁴/4 - αβr²`.
/// Where `σt` is large and real the exponentials are combined through the
/// eigenvalues so that nothing overflows or cancels.
pub fn green_hat(params: &GreenParams, xi_mag: f64, t: f64) -> GreenMatrix {
    if t == 0.0 {
        return GreenMatrix::IDENTITY;
    }
    let r = xi_mag;
    let r2 = r * r;
    let m = -0.5 * params.kappa * r2;
    let z = 0.25 * params.kappa * params.kappa * r2 * r2 - params.alpha * params.beta * r2;
    if z > 0.0 && z * t * t >= 1.0 {
        let sigma = z.sqrt();
        let lm = m - sigma;
        let lp = params.alpha * params.beta * r2 / lm;
        let ep = (lp * t).exp();
        let em = (lm * t).exp();
        let inv = 1.0 / (2.0 * sigma);
        let sh = (ep - em) * inv;
        return GreenMatrix {
            entries: [
                [(lp * em - lm * ep) * inv, -params.alpha * r * sh],
                [params.beta * r * sh, (lp * ep - lm * em) * inv],
            ],
        };
    }
    let (c, sh) = cosh_sinhc(z, t);
    let e = (m * t).exp();
    GreenMatrix {
        entries: [
            [e * (c - m * sh), -params.alpha * r * e * sh],
            [params.beta * r * e * sh, e * (c + m * sh)],
        ],
    }
}

/// The eigenvalue form of the Green's matrix evaluated in complex arithmetic,
/// with the divided differences replaced by their limits on the degenerate
/// circle. Used as an independent route for checking realness and accuracy.
pub fn green_hat_eigen_form(params: &GreenParams, xi_mag: f64, t: f64) -> [[Complex64; 2]; 2] {
    let ev = eigenvalues(params, xi_mag);
    let (lp, lm) = (ev.lambda_plus, ev.lambda_minus);
    let r = xi_mag;
    let (g11, dd, g22);
    if ev.degenerate {
        let l = 0.5 * (lp + lm);
        let el = (l * t).exp();
        g11 = (1.0 - l * t) * el;
        g22 = (1.0 + l * t) * el;
        dd = t * el;
    } else {
        let ep = (lp * t).exp();
        let em = (lm * t).exp();
        let den = lp - lm;
        g11 = (lp * em - lm * ep) / den;
        g22 = (lp * ep - lm * em) / den;
        dd = (ep - em) / den;
    }
    [[g11, -params.alpha * r * dd], [params.beta * r * dd, g22]]
}

/// Evolves `(c, u)` by the model semigroup for time `t`, mode by mode.
pub fn apply_semigroup(
    params: &GreenParams,
    c: &SpectralField,
    u: &SpectralField,
    t: f64,
) -> Result<(SpectralField, SpectralField)> {
    c.check_same_lattice(u)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let lattice = *c.lattice();
    let mut oc = c.clone();
    let mut ou = u.clone();
    oc.set_hermitian(c.is_hermitian() && u.is_hermitian());
    ou.set_hermitian(c.is_hermitian() && u.is_hermitian());
    let (occ, ouc) = (oc.coeffs_mut(), ou.coeffs_mut());
    let mut cache: Option<(f64, GreenMatrix)> = None;
    for k in 0..lattice.len() {
        let r = lattice.frequency_norm(k);
        let g = match cache {
            Some((rr, g)) if rr == r => g,
            _ => {
                let g = green_hat(params, r, t);
                cache = Some((r, g));
                g
            }
        };
        let [x, y] = g.apply([c.coeffs()[k], u.coeffs()[k]]);
        occ[k] = x;
        ouc[k] = y;
    }
    Ok((oc, ou))
}

/// `β‖c‖² + α‖u‖²`, non-increasing along the semigroup.
pub fn semigroup_energy(params: &GreenParams, c: &SpectralField, u: &SpectralField) -> f64 {
    params.beta * c.l2_norm().powi(2) + params.alpha * u.l2_norm().powi(2)
}
