use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the box `[0, period)^dim`.
///
/// Points and Fourier modes share the same row-major layout: axis 0 is the
/// slowest index, the last axis is contiguous. Integer wave numbers follow the
/// usual FFT ordering `0, 1, .., n/2 - 1, -n/2, .., -1`; the Nyquist index
/// `n/2` is reported as `-n/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    dim: usize,
    n: usize,
    period: f64,
}

impl Lattice {
    pub fn new(dim: usize, n: usize, period: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidLattice(format!("dimension must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidLattice(format!(
                "points per dimension must be a power of two >= 8, got {n}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidLattice(format!("period must be positive, got {period}")));
        }
        Ok(Self { dim, n, period })
    }

    /// Default box used for decay work: `[0, 2π·64)^dim`.
    pub fn with_default_period(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, 2.0 * PI * 64.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_dim(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of grid points (equal to the number of Fourier modes).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.period.powi(self.dim as i32)
    }

    /// Lattice frequency spacing `2π / L`.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Signed integer wave number for a one-dimensional index.
    pub fn wave_number(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Index along one axis for a signed wave number.
    pub fn axis_index(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    /// Per-axis indices of a flat mode index. Unused trailing axes are 0.
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [idx / n, idx % n, 0],
            _ => [idx / (n * n), (idx / n) % n, idx % n],
        }
    }

    pub fn ravel(&self, ix: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            2 => ix[0] * n + ix[1],
            _ => (ix[0] * n + ix[1]) * n + ix[2],
        }
    }

    /// Integer wave-number vector of a flat mode index.
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let ix = self.unravel(idx);
        let mut m = [0i64; 3];
        for (a, mi) in m.iter_mut().enumerate().take(self.dim) {
            *mi = self.wave_number(ix[a]);
        }
        m
    }

    /// Flat index of the mode `-m`.
    pub fn negated(&self, idx: usize) -> usize {
        let ix = self.unravel(idx);
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (self.n - ix[a]) % self.n;
        }
        self.ravel(out)
    }

    /// Physical frequency vector `(2π/L) m`.
    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let k0 = self.fundamental();
        let m = self.mode(idx);
        [k0 * m[0] as f64, k0 * m[1] as f64, k0 * m[2] as f64]
    }

    /// Frequency vector used by odd (derivative-type) multipliers: identical to
    /// [`frequency`](Self::frequency) except that Nyquist components are 0, so
    /// real fields stay real under differentiation.
    pub fn derivative_frequency(&self, idx: usize) -> [f64; 3] {
        let k0 = self.fundamental();
        let m = self.mode(idx);
        let half = (self.n / 2) as i64;
        let mut k = [0.0; 3];
        for a in 0..self.dim {
            if m[a] != -half {
                k[a] = k0 * m[a] as f64;
            }
        }
        k
    }

    /// `|ξ|` of a flat mode index.
    pub fn frequency_norm(&self, idx: usize) -> f64 {
        let k = self.frequency(idx);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
    }

    /// Largest `|ξ|` on the lattice (the corner mode).
    pub fn max_frequency(&self) -> f64 {
        self.fundamental() * (self.n / 2) as f64 * (self.dim as f64).sqrt()
    }

    /// True if any component of the mode sits on the Nyquist plane.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = -((self.n / 2) as i64);
        self.mode(idx).iter().take(self.dim).any(|&m| m == half)
    }

    /// Physical coordinates of a grid point.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let ix = self.unravel(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = h * ix[a] as f64;
        }
        x
    }
}

/// Precomputed per-mode wave-number tables for the hot loops of the solver and
/// the norm computations.
#[derive(Debug, Clone)]
pub struct Wavenumbers {
    /// Derivative wave vectors (Nyquist components zeroed), one array per axis.
    pub kd: Vec<Vec<f64>>,
    /// `|ξ|²` with the full frequency vector.
    pub k2: Vec<f64>,
    /// `|ξ_d|²` with the derivative frequency vector.
    pub kd2: Vec<f64>,
    /// 2/3-rule retention mask.
    pub keep: Vec<bool>,
}

impl Wavenumbers {
    pub fn new(lattice: &Lattice) -> Self {
        let len = lattice.len();
        let dim = lattice.dim();
        let mut kd = vec![vec![0.0; len]; dim];
        let mut k2 = vec![0.0; len];
        let mut kd2 = vec![0.0; len];
        let mut keep = vec![true; len];
        let cut = (lattice.points_per_dim() / 3) as i64;
        for idx in 0..len {
            let k = lattice.frequency(idx);
            let d = lattice.derivative_frequency(idx);
            let m = lattice.mode(idx);
            let mut s = 0.0;
            let mut sd = 0.0;
            for a in 0..dim {
                kd[a][idx] = d[a];
                s += k[a] * k[a];
                sd += d[a] * d[a];
                if m[a].abs() > cut {
                    keep[idx] = false;
                }
            }
            k2[idx] = s;
            kd2[idx] = sd;
        }
        Self { kd, k2, kd2, keep }
    }
}
