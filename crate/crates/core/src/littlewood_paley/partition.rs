use crate::error::{Error, Result};
use crate::spectral::Lattice;

const INNER: f64 = 0.75;
const OUTER: f64 = 8.0 / 3.0;

fn mollifier(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `C^∞` step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = mollifier(x);
        a / (a + mollifier(1.0 - x))
    }
}

/// Plateau profile: rises on `(3/4, 1)`, equals 1 on `[1, 2]`, falls on `(2, 8/3)`.
fn plateau(r: f64) -> f64 {
    if r <= INNER || r >= OUTER {
        0.0
    } else if r < 1.0 {
        smooth_step((r - INNER) / (1.0 - INNER))
    } else if r <= 2.0 {
        1.0
    } else {
        smooth_step((OUTER - r) / (OUTER - 2.0))
    }
}

/// Dyadic bump `φ(r)`, supported in `[3/4, 8/3]`, with
/// `Σ_{q∈ℤ} φ(2^{-q} r) = 1` for every `r > 0`.
pub fn phi(r: f64) -> f64 {
    let p = plateau(r);
    if p == 0.0 {
        return 0.0;
    }
    p / (plateau(0.5 * r) + p + plateau(2.0 * r))
}

/// Low-frequency bump `χ(r) = Σ_{q<0} φ(2^{-q} r)`, `χ(0) = 1`, supported in
/// `[0, 4/3]`.
pub fn chi(r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    if r >= 4.0 / 3.0 {
        return 0.0;
    }
    let (first, w) = active_blocks(r);
    let mut s = 0.0;
    for (i, wi) in w.iter().enumerate() {
        if first + (i as i32) < 0 {
            s += wi;
        }
    }
    // Below the support of every block with q ≥ 0 the sum is the full
    // partition of unity.
    if r <= INNER {
        1.0
    } else {
        s
    }
}

/// The (at most two) blocks active at radius `r > 0`: returns `q0` and
/// `[φ(2^{-q0} r), φ(2^{-q0-1} r)]`.
fn active_blocks(r: f64) -> (i32, [f64; 2]) {
    let mut q_hi = (r / INNER).log2().floor() as i32;
    // Guard against rounding at exact powers of two.
    while 2f64.powi(q_hi) * INNER > r {
        q_hi -= 1;
    }
    while 2f64.powi(q_hi + 1) * INNER <= r {
        q_hi += 1;
    }
    let first = q_hi - 1;
    (first, [phi(r * 2f64.powi(-first)), phi(r * 2f64.powi(-q_hi))])
}

/// Per-mode cache of dyadic weights on one lattice.
#[derive(Debug, Clone)]
pub struct DyadicPartition {
    lattice: Lattice,
    q_min: i32,
    q_max: i32,
    first: Vec<i32>,
    weights: Vec<[f64; 2]>,
    chi: Vec<f64>,
}

impl DyadicPartition {
    /// Block range: `q_min` is the lowest block touching the smallest nonzero
    /// lattice frequency, `q_max` the highest block touching the largest.
    pub fn new(lattice: &Lattice) -> Result<Self> {
        let k_min = lattice.fundamental();
        let k_max = lattice.max_frequency();
        let mut q_min = (k_min / OUTER).log2().floor() as i32 - 1;
        while 2f64.powi(q_min) * OUTER <= k_min {
            q_min += 1;
        }
        let mut q_max = (k_max / INNER).log2().ceil() as i32 + 1;
        while 2f64.powi(q_max) * INNER >= k_max {
            q_max -= 1;
        }
        if q_max - q_min + 1 < 3 {
            return Err(Error::InvalidLattice(format!(
                "lattice hosts only blocks {q_min}..={q_max}; at least three are required"
            )));
        }
        let len = lattice.len();
        let mut first = vec![0; len];
        let mut weights = vec![[0.0; 2]; len];
        let mut chis = vec![0.0; len];
        for k in 0..len {
            let r = lattice.frequency_norm(k);
            if r == 0.0 {
                first[k] = i32::MIN / 2;
                chis[k] = 1.0;
                continue;
            }
            let (q0, w) = active_blocks(r);
            first[k] = q0;
            weights[k] = w;
            chis[k] = chi(r);
        }
        Ok(Self {
            lattice: *lattice,
            q_min,
            q_max,
            first,
            weights,
            chi: chis,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn q_min(&self) -> i32 {
        self.q_min
    }

    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    /// Block indices carrying the decomposition. Inhomogeneous ranges start at
    /// `-1`, the index of `χ(D)`.
    pub fn blocks(&self, homogeneous: bool) -> std::ops::RangeInclusive<i32> {
        if homogeneous {
            self.q_min..=self.q_max
        } else {
            -1..=self.q_max.max(-1)
        }
    }

    /// Symbol of block `q` at mode index `k`.
    pub fn weight(&self, k: usize, q: i32, homogeneous: bool) -> f64 {
        if !homogeneous {
            if q == -1 {
                return self.chi[k];
            }
            if q < -1 {
                return 0.0;
            }
        }
        if q < self.q_min || q > self.q_max {
            return 0.0;
        }
        let d = q - self.first[k];
        match d {
            0 => self.weights[k][0],
            1 => self.weights[k][1],
            _ => 0.0,
        }
    }

    /// Visits the nonzero block weights `(q, w)` of mode `k`.
    pub fn for_each_weight(&self, k: usize, homogeneous: bool, mut visit: impl FnMut(i32, f64)) {
        if !homogeneous {
            let c = self.chi[k];
            if c != 0.0 {
                visit(-1, c);
            }
        }
        if self.first[k] == i32::MIN / 2 {
            return;
        }
        for i in 0..2 {
            let q = self.first[k] + i as i32;
            let w = self.weights[k][i];
            if w == 0.0 || q < self.q_min || q > self.q_max || (!homogeneous && q < 0) {
                continue;
            }
            visit(q, w);
        }
    }

    /// Largest deviation from the two partition-of-unity identities over all
    /// lattice modes, evaluated directly from `φ` and `χ`. Returns the
    /// deviation and the worst mode index.
    pub fn unity_deviation(&self) -> (f64, usize) {
        let mut worst = (0.0, 0);
        for k in 0..self.lattice.len() {
            let r = self.lattice.frequency_norm(k);
            let mut inhom = chi(r);
            let mut hom = 0.0;
            for q in self.q_min..=self.q_max {
                let w = phi(r * 2f64.powi(-q));
                hom += w;
                if q >= 0 {
                    inhom += w;
                }
            }
            let mut dev = (inhom - 1.0).abs();
            if r > 0.0 {
                dev = dev.max((hom - 1.0).abs());
            }
            if dev > worst.0 {
                worst = (dev, k);
            }
        }
        worst
    }
}
