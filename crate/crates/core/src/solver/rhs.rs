//! Right-hand side of the perturbation system
//!
//! ```text
//! ∂_t a = -div((1 + a) v)
//! ∂_t v = 𝒜v - C(a) 𝒜v - v·∇v - ∇Π(1 + a) + ∂_k F^{·k} + F^{jk} ∂_j F^{·k}
//! ∂_t F = -v·∇F + ∇v + ∇v F
//! ```
//!
//! with `𝒜 = μΔ + (λ+μ)∇div`, `C(a) = a/(1+a)` and `Π` the enthalpy of the
//! pressure law. Products are formed on the physical grid and, when
//! dealiasing is on, truncated by the 2/3 rule.

use num_complex::Complex64;

use super::params::PhysicalParams;
use super::state::State;
use crate::error::{Error, Result};
use crate::spectral::{FftEngine, Lattice, Wavenumbers};

#[derive(Clone, Copy)]
enum Source {
    A,
    V(usize),
    F(usize),
    /// `∂_l v^i` as `(i, l)`.
    GradV(usize, usize),
    /// `∂_l F^c` as `(c, l)`, `c = i·dim + j`.
    GradF(usize, usize),
    /// `(𝒜v)^i`.
    Visc(usize),
}

/// Scratch space and transform plans for repeated evaluations on one lattice.
pub struct RhsWorkspace {
    lattice: Lattice,
    dim: usize,
    engine: FftEngine,
    wn: Wavenumbers,
    dealias: bool,
    spare_hat: Vec<Complex64>,
    /// Flat indices of the retained band, or of every mode without dealiasing.
    band: Vec<usize>,
    all: Vec<usize>,
    /// Physical fields, two slots per unscaled complex array (real and
    /// imaginary part).
    phys: Vec<Vec<Complex64>>,
    jobs: Vec<Source>,
    /// Pointwise products, packed in pairs like `phys`: Π, flux (dim),
    /// v-terms (dim), F-terms (dim²).
    prod: Vec<Vec<Complex64>>,
    prod_hat: Vec<Vec<Complex64>>,
    /// Largest velocity component seen in the last evaluation.
    pub max_velocity: f64,
    /// Smallest density seen in the last evaluation.
    pub min_density: f64,
}

impl RhsWorkspace {
    pub fn new(lattice: &Lattice, dealias: bool) -> Self {
        let dim = lattice.dim();
        let len = lattice.len();
        let mut jobs = vec![Source::A];
        jobs.extend((0..dim).map(Source::V));
        jobs.extend((0..dim * dim).map(Source::F));
        jobs.extend((0..dim * dim).map(|c| Source::GradV(c / dim, c % dim)));
        jobs.extend((0..dim * dim * dim).map(|c| Source::GradF(c / dim, c % dim)));
        jobs.extend((0..dim).map(Source::Visc));
        let slots = jobs.len();
        let n_prod = 1 + 2 * dim + dim * dim;
        let engine = FftEngine::new(lattice);
        let all: Vec<usize> = (0..len).collect();
        let band = if dealias { engine.band().to_vec() } else { all.clone() };
        Self {
            lattice: *lattice,
            dim,
            engine,
            wn: Wavenumbers::new(lattice),
            dealias,
            spare_hat: vec![Complex64::default(); len],
            band,
            all,
            phys: vec![vec![Complex64::default(); len]; slots.div_ceil(2)],
            jobs,
            prod: vec![vec![Complex64::default(); len]; n_prod.div_ceil(2)],
            prod_hat: vec![vec![Complex64::default(); len]; n_prod],
            max_velocity: 0.0,
            min_density: 1.0,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Modes touched by an evaluation: the retained band when the input is
    /// known to lie in it, otherwise every mode.
    pub fn modes(&self, in_band: bool) -> &[usize] {
        if in_band {
            &self.band
        } else {
            &self.all
        }
    }

    pub fn wavenumbers(&self) -> &Wavenumbers {
        &self.wn
    }

    fn inverse_all(&mut self, state: &State, params: &PhysicalParams, in_band: bool) {
        let dim = self.dim;
        let idx: &[usize] = if in_band { &self.band } else { &self.all };
        for (pair, buf) in self.jobs.chunks(2).zip(self.phys.iter_mut()) {
            fill(&self.wn, dim, pair[0], state, params, idx, |k, z| buf[k] = z);
            if let Some(&s1) = pair.get(1) {
                fill(&self.wn, dim, s1, state, params, idx, |k, z| {
                    let b = buf[k];
                    buf[k] = Complex64::new(b.re - z.im, b.im + z.re);
                });
            }
            self.engine.inverse_unscaled(buf, in_band);
        }
    }

    fn forward_all(&mut self) {
        let n = self.prod_hat.len();
        for (q, buf) in self.prod.iter_mut().enumerate() {
            self.engine.forward_unscaled(buf, self.dealias);
            let (lo, hi) = self.prod_hat.split_at_mut(2 * q + 1);
            let oy = if 2 * q + 1 < n { &mut hi[0] } else { &mut self.spare_hat };
            self.engine.unpack_pair(buf, &mut lo[2 * q], oy, self.dealias);
        }
    }

    /// Everything except the constant-coefficient viscous term `𝒜v`.
    ///
    /// `in_band` promises that every input coefficient outside the 2/3 band is
    /// zero, which lets the inverse transforms skip empty lines.
    pub fn explicit_part(
        &mut self,
        state: &State,
        params: &PhysicalParams,
        in_band: bool,
        out: &mut State,
    ) -> Result<()> {
        let dim = self.dim;
        let len = self.lattice.len();
        self.inverse_all(state, params, in_band);

        let gm1 = params.pressure_gamma - 1.0;
        let (max_v, min_rho, bad) = match dim {
            2 => pointwise::<2>(&self.phys, &mut self.prod, self.engine.scale(), gm1, len),
            _ => pointwise::<3>(&self.phys, &mut self.prod, self.engine.scale(), gm1, len),
        };
        if let Some((x, rho)) = bad {
            return Err(Error::BlowUp {
                t: f64::NAN,
                reason: format!("density {rho} at grid point {x}"),
            });
        }
        self.max_velocity = max_v;
        self.min_density = min_rho;
        self.forward_all();

        let wn = &self.wn;
        let ph = &self.prod_hat;
        let idx: &[usize] = if in_band { &self.band } else { &self.all };
        if idx.len() < len {
            for f in out.fields_mut() {
                f.coeffs_mut().fill(Complex64::default());
            }
        }
        let kd: Vec<&[f64]> = wn.kd.iter().map(|k| k.as_slice()).collect();
        let v: Vec<&[Complex64]> = state.v.components().iter().map(|f| f.coeffs()).collect();
        let f: Vec<&[Complex64]> = state.f.components().iter().map(|f| f.coeffs()).collect();
        let i_ = Complex64::i();
        {
            let out_a = out.a.coeffs_mut();
            for &k in idx {
                let mut s = Complex64::default();
                for j in 0..dim {
                    s += (v[j][k] + ph[1 + j][k]) * kd[j][k];
                }
                out_a[k] = -i_ * s;
            }
        }
        for i in 0..dim {
            let out_v = out.v.get_mut(i).coeffs_mut();
            let (pi, pv) = (&ph[0], &ph[1 + dim + i]);
            for &k in idx {
                let mut s = -pi[k] * kd[i][k];
                for kk in 0..dim {
                    s += f[i * dim + kk][k] * kd[kk][k];
                }
                out_v[k] = pv[k] + i_ * s;
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let c = i * dim + j;
                let (vi, kdj, pf) = (v[i], kd[j], &ph[1 + 2 * dim + c]);
                let out_f = out.f.components_mut()[c].coeffs_mut();
                for &k in idx {
                    out_f[k] = pf[k] + i_ * vi[k] * kdj[k];
                }
            }
        }
        for f in out.fields_mut() {
            f.set_hermitian(true);
        }
        Ok(())
    }

    /// Adds `𝒜v` to the velocity part of `out`.
    pub fn add_viscous(&self, state: &State, params: &PhysicalParams, out: &mut State) {
        for i in 0..self.dim {
            let o = out.v.get_mut(i).coeffs_mut();
            fill(&self.wn, self.dim, Source::Visc(i), state, params, &self.all, |k, z| o[k] += z);
        }
    }
}

/// Evaluates the spectral source `src` on the modes `idx`, handing each
/// value to `put`.
fn fill(
    wn: &Wavenumbers,
    dim: usize,
    src: Source,
    state: &State,
    params: &PhysicalParams,
    idx: &[usize],
    mut put: impl FnMut(usize, Complex64),
) {
    match src {
        Source::A => copy(state.a.coeffs(), idx, put),
        Source::V(i) => copy(state.v.get(i).coeffs(), idx, put),
        Source::F(c) => copy(state.f.components()[c].coeffs(), idx, put),
        Source::GradV(i, l) => grad(state.v.get(i).coeffs(), &wn.kd[l], idx, put),
        Source::GradF(c, l) => grad(state.f.components()[c].coeffs(), &wn.kd[l], idx, put),
        Source::Visc(i) => {
            let mu = params.mu;
            let lm = params.lambda + params.mu;
            let v: Vec<&[Complex64]> = state.v.components().iter().map(|f| f.coeffs()).collect();
            let kd: Vec<&[f64]> = wn.kd.iter().map(|k| k.as_slice()).collect();
            let (vi, kdi, kd2) = (v[i], kd[i], &wn.kd2);
            for &k in idx {
                let mut dot = Complex64::default();
                for j in 0..dim {
                    dot += v[j][k] * kd[j][k];
                }
                put(k, -(vi[k] * (mu * kd2[k])) - dot * (lm * kdi[k]));
            }
        }
    }
}

fn copy(from: &[Complex64], idx: &[usize], mut put: impl FnMut(usize, Complex64)) {
    for &k in idx {
        put(k, from[k]);
    }
}

/// `i ξ_l f̂`.
fn grad(from: &[Complex64], kd: &[f64], idx: &[usize], mut put: impl FnMut(usize, Complex64)) {
    for &k in idx {
        put(k, Complex64::new(-from[k].im * kd[k], from[k].re * kd[k]));
    }
}

/// Points processed per gathered chunk.
const CHUNK: usize = 128;

/// Forms the pointwise products from the physical fields. Returns the
/// largest velocity component, the smallest density and the first point with
/// non-positive density (or non-finite velocity), if any.
fn pointwise<const D: usize>(
    phys: &[Vec<Complex64>],
    prod: &mut [Vec<Complex64>],
    scale: f64,
    gm1: f64,
    len: usize,
) -> (f64, f64, Option<(usize, f64)>) {
    let (sv, sf) = (1, 1 + D);
    let (sgv, sgf) = (1 + D + D * D, 1 + D + 2 * D * D);
    let svisc = sgf + D * D * D;
    let (pv0, pf0) = (1 + D, 1 + 2 * D);
    let mut g = vec![[0.0f64; CHUNK]; 2 * phys.len()];
    let mut o = vec![[0.0f64; CHUNK]; 2 * prod.len()];
    let mut max_v: f64 = 0.0;
    let mut min_rho = f64::INFINITY;
    let mut bad = None;
    let mut x0 = 0;
    while x0 < len {
        let w = CHUNK.min(len - x0);
        for (q, src) in phys.iter().enumerate() {
            let (re, im) = g[2 * q..].split_at_mut(1);
            for (p, z) in src[x0..x0 + w].iter().enumerate() {
                re[0][p] = z.re * scale;
                im[0][p] = z.im * scale;
            }
        }
        for p in 0..w {
            let a = g[0][p];
            let rho = 1.0 + a;
            if !(rho > 0.0) {
                bad.get_or_insert((x0 + p, rho));
                continue;
            }
            min_rho = min_rho.min(rho);
            let v: [f64; D] = std::array::from_fn(|i| g[sv + i][p]);
            let f: [[f64; D]; D] = std::array::from_fn(|i| std::array::from_fn(|j| g[sf + i * D + j][p]));
            let gv: [[f64; D]; D] = std::array::from_fn(|i| std::array::from_fn(|l| g[sgv + i * D + l][p]));
            o[0][p] = (gm1 * rho.ln()).exp_m1() / gm1;
            let c_a = a / rho;
            for i in 0..D {
                max_v = max_v.max(v[i].abs());
                o[1 + i][p] = a * v[i];
                let mut s = -c_a * g[svisc + i][p];
                for j in 0..D {
                    s -= v[j] * gv[i][j];
                }
                // F^{jk} ∂_j F^{ik}
                for k in 0..D {
                    let base = sgf + (i * D + k) * D;
                    for j in 0..D {
                        s += f[j][k] * g[base + j][p];
                    }
                }
                o[pv0 + i][p] = s;
                for j in 0..D {
                    let base = sgf + (i * D + j) * D;
                    let mut s = 0.0;
                    for k in 0..D {
                        s += gv[i][k] * f[k][j] - v[k] * g[base + k][p];
                    }
                    o[pf0 + i * D + j][p] = s;
                }
            }
        }
        for (q, dst) in prod.iter_mut().enumerate() {
            let (re, im) = (&o[2 * q], &o[2 * q + 1]);
            for (p, z) in dst[x0..x0 + w].iter_mut().enumerate() {
                *z = Complex64::new(re[p], im[p]);
            }
        }
        x0 += w;
    }
    if !max_v.is_finite() && bad.is_none() {
        bad = Some((0, f64::NAN));
    }
    (max_v, min_rho, bad)
}

/// True if every coefficient outside the 2/3 band vanishes.
pub fn is_in_band(state: &State, wn: &Wavenumbers) -> bool {
    state
        .fields()
        .all(|f| f.coeffs().iter().zip(&wn.keep).all(|(c, &keep)| keep || (c.re == 0.0 && c.im == 0.0)))
}

/// Full time derivative of `state` (products dealiased by the 2/3 rule).
pub fn rhs(state: &State, params: &PhysicalParams) -> Result<State> {
    state.validate()?;
    params.validate()?;
    let mut ws = RhsWorkspace::new(state.lattice(), true);
    let in_band = is_in_band(state, ws.wavenumbers());
    let mut out = State::zeros(state.lattice());
    ws.explicit_part(state, params, in_band, &mut out)?;
    ws.add_viscous(state, params, &mut out);
    Ok(out)
}
