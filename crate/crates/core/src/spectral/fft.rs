//! Multi-dimensional unitary FFTs on a [`Lattice`].
//!
//! One-dimensional transforms come from `rustfft`; this module strings them
//! together along each axis. Normalization is unitary (`n^{-1/2}` per axis and
//! direction), so Parseval holds as an equality:
//! `Σ_x |f(x)|² = Σ_ξ |f̂(ξ)|²`. The forward kernel is `e^{-i ξ·x}`, hence
//! `∂_j` acts as multiplication by `+i ξ_j`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::lattice::Lattice;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Number of strided lines gathered into one contiguous batch.
const BATCH: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

/// Reusable transform plans and scratch space for one lattice.
pub struct FftEngine {
    lattice: Lattice,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    batch: Vec<Complex64>,
    work: Vec<Complex64>,
    /// Per-axis index mask of the 2/3-rule retained band.
    retained: Vec<bool>,
    /// Flat indices of the 2/3-rule retained band.
    band: Vec<usize>,
    out_of_band: Vec<usize>,
    negated: Vec<usize>,
    scale: f64,
}

impl FftEngine {
    pub fn new(lattice: &Lattice) -> Self {
        let n = lattice.points_per_dim();
        let (forward, inverse) = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        });
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let cut = (n / 3) as i64;
        let retained = (0..n).map(|i| lattice.wave_number(i).abs() <= cut).collect();
        let negated = (0..lattice.len()).map(|i| lattice.negated(i)).collect();
        let (band, out_of_band) = (0..lattice.len())
            .partition(|&i| lattice.mode(i).iter().take(lattice.dim()).all(|m| m.abs() <= cut));
        Self {
            lattice: *lattice,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            batch: vec![Complex64::default(); BATCH * n],
            work: vec![Complex64::default(); lattice.len()],
            retained,
            band,
            out_of_band,
            negated,
            scale: (lattice.len() as f64).sqrt().recip(),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// In-place unitary forward transform of complex data.
    pub fn forward_complex(&mut self, data: &mut [Complex64]) {
        self.transform(data, Direction::Forward, false);
    }

    /// In-place unitary inverse transform of complex data.
    pub fn inverse_complex(&mut self, data: &mut [Complex64]) {
        self.transform(data, Direction::Inverse, false);
    }

    /// Forward transform of a real array.
    pub fn forward_real(&mut self, input: &[f64], out: &mut [Complex64]) {
        for (o, &x) in out.iter_mut().zip(input) {
            *o = Complex64::new(x, 0.0);
        }
        self.transform(out, Direction::Forward, false);
    }

    /// Inverse transform keeping the real part.
    pub fn inverse_real(&mut self, input: &[Complex64], out: &mut [f64]) {
        let mut work = std::mem::take(&mut self.work);
        work.copy_from_slice(input);
        self.transform(&mut work, Direction::Inverse, false);
        for (o, z) in out.iter_mut().zip(&work) {
            *o = z.re;
        }
        self.work = work;
    }

    /// Inverse transform of two Hermitian spectra with one complex FFT.
    ///
    /// With `dealiased = true` only coefficients inside the 2/3 band are read;
    /// all others count as zero.
    pub fn inverse_pair(
        &mut self,
        x: &[Complex64],
        y: &[Complex64],
        out_x: &mut [f64],
        out_y: &mut [f64],
        dealiased: bool,
    ) {
        let mut work = std::mem::take(&mut self.work);
        for ((w, a), b) in work.iter_mut().zip(x).zip(y) {
            *w = Complex64::new(a.re - b.im, a.im + b.re);
        }
        self.work = work;
        self.inverse_packed(out_x, out_y, dealiased);
    }

    /// Buffer for [`inverse_packed`](Self::inverse_packed), to be filled with
    /// `x̂ + i ŷ` for two Hermitian spectra.
    pub fn packed_buffer(&mut self) -> &mut [Complex64] {
        &mut self.work
    }

    /// Inverse transform of the packed buffer into two real arrays.
    ///
    /// With `dealiased = true` only entries inside the 2/3 band are read.
    pub fn inverse_packed(&mut self, out_x: &mut [f64], out_y: &mut [f64], dealiased: bool) {
        let mut work = std::mem::take(&mut self.work);
        self.transform_unscaled(&mut work, Direction::Inverse, dealiased);
        let s = self.scale;
        for ((w, ox), oy) in work.iter().zip(out_x.iter_mut()).zip(out_y.iter_mut()) {
            *ox = w.re * s;
            *oy = w.im * s;
        }
        self.work = work;
    }

    /// Forward transform of two real arrays with one complex FFT.
    ///
    /// With `dealias = true` the outputs are restricted to the 2/3 band (all
    /// other modes are set to zero) and unneeded lines are skipped.
    pub fn forward_pair(
        &mut self,
        x: &[f64],
        y: &[f64],
        out_x: &mut [Complex64],
        out_y: &mut [Complex64],
        dealias: bool,
    ) {
        let mut work = std::mem::take(&mut self.work);
        for ((w, &a), &b) in work.iter_mut().zip(x).zip(y) {
            *w = Complex64::new(a, b);
        }
        self.transform_unscaled(&mut work, Direction::Forward, dealias);
        self.unpack_pair(&work, out_x, out_y, dealias);
        self.work = work;
    }

    /// Splits an unscaled forward transform of `x + i y` into the unitary
    /// spectra of `x` and `y`, restricted to the 2/3 band if `band_only`.
    pub fn unpack_pair(&self, data: &[Complex64], out_x: &mut [Complex64], out_y: &mut [Complex64], band_only: bool) {
        let half = 0.5 * self.scale;
        let mut put = |k: usize| {
            let z = data[k];
            let zc = data[self.negated[k]].conj();
            out_x[k] = (z + zc) * half;
            let d = (z - zc) * half;
            out_y[k] = Complex64::new(d.im, -d.re);
        };
        if band_only {
            for &k in &self.band {
                put(k);
            }
            for &k in &self.out_of_band {
                out_x[k] = Complex64::default();
                out_y[k] = Complex64::default();
            }
        } else {
            for k in 0..data.len() {
                put(k);
            }
        }
    }

    /// Unitary normalization factor applied by the scaled transforms.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// In-place inverse transform without the unitary factor. With `prune`,
    /// entries outside the 2/3 band are read as zero.
    pub fn inverse_unscaled(&mut self, data: &mut [Complex64], prune: bool) {
        self.transform_unscaled(data, Direction::Inverse, prune);
    }

    /// In-place forward transform without the unitary factor. With `prune`,
    /// only entries inside the 2/3 band are valid afterwards.
    pub fn forward_unscaled(&mut self, data: &mut [Complex64], prune: bool) {
        self.transform_unscaled(data, Direction::Forward, prune);
    }

    /// Forward transform of a single real array restricted to the 2/3 band.
    pub fn forward_real_dealiased(&mut self, input: &[f64], out: &mut [Complex64]) {
        for (o, &x) in out.iter_mut().zip(input) {
            *o = Complex64::new(x, 0.0);
        }
        self.transform(out, Direction::Forward, true);
        // Restore exact Hermitian symmetry lost to rounding in the pruned passes.
        let mut work = std::mem::take(&mut self.work);
        work.copy_from_slice(out);
        for &k in &self.band {
            out[k] = (work[k] + work[self.negated[k]].conj()) * 0.5;
        }
        for &k in &self.out_of_band {
            out[k] = Complex64::default();
        }
        self.work = work;
    }

    /// Flat indices of the modes kept by the 2/3 rule.
    pub fn band(&self) -> &[usize] {
        &self.band
    }

    fn transform(&mut self, data: &mut [Complex64], dir: Direction, prune: bool) {
        self.transform_unscaled(data, dir, prune);
        let s = self.scale;
        for z in data.iter_mut() {
            *z *= s;
        }
    }

    fn transform_unscaled(&mut self, data: &mut [Complex64], dir: Direction, prune: bool) {
        let dim = self.lattice.dim();
        assert_eq!(data.len(), self.lattice.len(), "transform buffer has wrong length");
        match dir {
            Direction::Inverse => {
                for axis in (0..dim).rev() {
                    self.axis_pass(data, axis, dir, prune);
                }
            }
            Direction::Forward => {
                for axis in 0..dim {
                    self.axis_pass(data, axis, dir, prune);
                }
            }
        }
    }

    /// True if every axis index encoded in `outer` (axes before the current
    /// one) lies in the retained band.
    fn outer_retained(&self, mut outer: usize, axes: usize) -> bool {
        let n = self.lattice.points_per_dim();
        for _ in 0..axes {
            if !self.retained[outer % n] {
                return false;
            }
            outer /= n;
        }
        true
    }

    fn axis_pass(&mut self, data: &mut [Complex64], axis: usize, dir: Direction, prune: bool) {
        let n = self.lattice.points_per_dim();
        let dim = self.lattice.dim();
        let stride = n.pow((dim - 1 - axis) as u32);
        let outer_count = n.pow(axis as u32);
        let block = n * stride;
        let fft = match dir {
            Direction::Forward => Arc::clone(&self.forward),
            Direction::Inverse => Arc::clone(&self.inverse),
        };
        // A pruned inverse treats every entry outside the band as zero,
        // whatever the buffer holds there.
        let zero_oob = prune && dir == Direction::Inverse;
        for outer in 0..outer_count {
            if prune && !self.outer_retained(outer, axis) {
                continue;
            }
            let base = outer * block;
            if stride == 1 {
                let line = &mut data[base..base + n];
                if zero_oob {
                    for (z, &keep) in line.iter_mut().zip(&self.retained) {
                        if !keep {
                            *z = Complex64::default();
                        }
                    }
                }
                fft.process_with_scratch(line, &mut self.scratch);
                continue;
            }
            let mut inner0 = 0;
            while inner0 < stride {
                let width = BATCH.min(stride - inner0);
                let batch = &mut self.batch[..width * n];
                for k in 0..n {
                    if zero_oob && !self.retained[k] {
                        for line in batch.chunks_exact_mut(n) {
                            line[k] = Complex64::default();
                        }
                        continue;
                    }
                    let row = base + k * stride + inner0;
                    for (line, z) in batch.chunks_exact_mut(n).zip(&data[row..row + width]) {
                        line[k] = *z;
                    }
                }
                fft.process_with_scratch(batch, &mut self.scratch);
                for k in 0..n {
                    let row = base + k * stride + inner0;
                    for (line, z) in batch.chunks_exact(n).zip(&mut data[row..row + width]) {
                        *z = line[k];
                    }
                }
                inner0 += width;
            }
        }
    }
}

/// Direct `O(N²)` summation DFT with the same unitary convention. Test oracle
/// and reference for tiny lattices.
pub fn direct_dft(lattice: &Lattice, physical: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let len = lattice.len();
    let n = lattice.points_per_dim() as f64;
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = (len as f64).sqrt().recip();
    (0..len)
        .map(|k| {
            let mk = lattice.unravel(k);
            let mut acc = Complex64::default();
            for (x, &f) in physical.iter().enumerate() {
                let ix = lattice.unravel(x);
                let mut phase = 0.0;
                for a in 0..lattice.dim() {
                    phase += (mk[a] * ix[a]) as f64;
                }
                let theta = sign * 2.0 * std::f64::consts::PI * (phase / n).fract();
                acc += f * Complex64::from_polar(1.0, theta);
            }
            acc * scale
        })
        .collect()
}
