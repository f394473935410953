use std::f64::consts::PI;

use rayon::prelude::*;

use super::matrix::{green_hat, GreenParams};
use super::quadrature::{integrate, QuadratureResult};
use crate::error::{Error, Result};
use crate::littlewood_paley::{phi, DyadicPartition};
use crate::spectral::SpectralField;

/// Per-band `L²` norms of `𝒢(t) Δ̇_q U₀` on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct BandDecay {
    pub times: Vec<f64>,
    pub blocks: Vec<i32>,
    /// `per_band[i][b]`: time `times[i]`, block `blocks[b]`.
    pub per_band: Vec<Vec<f64>>,
    /// `Σ_{q ≤ R} ‖𝒢(t) Δ̇_q U₀‖`.
    pub low_sum: Vec<f64>,
    /// `‖𝒢(t) U₀‖`.
    pub total: Vec<f64>,
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be nonnegative and increasing".into()));
    }
    Ok(())
}

pub fn band_decay_curve(
    params: &GreenParams,
    c0: &SpectralField,
    u0: &SpectralField,
    times: &[f64],
    partition: &DyadicPartition,
    r_max: i32,
) -> Result<BandDecay> {
    c0.check_same_lattice(u0)?;
    if c0.lattice() != partition.lattice() {
        return Err(Error::LatticeMismatch);
    }
    check_times(times)?;
    let lattice = *c0.lattice();
    let blocks: Vec<i32> = partition.blocks(true).collect();
    let q0 = blocks[0];
    let vol = lattice.cell_volume();
    let rows: Vec<(Vec<f64>, f64)> = times
        .par_iter()
        .map(|&t| {
            let mut acc = vec![0.0; blocks.len()];
            let mut total = 0.0;
            let mut cache: Option<(f64, super::GreenMatrix)> = None;
            for k in 0..lattice.len() {
                let x = [c0.coeffs()[k], u0.coeffs()[k]];
                if x[0].norm_sqr() + x[1].norm_sqr() == 0.0 {
                    continue;
                }
                let r = lattice.frequency_norm(k);
                let g = match cache {
                    Some((rr, g)) if rr == r => g,
                    _ => {
                        let g = green_hat(params, r, t);
                        cache = Some((r, g));
                        g
                    }
                };
                let [y0, y1] = g.apply(x);
                let e = y0.norm_sqr() + y1.norm_sqr();
                total += e;
                partition.for_each_weight(k, true, |q, w| acc[(q - q0) as usize] += w * w * e);
            }
            (acc.into_iter().map(|a| (a * vol).sqrt()).collect(), (total * vol).sqrt())
        })
        .collect();
    let mut per_band = Vec::with_capacity(rows.len());
    let mut low_sum = Vec::with_capacity(rows.len());
    let mut total = Vec::with_capacity(rows.len());
    for (row, tot) in rows {
        low_sum.push(
            blocks
                .iter()
                .zip(&row)
                .filter(|(q, _)| **q <= r_max)
                .map(|(_, v)| v)
                .sum(),
        );
        per_band.push(row);
        total.push(tot);
    }
    Ok(BandDecay {
        times: times.to_vec(),
        blocks,
        per_band,
        low_sum,
        total,
    })
}

/// Surface area of the unit sphere in `ℝ^dim` (`dim` ∈ {1, 2, 3}).
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Options for the radial quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    pub r_cut: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for RadialOptions {
    fn default() -> Self {
        Self {
            r_cut: 12.0,
            rel_tol: 1e-9,
            max_intervals: 200_000,
        }
    }
}

fn radial_breakpoints(params: &GreenParams, t: f64, r_lo: f64, r_hi: f64) -> Vec<f64> {
    let mut pts = vec![r_lo, r_hi];
    let scale = 1.0 / (params.kappa * t + 1.0).sqrt();
    for j in -6..=12 {
        pts.push(scale * 2f64.powi(j));
    }
    pts.push(params.degenerate_radius());
    pts.retain(|&p| p >= r_lo && p <= r_hi);
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1e-300));
    pts
}

/// `‖𝒢(t) U₀‖²_{L²} = |S^{dim-1}| ∫ |Ĝ(r,t) p(r)|² r^{dim-1} dr` over
/// `[r_lo, r_hi]` for a radial profile `p` (Plancherel with the unitary
/// continuum transform).
pub fn radial_norm_squared<P>(
    params: &GreenParams,
    profile: &P,
    dim: usize,
    t: f64,
    r_lo: f64,
    r_hi: f64,
    opts: &RadialOptions,
) -> Result<QuadratureResult>
where
    P: Fn(f64) -> [f64; 2] + Sync,
{
    if !(2..=3).contains(&dim) {
        return Err(Error::InvalidParameter(format!("dimension must be 2 or 3, got {dim}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let area = sphere_area(dim);
    let integrand = |r: f64| {
        let p = profile(r);
        let g = green_hat(params, r, t).entries;
        let y0 = g[0][0] * p[0] + g[0][1] * p[1];
        let y1 = g[1][0] * p[0] + g[1][1] * p[1];
        (y0 * y0 + y1 * y1) * r.powi(dim as i32 - 1)
    };
    let pts = radial_breakpoints(params, t, r_lo, r_hi);
    let res = integrate(integrand, &pts, opts.rel_tol, opts.max_intervals)?;
    Ok(QuadratureResult {
        value: area * res.value,
        error: area * res.error,
        intervals: res.intervals,
    })
}

/// `‖𝒢(t) U₀‖_{L²}` for radial data `Û₀(ξ) = profile(|ξ|)`, integrated over
/// `(0, r_cut]` with adaptive Gauss-Kronrod quadrature.
pub fn radial_decay_quadrature<P>(
    params: &GreenParams,
    profile: &P,
    dim: usize,
    t: f64,
    opts: &RadialOptions,
) -> Result<f64>
where
    P: Fn(f64) -> [f64; 2] + Sync,
{
    let res = radial_norm_squared(params, profile, dim, t, 0.0, opts.r_cut, opts)?;
    Ok(res.value.max(0.0).sqrt())
}

/// Per-band continuum norms `‖𝒢(t) Δ̇_q U₀‖_{L²}` for radial data, blocks
/// `q_lo..=q_hi`.
pub fn radial_band_norms<P>(
    params: &GreenParams,
    profile: &P,
    dim: usize,
    t: f64,
    q_lo: i32,
    q_hi: i32,
    opts: &RadialOptions,
) -> Result<Vec<(i32, f64)>>
where
    P: Fn(f64) -> [f64; 2] + Sync,
{
    (q_lo..=q_hi)
        .map(|q| {
            let s = 2f64.powi(q);
            let w = |r: f64| {
                let f = phi(r / s);
                let p = profile(r);
                [f * p[0], f * p[1]]
            };
            let lo = 0.75 * s;
            let hi = (8.0 / 3.0 * s).min(opts.r_cut.max(lo * 1.0001));
            let res = radial_norm_squared(params, &w, dim, t, lo, hi, opts)?;
            Ok((q, res.value.max(0.0).sqrt()))
        })
        .collect()
}

/// Result of [`pointwise_bound_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFit {
    pub theta: f64,
    pub worst_xi: f64,
    pub worst_t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFitOptions {
    pub constant: f64,
    pub t_max: f64,
    pub xi_points: usize,
    pub t_points: usize,
}

impl Default for BoundFitOptions {
    fn default() -> Self {
        Self {
            constant: 2.0,
            t_max: 100.0,
            xi_points: 200,
            t_points: 200,
        }
    }
}

/// Largest `θ` with `max_{ij} |Ĝ_{ij}(ξ,t)| ≤ C e^{-θ|ξ|²t}` on the uniform
/// grid `|ξ| = R i / n_ξ`, `t = T j / n_t` (`i, j ≥ 1`; `t = 0` holds trivially
/// since `Ĝ = I` and `C ≥ 1`).
pub fn pointwise_bound_fit(params: &GreenParams, r: f64, opts: &BoundFitOptions) -> Result<BoundFit> {
    if !(r > 0.0) || !(opts.t_max > 0.0) || opts.xi_points == 0 || opts.t_points == 0 {
        return Err(Error::InvalidParameter(
            "bound fit needs R > 0, T_max > 0 and nonempty grids".into(),
        ));
    }
    let c = opts.constant;
    let best = (1..=opts.xi_points)
        .into_par_iter()
        .map(|i| {
            let xi = r * i as f64 / opts.xi_points as f64;
            let mut best = (f64::INFINITY, xi, 0.0, 0.0);
            for j in 1..=opts.t_points {
                let t = opts.t_max * j as f64 / opts.t_points as f64;
                let m = green_hat(params, xi, t).max_abs();
                let theta = if m == 0.0 {
                    f64::INFINITY
                } else {
                    (c / m).ln() / (xi * xi * t)
                };
                if theta < best.0 {
                    best = (theta, xi, t, m);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, 0.0, 0.0, 0.0),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    if !(best.0 > 0.0) || !best.0.is_finite() {
        return Err(Error::NoDecayRate {
            xi: best.1,
            t: best.2,
            entry: best.3,
        });
    }
    Ok(BoundFit {
        theta: best.0,
        worst_xi: best.1,
        worst_t: best.2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumBoundRow {
    pub t: f64,
    pub s: f64,
    pub i: f64,
    pub ii: f64,
    pub iii: f64,
    /// Split index `⌊log₄((20/3) t θ)⌋`.
    pub k_star: i64,
}

/// One term `e^{-(2/9)4^{-k} tθ} (1 - e^{-(20/3)4^{-k} tθ})^{1/2}` of the
/// low-frequency sum, written in `k = -q`.
pub fn sum_bound_term(k: i64, t_theta: f64) -> f64 {
    let x = 0.25f64.powi(k as i32) * t_theta;
    (-2.0 / 9.0 * x).exp() * (-(-20.0 / 3.0 * x).exp_m1()).sqrt()
}

/// Evaluates `Σ_{q ≤ R}` of the low-frequency terms split into
/// `I` (`k ∈ [-R, 0]`), `II` (`k ∈ [1, K*]`) and `III` (`k > max(K*, 0)`),
/// with `K* = ⌊log₄((20/3) t θ)⌋`. `III` is summed until the terms stop
/// contributing in double precision.
pub fn sum_bound_scan(theta: f64, r: i64, times: &[f64]) -> Result<Vec<SumBoundRow>> {
    if !(theta > 0.0) {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    if times.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter("times must be positive".into()));
    }
    Ok(times
        .iter()
        .map(|&t| {
            let tt = t * theta;
            let k_star = (20.0 / 3.0 * tt).log(4.0).floor() as i64;
            let i: f64 = (-r..=0).map(|k| sum_bound_term(k, tt)).sum();
            let ii: f64 = (1..=k_star.max(0)).map(|k| sum_bound_term(k, tt)).sum();
            let mut iii = 0.0;
            let mut k = k_star.max(0) + 1;
            loop {
                let term = sum_bound_term(k, tt);
                iii += term;
                // Terms beyond K* decay at least like 2^{-k}.
                if term <= 1e-18 * (i + ii + iii) || term == 0.0 || k > k_star.max(0) + 4000 {
                    break;
                }
                k += 1;
            }
            SumBoundRow {
                t,
                s: i + ii + iii,
                i,
                ii,
                iii,
                k_star,
            }
        })
        .collect())
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
