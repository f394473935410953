use num_complex::Complex64;
use rayon::prelude::*;

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::{FftEngine, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub homogeneous: bool,
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovSpec {
    pub fn homogeneous(s: f64, p: f64, r: f64) -> Self {
        Self {
            homogeneous: true,
            s,
            p,
            r,
        }
    }

    pub fn inhomogeneous(s: f64, p: f64, r: f64) -> Self {
        Self {
            homogeneous: false,
            s,
            p,
            r,
        }
    }

    fn validate(&self) -> Result<()> {
        check_exponent("p", self.p)?;
        check_exponent("r", self.r)
    }
}

/// Hybrid norm `Σ_{q≤R₀} 2^{q s_low}‖Δ̇_q u‖_{p_low} + Σ_{q>R₀} 2^{q s_high}‖Δ̇_q u‖_{p_high}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridSpec {
    pub s_low: f64,
    pub s_high: f64,
    pub threshold: i32,
    pub p_low: f64,
    pub p_high: f64,
}

impl HybridSpec {
    /// `L²`-based hybrid norm with the default threshold `R₀ = 0`.
    pub fn l2(s_low: f64, s_high: f64) -> Self {
        Self {
            s_low,
            s_high,
            threshold: 0,
            p_low: 2.0,
            p_high: 2.0,
        }
    }
}

fn check_exponent(name: &str, x: f64) -> Result<()> {
    if x >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent {name} = {x} must lie in [1, ∞]")))
    }
}

fn check_components(fields: &[&SpectralField], partition: &DyadicPartition) -> Result<()> {
    if fields.is_empty() {
        return Err(Error::InvalidParameter("no field components given".into()));
    }
    if fields.iter().any(|f| f.lattice() != partition.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    Ok(())
}

/// Single block `Δ_q f` (`q = -1` with `homogeneous = false` is `χ(D)`).
/// Blocks outside the range give the zero field.
pub fn dyadic_block(f: &SpectralField, q: i32, partition: &DyadicPartition, homogeneous: bool) -> SpectralField {
    let mut out = f.clone();
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= partition.weight(k, q, homogeneous);
    }
    out
}

/// `S_q f = Σ_{k ≤ q-1} Δ_k f`.
pub fn low_cutoff(f: &SpectralField, q: i32, partition: &DyadicPartition, homogeneous: bool) -> SpectralField {
    let mut out = f.clone();
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        let mut w = 0.0;
        partition.for_each_weight(k, homogeneous, |qq, wq| {
            if qq < q {
                w += wq;
            }
        });
        *c *= w;
    }
    out
}

/// `‖Δ_q u‖_{L^p}` for every block of the range, where `u` may have several
/// components combined through the pointwise Euclidean norm.
pub fn block_norms(
    fields: &[&SpectralField],
    p: f64,
    partition: &DyadicPartition,
    homogeneous: bool,
) -> Result<Vec<(i32, f64)>> {
    check_components(fields, partition)?;
    check_exponent("p", p)?;
    let blocks: Vec<i32> = partition.blocks(homogeneous).collect();
    let lattice = partition.lattice();
    if p == 2.0 {
        let q0 = *blocks.first().expect("non-empty range");
        let mut acc = vec![0.0; blocks.len()];
        for f in fields {
            for (k, c) in f.coeffs().iter().enumerate() {
                let e = c.norm_sqr();
                if e == 0.0 {
                    continue;
                }
                partition.for_each_weight(k, homogeneous, |q, w| {
                    acc[(q - q0) as usize] += w * w * e;
                });
            }
        }
        let vol = lattice.cell_volume();
        return Ok(blocks.iter().zip(acc).map(|(&q, a)| (q, (a * vol).sqrt())).collect());
    }
    if let Some(f) = fields.iter().find(|f| !f.is_hermitian()) {
        let _ = f;
        return Err(Error::NonHermitian { p });
    }
    let vol = lattice.cell_volume();
    blocks
        .par_iter()
        .map(|&q| {
            let mut engine = FftEngine::new(lattice);
            let mut pointwise = vec![0.0; lattice.len()];
            let mut spec = vec![Complex64::default(); lattice.len()];
            let mut phys = vec![0.0; lattice.len()];
            for f in fields {
                for (k, (s, c)) in spec.iter_mut().zip(f.coeffs()).enumerate() {
                    *s = c * partition.weight(k, q, homogeneous);
                }
                engine.inverse_real(&spec, &mut phys);
                for (a, x) in pointwise.iter_mut().zip(&phys) {
                    *a += x * x;
                }
            }
            let norm = if p.is_infinite() {
                pointwise.iter().fold(0.0f64, |m, &a| m.max(a.sqrt()))
            } else {
                let s: f64 = pointwise.iter().map(|&a| a.powf(0.5 * p)).sum();
                (s * vol).powf(1.0 / p)
            };
            Ok((q, norm))
        })
        .collect()
}

fn lr_sum(terms: impl Iterator<Item = f64>, r: f64) -> f64 {
    if r.is_infinite() {
        terms.fold(0.0, f64::max)
    } else if r == 1.0 {
        terms.sum()
    } else {
        terms.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `(Σ_q (2^{qs}‖Δ_q u‖_{L^p})^r)^{1/r}` for a possibly multi-component `u`.
pub fn besov_norm_multi(fields: &[&SpectralField], spec: &BesovSpec, partition: &DyadicPartition) -> Result<f64> {
    spec.validate()?;
    let norms = block_norms(fields, spec.p, partition, spec.homogeneous)?;
    Ok(lr_sum(
        norms.into_iter().map(|(q, n)| 2f64.powf(q as f64 * spec.s) * n),
        spec.r,
    ))
}

pub fn besov_norm(f: &SpectralField, spec: &BesovSpec, partition: &DyadicPartition) -> Result<f64> {
    besov_norm_multi(&[f], spec, partition)
}

pub fn hybrid_norm_multi(fields: &[&SpectralField], spec: &HybridSpec, partition: &DyadicPartition) -> Result<f64> {
    check_exponent("p_low", spec.p_low)?;
    check_exponent("p_high", spec.p_high)?;
    let low = block_norms(fields, spec.p_low, partition, true)?;
    let high = if spec.p_high == spec.p_low {
        low.clone()
    } else {
        block_norms(fields, spec.p_high, partition, true)?
    };
    let mut total = 0.0;
    for ((q, nl), (_, nh)) in low.into_iter().zip(high) {
        total += if q <= spec.threshold {
            2f64.powf(q as f64 * spec.s_low) * nl
        } else {
            2f64.powf(q as f64 * spec.s_high) * nh
        };
    }
    Ok(total)
}

pub fn hybrid_norm(f: &SpectralField, spec: &HybridSpec, partition: &DyadicPartition) -> Result<f64> {
    hybrid_norm_multi(&[f], spec, partition)
}

/// Chemin-Lerner norm `(Σ_q (2^{qs} (∫ ‖Δ_q u(t)‖_{L^p}^ρ dt)^{1/ρ})^r)^{1/r}`
/// with trapezoidal integration over the snapshot times; `time_exponent = ∞`
/// takes the blockwise supremum instead. Each snapshot is a list of
/// components.
pub fn chemin_lerner_norm_multi<C: AsRef<[SpectralField]>>(
    snapshots: &[C],
    times: &[f64],
    time_exponent: f64,
    spec: &BesovSpec,
    partition: &DyadicPartition,
) -> Result<f64> {
    spec.validate()?;
    check_exponent("time exponent", time_exponent)?;
    if snapshots.len() < 2 || snapshots.len() != times.len() {
        return Err(Error::InvalidParameter(format!(
            "need at least two snapshots with matching times (got {} snapshots, {} times)",
            snapshots.len(),
            times.len()
        )));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("times must be strictly increasing".into()));
    }
    let per_time: Vec<Vec<(i32, f64)>> = snapshots
        .iter()
        .map(|snap| {
            let comps: Vec<&SpectralField> = snap.as_ref().iter().collect();
            block_norms(&comps, spec.p, partition, spec.homogeneous)
        })
        .collect::<Result<_>>()?;
    let nblocks = per_time[0].len();
    let mut terms = Vec::with_capacity(nblocks);
    for b in 0..nblocks {
        let q = per_time[0][b].0;
        let series = per_time.iter().map(|row| row[b].1);
        let time_norm = if time_exponent.is_infinite() {
            series.fold(0.0, f64::max)
        } else {
            let vals: Vec<f64> = series.map(|x| x.powf(time_exponent)).collect();
            let integral: f64 = times
                .windows(2)
                .zip(vals.windows(2))
                .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
                .sum();
            integral.powf(1.0 / time_exponent)
        };
        terms.push(2f64.powf(q as f64 * spec.s) * time_norm);
    }
    Ok(lr_sum(terms.into_iter(), spec.r))
}

pub fn chemin_lerner_norm(
    snapshots: &[SpectralField],
    times: &[f64],
    time_exponent: f64,
    spec: &BesovSpec,
    partition: &DyadicPartition,
) -> Result<f64> {
    let wrapped: Vec<[SpectralField; 1]> = snapshots.iter().map(|s| [s.clone()]).collect();
    chemin_lerner_norm_multi(&wrapped, times, time_exponent, spec, partition)
}
