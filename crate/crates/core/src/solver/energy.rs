use super::params::PhysicalParams;
use super::reformulate::reformulate;
use super::state::State;
use crate::error::{Error, Result};
use crate::littlewood_paley::{dyadic_block, DyadicPartition};
use crate::spectral::{lambda_power, MatrixField, SpectralField};

use super::forcing::lambda_double_riesz;

/// Block-`q` energy quantities of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighFreqEnergy {
    pub q: i32,
    /// `f_q²`.
    pub f_sq: f64,
    /// `f̃_q²`.
    pub f_tilde_sq: f64,
    /// `E_q = 2^{(n/2-1)q} f_q`, carrying the sign of `f_q²` when the form is
    /// indefinite at this state.
    pub e_q: f64,
    /// `2^{(n/2)q}(‖Δ̇_q a‖ + ‖Δ̇_q F‖) + 2^{(n/2-1)q}‖Δ̇_q e‖`.
    pub reference: f64,
}

impl HighFreqEnergy {
    /// `E_q / reference`.
    pub fn ratio(&self) -> f64 {
        self.e_q / self.reference
    }
}

fn block_matrix(m: &MatrixField, q: i32, p: &DyadicPartition) -> MatrixField {
    MatrixField::new(m.components().iter().map(|c| dyadic_block(c, q, p, true)).collect()).expect("same shape")
}

fn lambda_matrix(m: &MatrixField) -> MatrixField {
    MatrixField::new(m.components().iter().map(|c| lambda_power(c, 1.0)).collect()).expect("same shape")
}

fn inner_matrix(x: &MatrixField, y: &MatrixField) -> f64 {
    x.components().iter().zip(y.components()).map(|(a, b)| a.inner(b)).sum()
}

/// Evaluates
///
/// ```text
/// f_q² = ‖e_q‖² + ν‖Λa_q‖² + μ‖ΛF_q‖² + (λ+μ)‖Λ⁻¹∇_i∇_j F_q^{ij}‖² - 2(Λa_q|d_q) + 2(ΛF_q|e_q)
/// f̃_q² = (μ-1)‖Λe_q‖² + (λ+μ-1)‖Λd_q‖² + ‖Λa_q‖² + ‖ΛF_q‖² - (a_q|Λd_q) + (ΛF_q|e_q)
/// ```
///
/// with `x_q = Δ̇_q x`, exactly in Fourier space.
pub fn high_freq_energy(
    state: &State,
    q: i32,
    params: &PhysicalParams,
    partition: &DyadicPartition,
) -> Result<HighFreqEnergy> {
    params.validate()?;
    if partition.lattice() != state.lattice() {
        return Err(Error::LatticeMismatch);
    }
    let n = state.dim() as f64;
    let r = reformulate(state);
    let aq = dyadic_block(&r.a, q, partition, true);
    let dq = dyadic_block(&r.d, q, partition, true);
    let eq = block_matrix(&r.e, q, partition);
    let fq = block_matrix(&state.f, q, partition);
    let la: SpectralField = lambda_power(&aq, 1.0);
    let ld = lambda_power(&dq, 1.0);
    let lf = lambda_matrix(&fq);
    let le = lambda_matrix(&eq);
    let ddf = lambda_double_riesz(&fq);
    let (mu, lambda, nu) = (params.mu, params.lambda, params.nu());

    let e2 = eq.l2_norm().powi(2);
    let la2 = la.l2_norm().powi(2);
    let lf2 = lf.l2_norm().powi(2);
    let lf_e = inner_matrix(&lf, &eq);
    let f_sq = e2 + nu * la2 + mu * lf2 + (lambda + mu) * ddf.l2_norm().powi(2) - 2.0 * la.inner(&dq) + 2.0 * lf_e;
    let f_tilde_sq = (mu - 1.0) * le.l2_norm().powi(2) + (lambda + mu - 1.0) * ld.l2_norm().powi(2) + la2 + lf2
        - aq.inner(&ld)
        + lf_e;
    let scale = 2f64.powf((n / 2.0 - 1.0) * q as f64);
    let e_q = scale * f_sq.signum() * f_sq.abs().sqrt();
    let reference = 2f64.powf(n / 2.0 * q as f64) * (aq.l2_norm() + fq.l2_norm()) + scale * eq.l2_norm();
    Ok(HighFreqEnergy {
        q,
        f_sq,
        f_tilde_sq,
        e_q,
        reference,
    })
}
