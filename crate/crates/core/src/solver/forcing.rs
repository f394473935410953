//! Nonlinear terms of the frequency-localized equations.
//!
//! For a state satisfying the compatibility constraints the reformulated
//! variables obey
//!
//! ```text
//! ∂_t a + Λd                     = L - v·∇a
//! ∂_t d - νΔd - 2Λa              = G - v·∇d
//! ∂_t 𝓔 + 2Λd                    = J - v·∇𝓔
//! ∂_t d - νΔd - Λ𝓔               = K - v·∇d
//! ∂_t (Fᵀ-F) + ΛΩ                = I - v·∇(Fᵀ-F)
//! ∂_t Ω - μΔΩ - Λ(Fᵀ-F)          = H - v·∇Ω
//! ∂_t a + v·∇a + Λd              = G₁
//! ∂_t e + v·∇e - μΔe - (λ+μ)∇∇d + Λ⁻¹∇∇a + ΛF = G₂
//! ∂_t F + v·∇F - Λe              = G₃
//! div F = -∇a + G₀
//! ```

use super::params::PhysicalParams;
use super::reformulate::{double_riesz, reformulate};
use super::state::State;
use crate::error::{Error, Result};
use crate::spectral::{
    dealias, derivative, dft_forward, dft_inverse, lambda_power, leray_curl, leray_div, riesz, Lattice, MatrixField,
    SpectralField, VectorField,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ForcingTerms {
    pub l: SpectralField,
    pub g: SpectralField,
    pub h: MatrixField,
    pub i: MatrixField,
    pub j: SpectralField,
    pub k: SpectralField,
    /// The elastic curl correction `𝒲` inside `H`.
    pub w: MatrixField,
    pub g0: VectorField,
    pub g1: SpectralField,
    pub g2: MatrixField,
    pub g3: MatrixField,
}

impl ForcingTerms {
    /// `(name, L² norm)` for every term.
    pub fn norms(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("L", self.l.l2_norm()),
            ("G", self.g.l2_norm()),
            ("H", self.h.l2_norm()),
            ("I", self.i.l2_norm()),
            ("J", self.j.l2_norm()),
            ("K", self.k.l2_norm()),
            ("W", self.w.l2_norm()),
            ("G0", self.g0.l2_norm()),
            ("G1", self.g1.l2_norm()),
            ("G2", self.g2.l2_norm()),
            ("G3", self.g3.l2_norm()),
        ]
    }
}

/// Physical-space values with dealiased products.
struct Grid {
    lattice: Lattice,
}

impl Grid {
    fn phys(&self, f: &SpectralField) -> Vec<f64> {
        dft_inverse(f)
    }

    fn spec(&self, x: &[f64]) -> SpectralField {
        dealias(&dft_forward(x, &self.lattice).expect("lattice length"))
    }

    /// `Σ_k v^k ∂_k g`.
    fn advect(&self, v: &[Vec<f64>], g: &SpectralField) -> SpectralField {
        let dim = self.lattice.dim();
        let mut acc = vec![0.0; self.lattice.len()];
        for k in 0..dim {
            let dg = self.phys(&derivative(g, k));
            for x in 0..acc.len() {
                acc[x] += v[k][x] * dg[x];
            }
        }
        self.spec(&acc)
    }
}

fn vector(comps: Vec<SpectralField>) -> VectorField {
    VectorField::new(comps).expect("dim components")
}

fn matrix(comps: Vec<SpectralField>) -> MatrixField {
    MatrixField::new(comps).expect("dim² components")
}

/// `Λ⁻¹ div w`.
fn riesz_div(w: &[SpectralField]) -> SpectralField {
    leray_div(&vector(w.to_vec()))
}

pub fn forcing_terms(state: &State, params: &PhysicalParams) -> Result<ForcingTerms> {
    state.validate()?;
    params.validate()?;
    let lattice = *state.lattice();
    let dim = lattice.dim();
    let len = lattice.len();
    let grid = Grid { lattice };
    let r = reformulate(state);

    let a = grid.phys(&state.a);
    if let Some((x, &ai)) = a.iter().enumerate().find(|(_, &ai)| !(1.0 + ai > 0.0)) {
        return Err(Error::BlowUp {
            t: f64::NAN,
            reason: format!("density {} at grid point {x}", 1.0 + ai),
        });
    }
    let v: Vec<Vec<f64>> = state.v.components().iter().map(|c| grid.phys(c)).collect();
    let f: Vec<Vec<f64>> = state.f.components().iter().map(|c| grid.phys(c)).collect();
    let fp = |i: usize, j: usize| &f[i * dim + j];
    // ∂_l v^i at [i·dim + l], ∂_l F^{ij} at [(i·dim + j)·dim + l].
    let gv: Vec<Vec<f64>> = (0..dim * dim)
        .map(|c| grid.phys(&derivative(state.v.get(c / dim), c % dim)))
        .collect();
    let gf: Vec<Vec<f64>> = (0..dim * dim * dim)
        .map(|c| grid.phys(&derivative(&state.f.components()[c / dim], c % dim)))
        .collect();
    let ga: Vec<Vec<f64>> = (0..dim).map(|l| grid.phys(&derivative(&state.a, l))).collect();
    let visc: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut s = SpectralField::zeros(&lattice);
            for j in 0..dim {
                let dij = derivative(&derivative(state.v.get(j), j), i);
                s.axpy(params.lambda + params.mu, &dij);
                let djj = derivative(&derivative(state.v.get(i), j), j);
                s.axpy(params.mu, &djj);
            }
            grid.phys(&s)
        })
        .collect();
    let ka: Vec<f64> = a.iter().map(|&x| params.k_of(x)).collect();
    let ca: Vec<f64> = a.iter().map(|&x| PhysicalParams::c_of(x)).collect();
    let divv: Vec<f64> = (0..len).map(|x| (0..dim).map(|i| gv[i * dim + i][x]).sum()).collect();

    // Pieces of the momentum equation, all physical:
    // adv^i = v·∇v^i, ffg^i = F^{lk}∂_l F^{ik}, press^i = K(a)∂_i a, cav^i = C(a)(𝒜v)^i.
    let mut adv = vec![vec![0.0; len]; dim];
    let mut ffg = vec![vec![0.0; len]; dim];
    let mut press = vec![vec![0.0; len]; dim];
    let mut cav = vec![vec![0.0; len]; dim];
    for i in 0..dim {
        for x in 0..len {
            let mut s = 0.0;
            let mut e = 0.0;
            for l in 0..dim {
                s += v[l][x] * gv[i * dim + l][x];
                for k in 0..dim {
                    e += fp(l, k)[x] * gf[(i * dim + k) * dim + l][x];
                }
            }
            adv[i][x] = s;
            ffg[i][x] = e;
            press[i][x] = ka[x] * ga[i][x];
            cav[i][x] = ca[x] * visc[i][x];
        }
    }
    // N = -v·∇v + F∇F - K(a)∇a - C(a)𝒜v.
    let n_vec: Vec<SpectralField> = (0..dim)
        .map(|i| {
            let x: Vec<f64> = (0..len)
                .map(|x| -adv[i][x] + ffg[i][x] - press[i][x] - cav[i][x])
                .collect();
            grid.spec(&x)
        })
        .collect();
    // (div(aF))^k = ∂_i(a F^{ik}).
    let af: Vec<SpectralField> = (0..dim * dim)
        .map(|c| {
            let x: Vec<f64> = (0..len).map(|x| a[x] * f[c][x]).collect();
            grid.spec(&x)
        })
        .collect();
    let div_af: Vec<SpectralField> = (0..dim)
        .map(|k| {
            let mut s = SpectralField::zeros(&lattice);
            for i in 0..dim {
                s.axpy(1.0, &derivative(&af[i * dim + k], i));
            }
            s
        })
        .collect();

    let l_term = grid.spec(&(0..len).map(|x| -a[x] * divv[x]).collect::<Vec<_>>());
    let v_grad_d = grid.advect(&v, &r.d);
    let combine = |sign: f64| -> SpectralField {
        let w: Vec<SpectralField> = (0..dim)
            .map(|k| {
                let mut s = n_vec[k].clone();
                s.axpy(sign, &div_af[k]);
                s
            })
            .collect();
        let mut out = v_grad_d.clone();
        out.axpy(1.0, &riesz_div(&w));
        out
    };
    let g_term = combine(-1.0);
    let k_term = combine(1.0);

    // Q^{ijk} = F^{lj}∂_l F^{ik} - F^{lk}∂_l F^{ij}.
    let q_of = |i: usize, j: usize, k: usize| -> Vec<f64> {
        (0..len)
            .map(|x| {
                let mut s = 0.0;
                for l in 0..dim {
                    s += fp(l, j)[x] * gf[(i * dim + k) * dim + l][x] - fp(l, k)[x] * gf[(i * dim + j) * dim + l][x];
                }
                s
            })
            .collect()
    };
    // Λ⁻¹∂_k Q^{ijk} for every (i, j).
    let mut lq = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut s = SpectralField::zeros(&lattice);
            for k in 0..dim {
                s.axpy(1.0, &riesz(&grid.spec(&q_of(i, j, k)), k));
            }
            lq.push(s);
        }
    }
    let w_term = matrix(
        (0..dim * dim)
            .map(|c| {
                let (i, j) = (c / dim, c % dim);
                let mut s = lq[j * dim + i].clone();
                s.axpy(-1.0, &lq[c]);
                s
            })
            .collect(),
    );
    let mut h_term = leray_curl(&vector(n_vec.clone()));
    h_term.axpy(1.0, &w_term);
    for c in 0..dim * dim {
        let adv_om = grid.advect(&v, &r.omega.components()[c]);
        h_term.components_mut()[c].axpy(1.0, &adv_om);
    }

    // M^{ij} = (∇v F)^{ij} = ∂_k v^i F^{kj}.
    let m_phys: Vec<Vec<f64>> = (0..dim * dim)
        .map(|c| {
            let (i, j) = (c / dim, c % dim);
            (0..len)
                .map(|x| (0..dim).map(|k| gv[i * dim + k][x] * fp(k, j)[x]).sum())
                .collect()
        })
        .collect();
    let g3 = matrix(m_phys.iter().map(|m| grid.spec(m)).collect());
    let mut i_term = g3.transpose();
    i_term.axpy(-1.0, &g3);

    // J = -[R_iR_j, v^k]∂_k S^{ij} + R_iR_j(M^{ij} + M^{ji}), S = F + Fᵀ.
    let mut s_mat = state.f.transpose();
    s_mat.axpy(1.0, &state.f);
    let adv_s = matrix(s_mat.components().iter().map(|c| grid.advect(&v, c)).collect());
    let mut commutator = double_riesz(&adv_s);
    commutator.axpy(-1.0, &grid.advect(&v, &r.ecal));
    let mut msym = g3.transpose();
    msym.axpy(1.0, &g3);
    let mut j_term = double_riesz(&msym);
    j_term.axpy(-1.0, &commutator);

    let g0 = vector(div_af.iter().map(|d| d.scaled(-1.0)).collect());
    let g1 = l_term.clone();

    // G₂^{ij} = v·∇e^{ij} - Λ⁻¹∂_j[v·∇v^i + C(a)(𝒜v)^i + K(a)∂_i a - F^{lk}∂_l F^{ik}] - Λ⁻¹∂_k Q^{ijk}.
    let bracket: Vec<SpectralField> = (0..dim)
        .map(|i| {
            let x: Vec<f64> = (0..len)
                .map(|x| adv[i][x] + cav[i][x] + press[i][x] - ffg[i][x])
                .collect();
            grid.spec(&x)
        })
        .collect();
    let g2 = matrix(
        (0..dim * dim)
            .map(|c| {
                let (i, j) = (c / dim, c % dim);
                let mut s = grid.advect(&v, &r.e.components()[c]);
                s.axpy(-1.0, &riesz(&bracket[i], j));
                s.axpy(-1.0, &lq[c]);
                s
            })
            .collect(),
    );

    Ok(ForcingTerms {
        l: l_term,
        g: g_term,
        h: h_term,
        i: i_term,
        j: j_term,
        k: k_term,
        w: w_term,
        g0,
        g1,
        g2,
        g3,
    })
}

/// `Λ⁻¹ ∇_i ∇_j M^{ij}` summed, i.e. `Λ Σ R_i R_j M^{ij}`.
pub fn lambda_double_riesz(m: &MatrixField) -> SpectralField {
    lambda_power(&double_riesz(m), 1.0)
}
