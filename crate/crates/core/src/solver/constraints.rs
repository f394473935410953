use super::init::det;
use super::state::State;
use crate::spectral::{derivative, dft_forward, dft_inverse};

/// Max-norm residuals of the four compatibility identities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConstraintResiduals {
    /// `ρ det U - 1`.
    pub det: f64,
    /// `div(ρ Uᵀ)`, i.e. `∂_j(ρ U^{ji})`.
    pub div: f64,
    /// `div(Uᵀ / det U)`.
    pub div_u_over_det: f64,
    /// `U^{lk} ∂_l U^{ij} - U^{lj} ∂_l U^{ik}`.
    pub curl: f64,
}

impl ConstraintResiduals {
    pub fn max(&self) -> f64 {
        self.det.max(self.div).max(self.div_u_over_det).max(self.curl)
    }
}

pub fn check_constraints(state: &State) -> ConstraintResiduals {
    let lattice = *state.lattice();
    let dim = lattice.dim();
    let len = lattice.len();
    let rho: Vec<f64> = dft_inverse(&state.a).into_iter().map(|a| 1.0 + a).collect();
    let u: Vec<Vec<f64>> = (0..dim * dim)
        .map(|c| {
            let mut x = dft_inverse(&state.f.components()[c]);
            if c % (dim + 1) == 0 {
                x.iter_mut().for_each(|y| *y += 1.0);
            }
            x
        })
        .collect();
    let mut detu = vec![0.0; len];
    let mut res_det: f64 = 0.0;
    for x in 0..len {
        let mut m = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                m[i][j] = u[i * dim + j][x];
            }
        }
        detu[x] = det(&m, dim);
        res_det = res_det.max((rho[x] * detu[x] - 1.0).abs());
    }

    // Row divergence ∂_j(w U^{ji}) of a weighted transpose.
    let weighted_div = |weight: &dyn Fn(usize) -> f64| -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            let mut acc: Option<crate::spectral::SpectralField> = None;
            for j in 0..dim {
                let prod: Vec<f64> = (0..len).map(|x| weight(x) * u[j * dim + i][x]).collect();
                let d = derivative(&dft_forward(&prod, &lattice).expect("lattice length"), j);
                match acc.as_mut() {
                    Some(s) => s.axpy(1.0, &d),
                    None => acc = Some(d),
                }
            }
            let phys = dft_inverse(&acc.expect("dim ≥ 2"));
            worst = phys.iter().fold(worst, |m, x| m.max(x.abs()));
        }
        worst
    };
    let res_div = weighted_div(&|x| rho[x]);
    let res_div_det = weighted_div(&|x| 1.0 / detu[x]);

    // ∂_l U^{ij} = ∂_l F^{ij}, stored at [(i·dim + j)·dim + l].
    let mut grad = Vec::with_capacity(dim * dim * dim);
    for c in 0..dim * dim {
        for l in 0..dim {
            grad.push(dft_inverse(&derivative(&state.f.components()[c], l)));
        }
    }
    let g = |i: usize, j: usize, l: usize| &grad[(i * dim + j) * dim + l];
    let mut res_curl: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            for k in (j + 1)..dim {
                for x in 0..len {
                    let mut s = 0.0;
                    for l in 0..dim {
                        s += u[l * dim + k][x] * g(i, j, l)[x] - u[l * dim + j][x] * g(i, k, l)[x];
                    }
                    res_curl = res_curl.max(s.abs());
                }
            }
        }
    }
    ConstraintResiduals {
        det: res_det,
        div: res_div,
        div_u_over_det: res_div_det,
        curl: res_curl,
    }
}
