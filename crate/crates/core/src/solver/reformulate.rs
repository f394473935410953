use super::state::State;
use crate::spectral::{leray_curl, leray_div, riesz, MatrixField, SpectralField, VectorField};

/// Frequency-localized variables of the perturbation state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReformulatedState {
    pub a: SpectralField,
    /// `d = Λ⁻¹ div v`.
    pub d: SpectralField,
    /// `Ω = Λ⁻¹ curl v`, antisymmetric.
    pub omega: MatrixField,
    /// `𝓔 = Σ_{ij} Λ⁻¹∂_i Λ⁻¹∂_j (F^{ij} + F^{ji})`.
    pub ecal: SpectralField,
    /// `Fᵀ - F`, antisymmetric.
    pub ftf: MatrixField,
    /// `e^{ij} = Λ⁻¹ ∂_j v^i`.
    pub e: MatrixField,
}

/// `Σ_{ij} Λ⁻¹∂_i Λ⁻¹∂_j M^{ij}`.
pub fn double_riesz(m: &MatrixField) -> SpectralField {
    let dim = m.dim();
    let mut out = SpectralField::zeros(m.lattice());
    for i in 0..dim {
        for j in 0..dim {
            out.axpy(1.0, &riesz(&riesz(m.get(i, j), j), i));
        }
    }
    out
}

/// `e^{ij} = Λ⁻¹ ∂_j v^i`.
pub fn riesz_gradient(v: &VectorField) -> MatrixField {
    let dim = v.dim();
    let mut comps = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            comps.push(riesz(v.get(i), j));
        }
    }
    MatrixField::new(comps).expect("dim² components")
}

pub fn reformulate(state: &State) -> ReformulatedState {
    let ft = state.f.transpose();
    let mut ftf = ft.clone();
    ftf.axpy(-1.0, &state.f);
    let mut sym = ft;
    sym.axpy(1.0, &state.f);
    ReformulatedState {
        a: state.a.clone(),
        d: leray_div(&state.v),
        omega: leray_curl(&state.v),
        ecal: double_riesz(&sym),
        ftf,
        e: riesz_gradient(&state.v),
    }
}
