use crate::error::{Error, Result};
use crate::spectral::{dealias, dft_forward, dft_inverse, Lattice, MatrixField, Snapshot, SpectralField, VectorField};

/// Perturbation variables `a = ρ - 1`, `v`, `F = U - I`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub a: SpectralField,
    pub v: VectorField,
    pub f: MatrixField,
}

impl State {
    /// Equilibrium `ρ = 1`, `v = 0`, `U = I`.
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            a: SpectralField::zeros(lattice),
            v: VectorField::zeros(lattice),
            f: MatrixField::zeros(lattice),
        }
    }

    pub fn new(a: SpectralField, v: VectorField, f: MatrixField) -> Result<Self> {
        let s = Self { a, v, f };
        s.validate()?;
        Ok(s)
    }

    pub fn lattice(&self) -> &Lattice {
        self.a.lattice()
    }

    pub fn dim(&self) -> usize {
        self.lattice().dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.v.lattice() != self.a.lattice() || self.f.lattice() != self.a.lattice() {
            return Err(Error::LatticeMismatch);
        }
        for f in self.fields() {
            if !f.is_hermitian() {
                return Err(Error::InvalidParameter("state fields must be real (Hermitian)".into()));
            }
        }
        Ok(())
    }

    /// All scalar components in the order `a, v¹.., F¹¹, F¹², ..`.
    pub fn fields(&self) -> impl Iterator<Item = &SpectralField> {
        std::iter::once(&self.a)
            .chain(self.v.components())
            .chain(self.f.components())
    }

    pub fn fields_mut(&mut self) -> impl Iterator<Item = &mut SpectralField> {
        std::iter::once(&mut self.a)
            .chain(self.v.components_mut().iter_mut())
            .chain(self.f.components_mut().iter_mut())
    }

    /// Names matching [`State::fields`]: `a`, `v1`.., `F11`...
    pub fn field_names(dim: usize) -> Vec<String> {
        let mut names = vec!["a".to_string()];
        names.extend((1..=dim).map(|i| format!("v{i}")));
        for i in 1..=dim {
            for j in 1..=dim {
                names.push(format!("F{i}{j}"));
            }
        }
        names
    }

    pub fn scale(&mut self, s: f64) {
        for f in self.fields_mut() {
            f.scale(s);
        }
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (f, g) in self.fields_mut().zip(other.fields()) {
            f.axpy(s, g);
        }
    }

    pub fn dealiased(&self) -> Self {
        Self {
            a: dealias(&self.a),
            v: VectorField::new(self.v.components().iter().map(dealias).collect()).expect("same lattice"),
            f: MatrixField::new(self.f.components().iter().map(dealias).collect()).expect("same lattice"),
        }
    }

    /// `‖a‖² + ‖v‖² + ‖F‖²` in `L²`, square-rooted.
    pub fn l2_norm(&self) -> f64 {
        self.fields().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.fields().all(|f| f.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    /// `∫ ρ dx`.
    pub fn mass(&self) -> f64 {
        self.lattice().volume() * (1.0 + self.a.mean())
    }

    /// Pointwise minimum of `ρ = 1 + a`.
    pub fn min_density(&self) -> f64 {
        dft_inverse(&self.a).into_iter().fold(f64::INFINITY, |m, x| m.min(1.0 + x))
    }

    /// Physical-space snapshot with fields named by [`State::field_names`].
    pub fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            lattice: *self.lattice(),
            fields: Self::field_names(self.dim())
                .into_iter()
                .zip(self.fields().map(dft_inverse))
                .collect(),
        }
    }

    /// Inverse of [`State::to_snapshot`]; every field must be present.
    pub fn from_snapshot(snapshot: &Snapshot) -> Result<Self> {
        let lattice = snapshot.lattice;
        let fields = Self::field_names(lattice.dim())
            .iter()
            .map(|name| {
                let data = snapshot
                    .field(name)
                    .ok_or_else(|| Error::Format(format!("snapshot has no field {name}")))?;
                dft_forward(data, &lattice)
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = lattice.dim();
        Self::new(
            fields[0].clone(),
            VectorField::new(fields[1..1 + dim].to_vec())?,
            MatrixField::new(fields[1 + dim..].to_vec())?,
        )
    }
}
