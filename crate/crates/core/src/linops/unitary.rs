use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{ComplexVector, HermitianOperator};
use crate::error::{contract, Result};

type ApplyFn = dyn Fn(&ComplexVector) -> Result<ComplexVector> + Send + Sync;

#[derive(Clone)]
enum Repr {
    Dense(DMatrix<Complex64>),
    Custom(Arc<ApplyFn>),
}

/// A norm-preserving linear map, either a materialized matrix or an
/// opaque step function (e.g. a split-step propagator).
#[derive(Clone)]
pub struct UnitaryMap {
    dim: usize,
    label: String,
    repr: Repr,
}

impl fmt::Debug for UnitaryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.repr {
            Repr::Dense(_) => "dense",
            Repr::Custom(_) => "custom",
        };
        f.debug_struct("UnitaryMap")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("kind", &kind)
            .finish()
    }
}

impl UnitaryMap {
    pub fn from_matrix(matrix: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return contract("unitary matrix must be square with dim ≥ 1");
        }
        Ok(Self {
            dim: matrix.nrows(),
            label: label.into(),
            repr: Repr::Dense(matrix),
        })
    }

    /// Wrap a step function. The caller vouches for linearity and norm
    /// preservation on the states it will be applied to.
    pub fn from_fn<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&ComplexVector) -> Result<ComplexVector> + Send + Sync + 'static,
    {
        Self {
            dim,
            label: label.into(),
            repr: Repr::Custom(Arc::new(f)),
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::identity(dim, dim), "identity")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> Option<&DMatrix<Complex64>> {
        match &self.repr {
            Repr::Dense(m) => Some(m),
            Repr::Custom(_) => None,
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return contract(format!(
                "dimension mismatch: map '{}' has dim {} but vector has {}",
                self.label,
                self.dim,
                v.dim()
            ));
        }
        match &self.repr {
            Repr::Dense(m) => {
                let x = DVector::from_column_slice(v.as_slice());
                ComplexVector::new((m * x).as_slice().to_vec())
            }
            Repr::Custom(f) => f(v),
        }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return contract("cannot compose maps of different dimension");
        }
        let label = format!("{}∘{}", self.label, other.label);
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => Self::from_matrix(a * b, label),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Ok(Self::from_fn(self.dim, label, move |v| a.apply(&b.apply(v)?)))
            }
        }
    }

    /// Frobenius norm of `U†U − I`; `None` for opaque maps.
    pub fn unitarity_defect(&self) -> Option<f64> {
        self.matrix()
            .map(|m| (m.ad_mul(m) - DMatrix::identity(self.dim, self.dim)).norm())
    }
}

/// `e^{−iHt} v` through the spectral decomposition of `H` (ħ = 1).
pub fn expm_apply(h: &HermitianOperator, t: f64, v: &ComplexVector) -> Result<ComplexVector> {
    h.check_dim(v.dim())?;
    h.spectral()?.evolve(t, v)
}

/// Materialized propagator `e^{−iHt}`.
pub fn unitary_matrix(h: &HermitianOperator, t: f64) -> Result<UnitaryMap> {
    let m = h.spectral()?.propagator(t)?;
    UnitaryMap::from_matrix(m, format!("exp(-iHt), t={t}"))
}
