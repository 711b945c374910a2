use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ComplexVector;
use crate::error::{contract, Error, Result};

/// Largest tolerated `|H_ij − conj(H_ji)|` before a matrix is rejected.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A dense Hermitian matrix, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return contract(format!(
                "operator must be square with dim ≥ 1, got {}×{}",
                entries.nrows(),
                entries.ncols()
            ));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("operator has non-finite entries".into()));
        }
        let adjoint = entries.adjoint();
        let defect = (&entries - &adjoint).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > HERMITICITY_TOL {
            return contract(format!("operator is not Hermitian (defect {defect:e})"));
        }
        let entries = (entries + adjoint).scale(0.5);
        Ok(Self { entries })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, z)| k % (self.dim() + 1) == 0 || *z == Complex64::new(0.0, 0.0))
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        self.check_dim(v.dim())?;
        let x = DVector::from_column_slice(v.as_slice());
        ComplexVector::new((&self.entries * x).as_slice().to_vec())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * factor),
        }
    }

    /// `⟨v|H|v⟩` (real for Hermitian `H`).
    pub fn expectation(&self, v: &ComplexVector) -> Result<f64> {
        Ok(v.inner(&self.apply(v)?)?.re)
    }

    /// Eigen-decomposition `H = V diag(λ) V†`.
    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        let eig = SymmetricEigen::try_new(self.entries.clone(), f64::EPSILON, 0).ok_or_else(|| {
            Error::Numeric("Hermitian eigendecomposition did not converge".into())
        })?;
        Ok(SpectralDecomposition {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return contract(format!(
                "dimension mismatch: operator {} vs {}",
                self.dim(),
                dim
            ));
        }
        Ok(())
    }
}

/// Cached eigenbasis of a Hermitian operator; evaluates `e^{−iHt}` for any `t`
/// without redoing the decomposition.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    fn phases(&self, t: f64) -> Result<DVector<Complex64>> {
        if !t.is_finite() {
            return Err(Error::Numeric(format!("non-finite time {t}")));
        }
        Ok(DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * t)),
        ))
    }

    /// `e^{−iHt} v`.
    pub fn evolve(&self, t: f64, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim() {
            return contract(format!("dimension mismatch: {} vs {}", self.dim(), v.dim()));
        }
        let x = DVector::from_column_slice(v.as_slice());
        let coeffs = self.eigenvectors.ad_mul(&x).component_mul(&self.phases(t)?);
        ComplexVector::new((&self.eigenvectors * coeffs).as_slice().to_vec())
    }

    /// Dense `e^{−iHt}`.
    pub fn propagator(&self, t: f64) -> Result<DMatrix<Complex64>> {
        let phases = self.phases(t)?;
        let mut scaled = self.eigenvectors.clone();
        for (mut col, p) in scaled.column_iter_mut().zip(phases.iter()) {
            col *= *p;
        }
        Ok(scaled * self.eigenvectors.adjoint())
    }

    /// `⟨i|e^{−iHt}|i⟩`, the return amplitude of a basis state.
    pub fn return_amplitude(&self, index: usize, t: f64) -> Result<Complex64> {
        if index >= self.dim() {
            return contract(format!("basis index {index} out of range"));
        }
        let phases = self.phases(t)?;
        Ok(self
            .eigenvectors
            .row(index)
            .iter()
            .zip(phases.iter())
            .map(|(v, p)| v.norm_sqr() * p)
            .sum())
    }
}
