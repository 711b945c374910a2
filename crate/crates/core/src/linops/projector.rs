use num_complex::Complex64;

use super::ComplexVector;
use crate::error::{contract, Result};

/// Orthogonal projector onto a span of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    indices: Vec<usize>,
    dim: usize,
}

/// Build the projector onto `span{|i⟩ : i ∈ indices}`. Duplicates are merged.
pub fn projector_from_indices<I>(indices: I, dim: usize) -> Result<Projector>
where
    I: IntoIterator<Item = usize>,
{
    if dim == 0 {
        return contract("projector dimension must be at least 1");
    }
    let mut indices: Vec<usize> = indices.into_iter().collect();
    if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
        return contract(format!("projector index {bad} out of range for dim {dim}"));
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(Projector { indices, dim })
}

impl Projector {
    pub fn identity(dim: usize) -> Result<Self> {
        projector_from_indices(0..dim, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn complement(&self) -> Self {
        let mut keep = vec![true; self.dim];
        for &i in &self.indices {
            keep[i] = false;
        }
        Self {
            indices: (0..self.dim).filter(|&i| keep[i]).collect(),
            dim: self.dim,
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return contract(format!(
                "dimension mismatch: projector {} vs vector {}",
                self.dim,
                v.dim()
            ));
        }
        let mut out = ComplexVector::zeros(self.dim);
        for &i in &self.indices {
            out[i] = v[i];
        }
        Ok(out)
    }

    /// `‖P v‖` without allocating the projected vector.
    pub fn projected_norm(&self, v: &ComplexVector) -> Result<f64> {
        if v.dim() != self.dim {
            return contract("dimension mismatch in projected_norm");
        }
        Ok(self
            .indices
            .iter()
            .map(|&i| v[i].norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `‖P (a − b)‖`.
    pub fn projected_distance(&self, a: &ComplexVector, b: &ComplexVector) -> Result<f64> {
        a.check_dim(b)?;
        if a.dim() != self.dim {
            return contract("dimension mismatch in projected_distance");
        }
        Ok(self
            .indices
            .iter()
            .map(|&i| (a[i] - b[i]).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `true` if `v` has no amplitude outside the projected span.
    pub fn supports(&self, v: &ComplexVector) -> bool {
        v.dim() == self.dim
            && v.as_slice()
                .iter()
                .enumerate()
                .all(|(i, z)| *z == Complex64::new(0.0, 0.0) || self.contains(i))
    }
}
