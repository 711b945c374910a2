//! Dense complex linear algebra shared by every model: state vectors,
//! Hermitian generators, unitary propagators and basis-aligned projectors.
//!
//! Natural units (ħ = 1) throughout. Propagators are built from the
//! eigendecomposition of the Hermitian generator, so they are unitary to
//! rounding for every `t`.

mod hermitian;
mod projector;
mod unitary;
mod vector;

pub use hermitian::{HermitianOperator, SpectralDecomposition, HERMITICITY_TOL};
pub use projector::{projector_from_indices, Projector};
pub use unitary::{expm_apply, unitary_matrix, UnitaryMap};
pub use vector::ComplexVector;
