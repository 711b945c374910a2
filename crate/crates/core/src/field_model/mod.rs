//! Two-level atom of size `d` decaying into a pair of chiral (right- and
//! left-moving) massless excitations, with an optional detector that
//! absorbs right-movers on `[x_−, x_+]`.
//!
//! The closed sector is `C|e⟩ + ΣF(x_R, x_L)|x_R, x_L⟩ + ΣD_k(x_L)|k; x_L⟩`
//! on a uniform grid. Each step of `Δt = h/c` is a symmetric split:
//!
//! ```text
//! atom½ · detector½ · shift · detector½ · atom½
//! ```
//!
//! where `shift` moves every pair one cell outward, `(x_R, x_L) → (x_R + h, x_L − h)`,
//! and the coupling halves are exact exponentials of small Hermitian blocks.
//! Since the shift is exact, amplitude outside the atom square never flows
//! back into it, which makes the wave zone one-way at the discrete level.

mod config;
mod experiments;
mod model;
mod state;

pub use config::{CouplingKernel, DetectorConfig, Dispersion, FieldModelConfig, Grid, BOUNDARY_CELLS};
pub use experiments::{
    nogo_sweep, run_experiment, semidirect_control, wavezone_leakage, wavezone_leakage_profile, NogoEntry, NogoReport,
    RunResult, NOGO_TOL,
};
pub use model::{build_field_model, DetectorLayout, FieldModel, BOUNDARY_TOL};
pub use state::{FieldState, Region, SubspacePartition};
