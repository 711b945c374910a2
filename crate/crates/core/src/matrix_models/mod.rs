//! Finite-dimensional Zeno experiments: toy unstable systems, repeated
//! projective measurement, direct continuous measurement `H + gH_m`, and a
//! propagator-agnostic checker for the core intertwining identity
//! `P_C U_g^k = P_C U_0^k`.

mod intertwining;
mod toy;
mod zeno;

pub use intertwining::{verify_intertwining, IntertwiningReport};
pub use toy::{
    build_decoupled_blocks, build_friedrichs, build_two_level, ToyKind, ToyModel,
    FRIEDRICHS_MIN_MODES, MEASUREMENT_KERNEL_TOL,
};
pub use zeno::{projective_zeno, survival_series, ZenoRunSpec};
