use serde::Serialize;

use crate::error::{contract, Result};
use crate::linops::{ComplexVector, Projector, UnitaryMap};

const PROBE_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningReport {
    /// `max_{v,k} ‖P_C U_g^k v − P_C U_0^k v‖`.
    pub max_deviation: f64,
    pub worst_step: usize,
    pub worst_probe: usize,
    /// `max_v ‖P_C U_g^k v − P_C U_0^k v‖` for `k = 1..=steps`.
    pub profile: Vec<f64>,
    pub steps: usize,
    pub probes: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Check `P_C U_g^k = P_C U_0^k` on a probe set for `k = 1..=n_steps`.
///
/// The step maps may be arbitrary (dense propagators or split-step
/// schemes); only their action on the probes is used.
pub fn verify_intertwining(
    u_g: &UnitaryMap,
    u_0: &UnitaryMap,
    core: &Projector,
    n_steps: usize,
    probes: &[ComplexVector],
    tol: f64,
) -> Result<IntertwiningReport> {
    let dim = u_g.dim();
    if u_0.dim() != dim || core.dim() != dim {
        return contract(format!(
            "dimension mismatch: U_g {}, U_0 {}, P_C {}",
            dim,
            u_0.dim(),
            core.dim()
        ));
    }
    for (i, p) in probes.iter().enumerate() {
        if p.dim() != dim {
            return contract(format!("probe {i} has dim {} but maps have dim {dim}", p.dim()));
        }
        if (p.norm() - 1.0).abs() > PROBE_NORM_TOL {
            return contract(format!("probe {i} is not normalized (norm {})", p.norm()));
        }
    }

    let mut max_deviation = 0.0;
    let mut profile = vec![0.0f64; n_steps];
    let mut worst_step = 0;
    let mut worst_probe = 0;
    for (i, probe) in probes.iter().enumerate() {
        let mut with = probe.clone();
        let mut without = probe.clone();
        for k in 1..=n_steps {
            with = u_g.apply(&with)?;
            without = u_0.apply(&without)?;
            let dev = core.projected_distance(&with, &without)?;
            profile[k - 1] = profile[k - 1].max(dev);
            if dev > max_deviation {
                max_deviation = dev;
                worst_step = k;
                worst_probe = i;
            }
        }
    }
    Ok(IntertwiningReport {
        max_deviation,
        worst_step,
        worst_probe,
        profile,
        steps: n_steps,
        probes: probes.len(),
        tolerance: tol,
        passed: max_deviation <= tol,
    })
}
