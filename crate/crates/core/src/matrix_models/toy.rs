use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{contract, Result};
use crate::linops::{projector_from_indices, ComplexVector, HermitianOperator, Projector};

/// Tolerance for `H_m|e⟩ = 0`.
pub const MEASUREMENT_KERNEL_TOL: f64 = 1e-12;

/// Which constructor produced a model; carries the parameters analytic
/// oracles need.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ToyKind {
    TwoLevel { omega: f64 },
    Friedrichs { modes: usize, coupling: f64, bandwidth: f64 },
    DecoupledBlocks { core_dim: usize, wave_dim: usize },
    Custom,
}

/// A finite unstable system `H = H_o + H_i` with a measurement term `H_m`
/// and a distinguished excited basis state `|e⟩`.
#[derive(Debug, Clone)]
pub struct ToyModel {
    free: HermitianOperator,
    interaction: HermitianOperator,
    measurement: HermitianOperator,
    excited: usize,
    kind: ToyKind,
    warnings: Vec<String>,
}

impl ToyModel {
    pub fn new(
        free: HermitianOperator,
        interaction: HermitianOperator,
        measurement: HermitianOperator,
        excited: usize,
    ) -> Result<Self> {
        let dim = free.dim();
        if interaction.dim() != dim || measurement.dim() != dim {
            return contract("H_o, H_i and H_m must share one dimension");
        }
        if excited >= dim {
            return contract(format!("excited index {excited} out of range for dim {dim}"));
        }
        if !free.is_diagonal() {
            return contract("H_o must be diagonal in the working basis");
        }
        let e = ComplexVector::basis(dim, excited)?;
        let residue = measurement.apply(&e)?.norm();
        if residue > MEASUREMENT_KERNEL_TOL {
            return contract(format!(
                "H_m|e⟩ must vanish, got norm {residue:e}"
            ));
        }
        Ok(Self {
            free,
            interaction,
            measurement,
            excited,
            kind: ToyKind::Custom,
            warnings: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.free.dim()
    }

    pub fn excited_index(&self) -> usize {
        self.excited
    }

    pub fn excited_state(&self) -> ComplexVector {
        ComplexVector::basis(self.dim(), self.excited).expect("excited index validated at construction")
    }

    pub fn free(&self) -> &HermitianOperator {
        &self.free
    }

    pub fn interaction(&self) -> &HermitianOperator {
        &self.interaction
    }

    pub fn measurement(&self) -> &HermitianOperator {
        &self.measurement
    }

    pub fn kind(&self) -> &ToyKind {
        &self.kind
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn excited_energy(&self) -> f64 {
        self.free.element(self.excited, self.excited).re
    }

    /// `H_tot = H_o + H_i + g H_m`.
    pub fn total_hamiltonian(&self, g: f64) -> HermitianOperator {
        let h = self.free.add(&self.interaction).expect("dims validated");
        if g == 0.0 {
            h
        } else {
            h.add(&self.measurement.scaled(g)).expect("dims validated")
        }
    }

    /// Short-time coefficient `α = ⟨e|H_i²|e⟩ = ‖H_i|e⟩‖²`.
    pub fn short_time_alpha(&self) -> f64 {
        self.interaction
            .apply(&self.excited_state())
            .expect("dims validated")
            .norm_sqr()
    }

    /// Golden-rule rate `2πλ²` for Friedrichs models.
    pub fn golden_rule_rate(&self) -> Option<f64> {
        match self.kind {
            ToyKind::Friedrichs { coupling, .. } => Some(2.0 * PI * coupling * coupling),
            _ => None,
        }
    }

    /// Core projector of a decoupled-block model.
    pub fn core_projector(&self) -> Option<Projector> {
        match self.kind {
            ToyKind::DecoupledBlocks { core_dim, .. } => {
                projector_from_indices(0..core_dim, self.dim()).ok()
            }
            _ => None,
        }
    }

    fn with_kind(mut self, kind: ToyKind) -> Self {
        self.kind = kind;
        self
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Two-level system: `H_o = 0`, `H_i = Ω σ_x`, `H_m = |1⟩⟨1|`, `|e⟩ = |0⟩`.
pub fn build_two_level(omega: f64) -> Result<ToyModel> {
    if !(omega > 0.0 && omega.is_finite()) {
        return contract(format!("Rabi coupling must be positive, got {omega}"));
    }
    let free = HermitianOperator::zeros(2)?;
    let interaction =
        HermitianOperator::from_fn(2, |i, j| if i != j { c(omega) } else { c(0.0) })?;
    let measurement = HermitianOperator::diagonal(&[0.0, 1.0])?;
    Ok(ToyModel::new(free, interaction, measurement, 0)?.with_kind(ToyKind::TwoLevel { omega }))
}

pub const FRIEDRICHS_MIN_MODES: usize = 32;

/// Excited level at energy 0 coupled uniformly (`λ√δω`) to `modes` levels
/// spread over `[−Δ/2, Δ/2]` at cell centres; `H_m` projects onto the modes.
pub fn build_friedrichs(modes: usize, coupling: f64, bandwidth: f64) -> Result<ToyModel> {
    if modes < FRIEDRICHS_MIN_MODES {
        return contract(format!(
            "Friedrichs model needs at least {FRIEDRICHS_MIN_MODES} modes, got {modes}"
        ));
    }
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return contract(format!("coupling must be nonnegative, got {coupling}"));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return contract(format!("bandwidth must be positive, got {bandwidth}"));
    }
    let spacing = bandwidth / modes as f64;
    let dim = modes + 1;
    let mut energies = vec![0.0; dim];
    for (n, e) in energies.iter_mut().enumerate().skip(1) {
        *e = -bandwidth / 2.0 + (n as f64 - 0.5) * spacing;
    }
    let v = coupling * spacing.sqrt();
    let free = HermitianOperator::diagonal(&energies)?;
    let interaction = HermitianOperator::from_fn(dim, |i, j| {
        if (i == 0) != (j == 0) {
            c(v)
        } else {
            c(0.0)
        }
    })?;
    let mut projector = vec![1.0; dim];
    projector[0] = 0.0;
    let measurement = HermitianOperator::diagonal(&projector)?;

    let mut model = ToyModel::new(free, interaction, measurement, 0)?.with_kind(ToyKind::Friedrichs {
        modes,
        coupling,
        bandwidth,
    });
    let gamma = 2.0 * PI * coupling * coupling;
    let recurrence = 2.0 * PI / spacing;
    if gamma > 0.0 && 3.0 / gamma >= recurrence {
        let msg = format!(
            "{modes} modes cannot resolve the decay: window end 3/Γ = {:.3} exceeds recurrence time {:.3}",
            3.0 / gamma,
            recurrence
        );
        log::warn!("{msg}");
        model.warnings.push(msg);
    }
    Ok(model)
}

/// `H = H_C ⊕ H_W` with no coupling between the blocks and `H_m` living on
/// the wave block only. Deterministic tight-binding chains in each block.
pub fn build_decoupled_blocks(core_dim: usize, wave_dim: usize) -> Result<ToyModel> {
    if core_dim < 2 || wave_dim < 1 {
        return contract("decoupled blocks need core_dim ≥ 2 and wave_dim ≥ 1");
    }
    let dim = core_dim + wave_dim;
    let block = |i: usize| usize::from(i >= core_dim);
    let energies: Vec<f64> = (0..dim).map(|k| 0.31 * k as f64 - 0.05 * (k * k) as f64).collect();
    let free = HermitianOperator::diagonal(&energies)?;
    let interaction = HermitianOperator::from_fn(dim, |i, j| {
        if i.abs_diff(j) == 1 && block(i) == block(j) {
            c(0.6 + 0.1 * i.min(j) as f64)
        } else {
            c(0.0)
        }
    })?;
    let measurement = HermitianOperator::from_fn(dim, |i, j| {
        if block(i) == 1 && block(j) == 1 {
            match i.abs_diff(j) {
                0 => c(1.0 + 0.5 * (i - core_dim) as f64),
                1 => Complex64::new(0.3, if i < j { 0.2 } else { -0.2 }),
                _ => c(0.0),
            }
        } else {
            c(0.0)
        }
    })?;
    Ok(ToyModel::new(free, interaction, measurement, 0)?
        .with_kind(ToyKind::DecoupledBlocks { core_dim, wave_dim }))
}
