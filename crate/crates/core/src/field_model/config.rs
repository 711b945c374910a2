use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Atom–pair coupling `g(x_R, x_L)`, supported on the open square `(−d/2, d/2)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingKernel {
    /// `g = g0` on the whole square.
    Constant { g0: f64 },
    /// `g = g0·exp(−(x_R² + x_L²)/(2σ²))`, truncated to the square.
    Gaussian { g0: f64, sigma: f64 },
}

impl CouplingKernel {
    /// Kernel value at `(x_R, x_L)`; zero outside the atom square.
    pub fn value(&self, x_r: f64, x_l: f64, d: f64) -> f64 {
        let half = d / 2.0;
        if x_r.abs() >= half || x_l.abs() >= half {
            return 0.0;
        }
        match *self {
            CouplingKernel::Constant { g0 } => g0,
            CouplingKernel::Gaussian { g0, sigma } => {
                g0 * (-(x_r * x_r + x_l * x_l) / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            CouplingKernel::Constant { g0 } | CouplingKernel::Gaussian { g0, .. } => g0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            CouplingKernel::Constant { g0 } if !g0.is_finite() => config("kernel g0 must be finite"),
            CouplingKernel::Gaussian { g0, sigma } if !g0.is_finite() || !(sigma > 0.0) => {
                config("gaussian kernel needs finite g0 and sigma > 0")
            }
            _ => Ok(()),
        }
    }
}

fn default_c() -> f64 {
    1.0
}

/// Physical and numerical parameters of the atom + chiral-field model.
/// Natural units, ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldModelConfig {
    /// Size of the atom region `[−d/2, d/2]`.
    pub d: f64,
    /// Excited-state energy `ω`.
    pub omega: f64,
    pub kernel: CouplingKernel,
    /// Grid spacing; the time step is `h/c`.
    pub h: f64,
    /// Simulation horizon `T`; grid extents are sized so nothing reaches the edge before it.
    pub horizon: f64,
    #[serde(default = "default_c")]
    pub c: f64,
}

impl Default for FieldModelConfig {
    fn default() -> Self {
        Self {
            d: 1.0,
            omega: 5.0,
            kernel: CouplingKernel::Constant { g0: 1.0 },
            h: 1.0 / 16.0,
            horizon: 8.0,
            c: 1.0,
        }
    }
}

impl FieldModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return config(format!("d must be positive, got {}", self.d));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return config(format!("h must be positive, got {}", self.h));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return config(format!("c must be positive, got {}", self.c));
        }
        if !self.omega.is_finite() {
            return config("omega must be finite");
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return config(format!("horizon must be positive, got {}", self.horizon));
        }
        let cells = self.d / self.h;
        let n = cells.round();
        if (cells - n).abs() > 1e-9 * cells.max(1.0) || n < 4.0 || !(n as u64).is_multiple_of(2) {
            return config(format!(
                "d/h must be an even integer ≥ 4, got {cells}"
            ));
        }
        self.kernel.validate()
    }

    /// Time step `Δt = h/c`, which makes transport an exact one-cell shift.
    pub fn dt(&self) -> f64 {
        self.h / self.c
    }

    /// `∫∫|g|²` for the continuum kernel (closed form only for the constant kernel).
    pub fn continuum_alpha(&self) -> Option<f64> {
        match self.kernel {
            CouplingKernel::Constant { g0 } => Some(g0 * g0 * self.d * self.d),
            CouplingKernel::Gaussian { .. } => None,
        }
    }
}

/// Detector dispersion `Ω(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Dispersion {
    /// `Ω(k) = v·k`.
    Linear { velocity: f64 },
    /// `Ω(k) = a·k²`.
    Quadratic { curvature: f64 },
}

impl Dispersion {
    pub fn energy(&self, k: f64) -> f64 {
        match *self {
            Dispersion::Linear { velocity } => velocity * k,
            Dispersion::Quadratic { curvature } => curvature * k * k,
        }
    }
}

impl Default for Dispersion {
    fn default() -> Self {
        Dispersion::Linear { velocity: 1.0 }
    }
}

fn default_lambda0() -> f64 {
    0.1
}
fn default_n_k() -> usize {
    64
}
fn default_scale() -> f64 {
    1.0
}

/// An apparatus on `[x_−, x_+]` coupling right-movers to a band of detector
/// modes `b(k)` through `λ(x, k) = scale·λ0·w(x)`, with `w` a smooth bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub x_minus: f64,
    pub x_plus: f64,
    #[serde(default)]
    pub dispersion: Dispersion,
    #[serde(default = "default_lambda0")]
    pub lambda0: f64,
    #[serde(default = "default_n_k")]
    pub n_k: usize,
    /// Mode cutoff; defaults to `π/(2h)`.
    #[serde(default)]
    pub k_max: Option<f64>,
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// Allow the detector to overlap the atom region.
    #[serde(default)]
    pub semidirect: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self::wave_zone(1.0, 2.0)
    }
}

impl DetectorConfig {
    pub fn wave_zone(x_minus: f64, x_plus: f64) -> Self {
        Self {
            x_minus,
            x_plus,
            dispersion: Dispersion::default(),
            lambda0: default_lambda0(),
            n_k: default_n_k(),
            k_max: None,
            scale: default_scale(),
            semidirect: false,
        }
    }

    /// A detector allowed to reach into the atom region.
    pub fn overlapping(x_minus: f64, x_plus: f64) -> Self {
        Self {
            semidirect: true,
            ..Self::wave_zone(x_minus, x_plus)
        }
    }

    pub fn with_scale(self, scale: f64) -> Self {
        Self { scale, ..self }
    }

    pub fn resolved_k_max(&self, h: f64) -> f64 {
        self.k_max.unwrap_or(2.0 * PI / h / 4.0)
    }

    /// `true` when the support lies entirely right of the atom.
    pub fn in_wave_zone(&self, d: f64) -> bool {
        self.x_minus > d / 2.0
    }

    pub fn validate(&self, d: f64) -> Result<()> {
        if !(self.x_minus.is_finite() && self.x_plus.is_finite()) || self.x_plus <= self.x_minus {
            return config(format!(
                "detector needs x_plus > x_minus, got [{}, {}]",
                self.x_minus, self.x_plus
            ));
        }
        if !self.semidirect && !self.in_wave_zone(d) {
            return config(format!(
                "detector must sit in the wave zone (x_minus > d/2 = {}), got x_minus = {}; \
                 set `semidirect` to allow overlap",
                d / 2.0,
                self.x_minus
            ));
        }
        if self.n_k == 0 {
            return config("detector needs at least one k mode");
        }
        if !(self.lambda0.is_finite() && self.scale.is_finite()) {
            return config("detector coupling must be finite");
        }
        if let Some(k) = self.k_max {
            if !(k > 0.0 && k.is_finite()) {
                return config("k_max must be positive");
            }
        }
        match self.dispersion {
            Dispersion::Linear { velocity: v } | Dispersion::Quadratic { curvature: v } if !v.is_finite() => {
                config("dispersion parameter must be finite")
            }
            _ => Ok(()),
        }
    }
}

/// Cell layout of the two-particle grid.
///
/// `x_R` cells are indexed by `i` from the left atom edge rightwards, `x_L`
/// cells by `j` from the right atom edge leftwards, so free transport maps
/// `(i, j) → (i + 1, j + 1)`. Core cells are `i, j < n_core`.
///
/// With a detector, `n_r` grows by the detector width: re-emission from a
/// detector mode can place a right-mover anywhere on `[x_−, x_+]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub n_core: usize,
    pub n_r: usize,
    pub n_l: usize,
    pub horizon_steps: usize,
}

/// Number of spare cells beyond the causal horizon on each outflow edge.
pub const BOUNDARY_CELLS: usize = 2;

impl Grid {
    pub fn new(cfg: &FieldModelConfig) -> Self {
        let n_core = (cfg.d / cfg.h).round() as usize;
        let horizon_steps = (cfg.horizon / cfg.dt() - 1e-9).ceil() as usize;
        let n = n_core + horizon_steps + BOUNDARY_CELLS;
        Self {
            n_core,
            n_r: n,
            n_l: n,
            horizon_steps,
        }
    }

    pub fn cells(&self) -> usize {
        self.n_r * self.n_l
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_l + j
    }

    pub fn is_core(&self, i: usize, j: usize) -> bool {
        i < self.n_core && j < self.n_core
    }
}
