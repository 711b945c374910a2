use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DetectorConfig, FieldModelConfig, FieldState, Grid, SubspacePartition, BOUNDARY_CELLS};
use crate::error::{config, contract, Error, Result};
use crate::linops::{unitary_matrix, ComplexVector, HermitianOperator, UnitaryMap};

/// Largest amplitude tolerated in the outermost grid cells.
pub const BOUNDARY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Detector resolved onto the grid: the `x_R` rows it touches, its mode
/// energies, and the exact half-step propagator of each `x_L` column block.
#[derive(Debug, Clone)]
pub struct DetectorLayout {
    pub config: DetectorConfig,
    /// Snapped interval actually used.
    pub x_minus: f64,
    pub x_plus: f64,
    pub rows: Range<usize>,
    pub k_values: Vec<f64>,
    pub energies: Vec<f64>,
    pub dk: f64,
    /// `e^{−iH_block Δt/2}` on `[F rows…, D modes…]`; `None` when the coupling is zero.
    half_step: Option<DMatrix<Complex64>>,
    /// `e^{−iΩ(k)Δt/2}` for the uncoupled case.
    half_phases: Vec<Complex64>,
}

impl DetectorLayout {
    pub fn n_k(&self) -> usize {
        self.k_values.len()
    }

    pub fn is_coupled(&self) -> bool {
        self.half_step.is_some()
    }
}

/// Two-level atom in `[−d/2, d/2]` coupled to a chiral pair field, with an
/// optional detector. Advances in steps of `Δt = h/c`.
#[derive(Debug, Clone)]
pub struct FieldModel {
    cfg: FieldModelConfig,
    grid: Grid,
    /// Unit vector `h·g/β` over the core cells, row-major.
    kernel_direction: Vec<f64>,
    /// `β = h‖g‖`, the `|e⟩ ↔ pair` coupling strength.
    kernel_norm: f64,
    /// `e^{−i[[ω, β], [β, 0]]Δt/2}` acting on `(C, ⟨u|F⟩)`.
    atom_half: [[Complex64; 2]; 2],
    detector: Option<DetectorLayout>,
    partition: SubspacePartition,
}

fn bump(x: f64, a: f64, b: f64) -> f64 {
    let u = (2.0 * x - a - b) / (b - a);
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Build the model, validating the configuration and resolving the detector.
pub fn build_field_model(cfg: &FieldModelConfig, det: Option<&DetectorConfig>) -> Result<FieldModel> {
    cfg.validate()?;
    let mut grid = Grid::new(cfg);
    let h = cfg.h;
    let dt = cfg.dt();
    let n = grid.n_core;
    let x_r = |i: usize| -cfg.d / 2.0 + (i as f64 + 0.5) * h;
    let x_l = |j: usize| cfg.d / 2.0 - (j as f64 + 0.5) * h;

    let mut kernel_direction = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            kernel_direction.push(h * cfg.kernel.value(x_r(i), x_l(j), cfg.d));
        }
    }
    let kernel_norm = kernel_direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if kernel_norm > 0.0 {
        kernel_direction.iter_mut().for_each(|x| *x /= kernel_norm);
    }
    let two_level = HermitianOperator::from_fn(2, |a, b| match (a, b) {
        (0, 0) => Complex64::new(cfg.omega, 0.0),
        (1, 1) => ZERO,
        _ => Complex64::new(kernel_norm, 0.0),
    })?;
    let u = unitary_matrix(&two_level, dt / 2.0)?;
    let m = u.matrix().expect("dense");
    let atom_half = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];

    let detector = det.map(|d| resolve_detector(cfg, &grid, d)).transpose()?;
    if let Some(det) = &detector {
        // detector modes carry no x_R label, so re-emission can land anywhere
        // in the support: the right-mover front may jump ahead by its width
        grid.n_r += det.rows.len();
    }
    let n_k = detector.as_ref().map_or(0, DetectorLayout::n_k);
    Ok(FieldModel {
        cfg: *cfg,
        grid,
        kernel_direction,
        kernel_norm,
        atom_half,
        detector,
        partition: SubspacePartition::new(grid, n_k),
    })
}

fn resolve_detector(cfg: &FieldModelConfig, grid: &Grid, det: &DetectorConfig) -> Result<DetectorLayout> {
    det.validate(cfg.d)?;
    let h = cfg.h;
    let edge = |m: f64| -cfg.d / 2.0 + m * h;
    // snap inwards so the support never grows
    let m_lo = ((det.x_minus + cfg.d / 2.0) / h - 1e-9).ceil().max(0.0) as usize;
    let m_hi = ((det.x_plus + cfg.d / 2.0) / h + 1e-9).floor().max(0.0) as usize;
    let (x_minus, x_plus) = (edge(m_lo as f64), edge(m_hi as f64));
    if (x_minus - det.x_minus).abs() > 1e-9 || (x_plus - det.x_plus).abs() > 1e-9 {
        log::warn!(
            "detector interval [{}, {}] snapped to grid edges [{x_minus}, {x_plus}]",
            det.x_minus,
            det.x_plus
        );
    }
    if m_hi <= m_lo {
        return config(format!(
            "detector interval [{}, {}] covers no whole grid cell",
            det.x_minus, det.x_plus
        ));
    }
    let last = m_hi.min(grid.n_r - BOUNDARY_CELLS);
    if last < m_hi {
        log::warn!("detector interval extends beyond the grid; truncated at x = {}", edge(last as f64));
    }
    let rows = m_lo..last;
    if rows.is_empty() {
        return config("detector lies entirely outside the simulated grid");
    }

    let k_max = det.resolved_k_max(h);
    let dk = 2.0 * k_max / det.n_k as f64;
    let k_values: Vec<f64> = (0..det.n_k).map(|n| -k_max + (n as f64 + 0.5) * dk).collect();
    let energies: Vec<f64> = k_values.iter().map(|&k| det.dispersion.energy(k)).collect();
    let dt = cfg.dt();
    let half_phases = energies
        .iter()
        .map(|&w| Complex64::from_polar(1.0, -w * dt / 2.0))
        .collect();

    let strength = det.scale * det.lambda0;
    let half_step = if strength == 0.0 {
        None
    } else {
        let n_rows = rows.len();
        let size = n_rows + det.n_k;
        let weights: Vec<f64> = rows
            .clone()
            .map(|i| {
                let x = -cfg.d / 2.0 + (i as f64 + 0.5) * h;
                (h * dk).sqrt() * strength * bump(x, x_minus, x_plus)
            })
            .collect();
        let block = HermitianOperator::from_fn(size, |a, b| {
            let v = match (a < n_rows, b < n_rows) {
                (false, false) if a == b => energies[a - n_rows],
                (true, false) => weights[a],
                (false, true) => weights[b],
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        })?;
        let u = unitary_matrix(&block, dt / 2.0)?;
        Some(u.matrix().expect("dense").clone())
    };

    Ok(DetectorLayout {
        config: *det,
        x_minus,
        x_plus,
        rows,
        k_values,
        energies,
        dk,
        half_step,
        half_phases,
    })
}

impl FieldModel {
    pub fn config(&self) -> &FieldModelConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.cfg.dt()
    }

    /// Largest time that can be simulated without amplitude reaching the edge.
    pub fn horizon(&self) -> f64 {
        self.grid.horizon_steps as f64 * self.dt()
    }

    pub fn detector(&self) -> Option<&DetectorLayout> {
        self.detector.as_ref()
    }

    pub fn partition(&self) -> &SubspacePartition {
        &self.partition
    }

    pub fn state_dim(&self) -> usize {
        self.partition.dim()
    }

    /// Discrete `⟨e|H_int²|e⟩ = h²Σ|g|²`.
    pub fn second_moment(&self) -> f64 {
        self.kernel_norm * self.kernel_norm
    }

    pub fn x_r(&self, i: usize) -> f64 {
        -self.cfg.d / 2.0 + (i as f64 + 0.5) * self.cfg.h
    }

    pub fn x_l(&self, j: usize) -> f64 {
        self.cfg.d / 2.0 - (j as f64 + 0.5) * self.cfg.h
    }

    /// Empty state with this model's layout.
    pub fn zero_state(&self) -> FieldState {
        FieldState::zeros(self.grid, self.detector.as_ref().map_or(0, DetectorLayout::n_k))
    }

    /// `C = 1`, `F = 0`, `D = 0`, `t = 0`.
    pub fn init_excited(&self) -> FieldState {
        let mut s = self.zero_state();
        s.c = Complex64::new(1.0, 0.0);
        s
    }

    pub fn state_from_vector(&self, v: &ComplexVector) -> Result<FieldState> {
        let mut s = self.zero_state();
        s.load_vector(v)?;
        Ok(s)
    }

    /// Advance by `Δt = h/c`:
    /// half coupling → exact transport shift → half coupling, where each
    /// half coupling applies the atom block and then the detector block
    /// (mirrored on the way back).
    pub fn step(&self, state: &mut FieldState) -> Result<()> {
        if state.grid != self.grid || state.n_k != self.detector.as_ref().map_or(0, DetectorLayout::n_k) {
            return contract("state layout does not match the model");
        }
        let dt = self.dt();
        if state.time > self.horizon() + 1e-9 * dt {
            return Err(Error::Horizon(format!(
                "t = {} already past the model horizon {}",
                state.time,
                self.horizon()
            )));
        }
        self.atom_half_step(state);
        self.detector_half_step(state);
        self.transport(state)?;
        self.detector_half_step(state);
        self.atom_half_step(state);
        state.steps += 1;
        state.time = state.steps as f64 * dt;
        Ok(())
    }

    fn atom_half_step(&self, state: &mut FieldState) {
        if self.kernel_norm == 0.0 {
            state.c *= self.atom_half[0][0];
            return;
        }
        let n = self.grid.n_core;
        let n_l = self.grid.n_l;
        let mut a = ZERO;
        for i in 0..n {
            let row = &state.f[i * n_l..i * n_l + n];
            let dir = &self.kernel_direction[i * n..(i + 1) * n];
            for (z, w) in row.iter().zip(dir) {
                a += z * w;
            }
        }
        let [[u00, u01], [u10, u11]] = self.atom_half;
        let c_new = u00 * state.c + u01 * a;
        let a_new = u10 * state.c + u11 * a;
        let delta = a_new - a;
        state.c = c_new;
        if delta != ZERO {
            for i in 0..n {
                let row = &mut state.f[i * n_l..i * n_l + n];
                let dir = &self.kernel_direction[i * n..(i + 1) * n];
                for (z, w) in row.iter_mut().zip(dir) {
                    *z += delta * w;
                }
            }
        }
    }

    fn detector_half_step(&self, state: &mut FieldState) {
        let Some(det) = &self.detector else { return };
        let n_l = self.grid.n_l;
        let n_k = det.n_k();
        match &det.half_step {
            None => {
                for (k, phase) in det.half_phases.iter().enumerate() {
                    for z in &mut state.d[k * n_l..(k + 1) * n_l] {
                        *z *= phase;
                    }
                }
            }
            Some(u) => {
                let rows = det.rows.clone();
                let n_rows = rows.len();
                let size = n_rows + n_k;
                let mut x = vec![ZERO; size];
                let mut y = vec![ZERO; size];
                for j in 0..n_l {
                    for (slot, i) in x.iter_mut().zip(rows.clone()) {
                        *slot = state.f[i * n_l + j];
                    }
                    for k in 0..n_k {
                        x[n_rows + k] = state.d[k * n_l + j];
                    }
                    if x.iter().all(|z| *z == ZERO) {
                        continue;
                    }
                    for (a, out) in y.iter_mut().enumerate() {
                        let mut acc = ZERO;
                        for (b, xb) in x.iter().enumerate() {
                            acc += u[(a, b)] * xb;
                        }
                        *out = acc;
                    }
                    for (val, i) in y.iter().zip(rows.clone()) {
                        state.f[i * n_l + j] = *val;
                    }
                    for k in 0..n_k {
                        state.d[k * n_l + j] = y[n_rows + k];
                    }
                }
            }
        }
    }

    /// `F(i, j) ← F(i − 1, j − 1)` and `D_k(j) ← D_k(j − 1)`, zero-filled at
    /// the birth edges. Fails if the outer cells carry amplitude.
    fn transport(&self, state: &mut FieldState) -> Result<()> {
        let Grid { n_r, n_l, .. } = self.grid;
        let n_k = state.n_k;
        let mut boundary_max: f64 = 0.0;
        let mut outflow = 0.0;
        for i in 0..n_r {
            for j in 0..n_l {
                if i + BOUNDARY_CELLS >= n_r || j + BOUNDARY_CELLS >= n_l {
                    let z = state.f[i * n_l + j];
                    boundary_max = boundary_max.max(z.norm());
                    if i == n_r - 1 || j == n_l - 1 {
                        outflow += z.norm_sqr();
                    }
                }
            }
        }
        for k in 0..n_k {
            for j in n_l - BOUNDARY_CELLS..n_l {
                let z = state.d[k * n_l + j];
                boundary_max = boundary_max.max(z.norm());
                if j == n_l - 1 {
                    outflow += z.norm_sqr();
                }
            }
        }
        if boundary_max >= BOUNDARY_TOL {
            return Err(Error::Horizon(format!(
                "amplitude {boundary_max:e} reached the grid boundary at t = {}",
                state.time
            )));
        }
        state.escaped += outflow;

        for i in (1..n_r).rev() {
            let src = (i - 1) * n_l;
            state.f.copy_within(src..src + n_l - 1, i * n_l + 1);
            state.f[i * n_l] = ZERO;
        }
        state.f[..n_l].fill(ZERO);
        for k in 0..n_k {
            let row = k * n_l;
            state.d.copy_within(row..row + n_l - 1, row + 1);
            state.d[row] = ZERO;
        }
        Ok(())
    }

    /// The one-step propagator as a map on flattened states `[C, F…, D…]`.
    pub fn step_map(&self) -> UnitaryMap {
        let model = self.clone();
        let label = match &self.detector {
            Some(d) => format!("field step (detector scale {})", d.config.scale),
            None => "field step".to_string(),
        };
        UnitaryMap::from_fn(self.state_dim(), label, move |v| {
            let mut s = model.state_from_vector(v)?;
            model.step(&mut s)?;
            Ok(s.to_vector())
        })
    }

    /// A normalized state with Gaussian random amplitudes on every cell
    /// within `reach` cells of the atom (both coordinates), on `C`, and on
    /// the matching detector columns. `wave_only` drops the core part.
    ///
    /// Detector amplitude can re-emit at `x_+` on the first step, so a probe
    /// stepped `k` times needs a horizon of about `k·Δt + x_+ + reach·h`.
    pub fn random_probe<R: Rng>(&self, rng: &mut R, reach: usize, wave_only: bool) -> Result<FieldState> {
        let mut s = self.zero_state();
        let lim = (self.grid.n_core + reach).min(self.grid.n_r - BOUNDARY_CELLS);
        let n_l = self.grid.n_l;
        if !wave_only {
            s.c = standard_complex(rng);
        }
        for i in 0..lim {
            for j in 0..lim {
                if wave_only && self.grid.is_core(i, j) {
                    continue;
                }
                s.f[i * n_l + j] = standard_complex(rng);
            }
        }
        for k in 0..s.n_k {
            for j in 0..lim {
                s.d[k * n_l + j] = standard_complex(rng);
            }
        }
        let norm = s.norm_sqr().sqrt();
        if norm == 0.0 {
            return contract("probe region is empty");
        }
        let inv = 1.0 / norm;
        s.c *= inv;
        s.f.iter_mut().chain(s.d.iter_mut()).for_each(|z| *z *= inv);
        Ok(s)
    }
}

fn standard_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}
