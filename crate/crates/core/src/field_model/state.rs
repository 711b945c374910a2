use num_complex::Complex64;
use serde::Serialize;

use super::Grid;
use crate::error::{contract, Result};
use crate::linops::{projector_from_indices, ComplexVector, Projector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes of the closed sector: atom `C`, pair grid `F(x_R, x_L)` and
/// detector grid `D_k(x_L)`.
///
/// Stored as orthonormal-basis coefficients: `f[i, j] = h·F(x_R, x_L)` and
/// `d[k, j] = √(h δk)·D_k(x_L)`, so the total norm is a plain sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub(crate) c: Complex64,
    pub(crate) f: Vec<Complex64>,
    pub(crate) d: Vec<Complex64>,
    pub(crate) escaped: f64,
    pub(crate) time: f64,
    pub(crate) steps: usize,
    pub(crate) grid: Grid,
    pub(crate) n_k: usize,
}

impl FieldState {
    pub(crate) fn zeros(grid: Grid, n_k: usize) -> Self {
        Self {
            c: ZERO,
            f: vec![ZERO; grid.cells()],
            d: vec![ZERO; n_k * grid.n_l],
            escaped: 0.0,
            time: 0.0,
            steps: 0,
            grid,
            n_k,
        }
    }

    pub fn atom_amplitude(&self) -> Complex64 {
        self.c
    }

    /// `|C(t)|²`.
    pub fn survival(&self) -> f64 {
        self.c.norm_sqr()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn detector_modes(&self) -> usize {
        self.n_k
    }

    /// Norm lost through the outflow edges; stays zero within the horizon.
    pub fn escaped_norm(&self) -> f64 {
        self.escaped
    }

    /// Basis coefficient of pair cell `(i, j)`.
    pub fn pair_coefficient(&self, i: usize, j: usize) -> Complex64 {
        self.f[self.grid.index(i, j)]
    }

    pub fn detector_coefficient(&self, k: usize, j: usize) -> Complex64 {
        self.d[k * self.grid.n_l + j]
    }

    pub fn pair_coefficients(&self) -> &[Complex64] {
        &self.f
    }

    pub fn detector_coefficients(&self) -> &[Complex64] {
        &self.d
    }

    pub fn pair_coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.f
    }

    pub fn detector_coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.d
    }

    pub fn set_atom_amplitude(&mut self, c: Complex64) {
        self.c = c;
    }

    /// `|C|² + h²Σ|F|² + hδkΣ|D|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.c.norm_sqr() + self.pair_population() + self.detector_population()
    }

    pub fn pair_population(&self) -> f64 {
        self.f.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Probability that a detector excitation has been created.
    pub fn detector_population(&self) -> f64 {
        self.d.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Norm of the core-zone component `P_C ψ`.
    pub fn core_norm(&self) -> f64 {
        let n = self.grid.n_core;
        let mut sum = self.c.norm_sqr();
        for i in 0..n {
            let row = &self.f[self.grid.index(i, 0)..self.grid.index(i, n)];
            sum += row.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        sum.sqrt()
    }

    /// Dimension of the flattened state `[C, F…, D…]`.
    pub fn dim(&self) -> usize {
        1 + self.f.len() + self.d.len()
    }

    pub fn to_vector(&self) -> ComplexVector {
        let mut v = Vec::with_capacity(self.dim());
        v.push(self.c);
        v.extend_from_slice(&self.f);
        v.extend_from_slice(&self.d);
        ComplexVector::new(v).expect("state amplitudes are finite")
    }

    /// Load a flattened vector into a state of the same layout; time resets to 0.
    pub(crate) fn load_vector(&mut self, v: &ComplexVector) -> Result<()> {
        if v.dim() != self.dim() {
            return contract(format!(
                "vector dim {} does not match field state dim {}",
                v.dim(),
                self.dim()
            ));
        }
        let s = v.as_slice();
        let nf = self.f.len();
        self.c = s[0];
        self.f.copy_from_slice(&s[1..1 + nf]);
        self.d.copy_from_slice(&s[1 + nf..]);
        self.escaped = 0.0;
        self.time = 0.0;
        self.steps = 0;
        Ok(())
    }

    /// Restriction to the core zone: `C` followed by the core pair cells.
    pub fn core_restriction(&self) -> Vec<Complex64> {
        let n = self.grid.n_core;
        let mut out = Vec::with_capacity(1 + n * n);
        out.push(self.c);
        for i in 0..n {
            out.extend_from_slice(&self.f[self.grid.index(i, 0)..self.grid.index(i, n)]);
        }
        out
    }
}

/// Which projector a basis cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// `|e⟩`.
    Excited,
    /// Both particles inside the atom region.
    Core,
    /// Right-mover outside, left-mover inside (`P_R`).
    Right,
    /// Right-mover inside, left-mover outside (`P_L`).
    Left,
    /// Both outside (`P_RL`).
    RightLeft,
    /// Detector excitation plus left-mover (`P_ML`).
    Measured,
}

impl Region {
    pub fn is_core(self) -> bool {
        matches!(self, Region::Excited | Region::Core)
    }
}

/// Core/wave-zone split of the flattened state layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspacePartition {
    grid: Grid,
    n_k: usize,
    core: Projector,
}

impl SubspacePartition {
    pub(crate) fn new(grid: Grid, n_k: usize) -> Self {
        let dim = 1 + grid.cells() + n_k * grid.n_l;
        let n = grid.n_core;
        let core_cells = std::iter::once(0)
            .chain((0..n).flat_map(move |i| (0..n).map(move |j| 1 + grid.index(i, j))));
        let core = projector_from_indices(core_cells, dim).expect("core cells lie inside the layout");
        Self { grid, n_k, core }
    }

    pub fn dim(&self) -> usize {
        self.core.dim()
    }

    /// `P_C`.
    pub fn core_projector(&self) -> &Projector {
        &self.core
    }

    /// `P_W1 = 1 − P_C`.
    pub fn wave_projector(&self) -> Projector {
        self.core.complement()
    }

    pub fn core_cells(&self) -> &[usize] {
        self.core.indices()
    }

    /// Region of a flattened index.
    pub fn region(&self, index: usize) -> Option<Region> {
        let cells = self.grid.cells();
        if index == 0 {
            Some(Region::Excited)
        } else if index <= cells {
            let k = index - 1;
            Some(self.pair_region(k / self.grid.n_l, k % self.grid.n_l))
        } else if index < 1 + cells + self.n_k * self.grid.n_l {
            Some(Region::Measured)
        } else {
            None
        }
    }

    pub fn pair_region(&self, i: usize, j: usize) -> Region {
        let n = self.grid.n_core;
        match (i >= n, j >= n) {
            (false, false) => Region::Core,
            (true, false) => Region::Right,
            (false, true) => Region::Left,
            (true, true) => Region::RightLeft,
        }
    }

    /// `true` iff `P_W1 ψ = ψ`.
    pub fn is_wave_supported(&self, state: &FieldState) -> bool {
        state.core_restriction().iter().all(|z| *z == ZERO)
    }
}
