//! Exact unitary propagation mode by mode.
//!
//! Each active `x₁`-mode is diagonalized once; evolution to any time is a
//! phase rotation of the eigen-coefficients. The `3N2` eigenvalues of the
//! symmetric core split by size into the two Poincaré branches (`∓√K/ε`)
//! around the slow Rossby branch.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rossbytrap_core::CoriolisProfile;

use crate::error::Result;
use crate::field::{ModeSpectrum, StateField};
use crate::generator::{block_phase, sample_b, symmetric_generator};
use crate::grid::Grid2D;
use crate::linalg::{sym_eigen, SymEigen};
use crate::spectral::derivative_matrix;

/// Modes carrying less than this fraction of the energy are not propagated.
pub const DEFAULT_SKIP: f64 = 1e-28;

/// Wave branch, in the column order `(−, 0, +)` of the reconstruction symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Rossby,
    Plus,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Minus, Branch::Rossby, Branch::Plus];

    pub fn index(self) -> usize {
        match self {
            Branch::Minus => 0,
            Branch::Rossby => 1,
            Branch::Plus => 2,
        }
    }

    /// Eigenvalue slots of this branch among the ascending `3n` eigenvalues.
    pub fn eigen_range(self, n: usize) -> std::ops::Range<usize> {
        match self {
            Branch::Plus => 0..n,
            Branch::Rossby => n..2 * n,
            Branch::Minus => 2 * n..3 * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Minus => "minus",
            Branch::Rossby => "rossby",
            Branch::Plus => "plus",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "minus" => Ok(Branch::Minus),
            "rossby" => Ok(Branch::Rossby),
            "plus" => Ok(Branch::Plus),
            _ => Err(format!("unknown branch {s:?}")),
        }
    }
}

/// Eigen-decomposition of one mode.
#[derive(Debug, Clone)]
pub struct ModeEigen {
    pub slot: usize,
    pub k1: i64,
    pub xi1: f64,
    pub eigen: SymEigen,
}

impl ModeEigen {
    pub fn compute(b: &[f64], d: &[f64], grid: &Grid2D, slot: usize) -> Result<Self> {
        let k1 = grid.k1_of_slot(slot);
        let s = symmetric_generator(b, d, grid.epsilon, grid.kappa(k1));
        let eigen = sym_eigen(3 * grid.n2, &s)?;
        Ok(ModeEigen { slot, k1, xi1: grid.xi1(k1), eigen })
    }

    /// A single mode of frequency `ξ₁` on an `n`-point latitude grid,
    /// independent of any box length.
    pub fn at_xi1(profile: &CoriolisProfile, epsilon: f64, xi1: f64, n: usize) -> Result<Self> {
        let s = symmetric_generator(&sample_b(profile, n), &derivative_matrix(n), epsilon, xi1 / epsilon);
        let eigen = sym_eigen(3 * n, &s)?;
        Ok(ModeEigen { slot: 0, k1: 0, xi1, eigen })
    }

    /// Evolve `(ρ, u₁, u₂)` on this mode over unscaled time `t`.
    pub fn evolve_slot(&self, u: [&[C64]; 3], t: f64) -> [Vec<C64>; 3] {
        let slot: Vec<C64> = u.iter().flat_map(|c| c.iter().copied()).collect();
        let c = self.coefficients(&slot);
        let mut out = vec![C64::new(0.0, 0.0); slot.len()];
        self.synthesize(&c, t, &mut out);
        let n = slot.len() / 3;
        core::array::from_fn(|k| out[k * n..(k + 1) * n].to_vec())
    }

    /// `c = Vᵀ W* û`.
    pub fn coefficients(&self, slot: &[C64]) -> Vec<C64> {
        let n = self.eigen.n;
        let n2 = n / 3;
        let mut c = vec![C64::new(0.0, 0.0); n];
        for (i, u) in slot.iter().enumerate() {
            let z = block_phase(i / n2).conj() * u;
            if z == C64::new(0.0, 0.0) {
                continue;
            }
            for (cm, v) in c.iter_mut().zip(&self.eigen.vectors[i * n..(i + 1) * n]) {
                *cm += z * v;
            }
        }
        c
    }

    /// `û = W V diag(e^{−iλt}) c`, written into `out`.
    pub fn synthesize(&self, c: &[C64], t: f64, out: &mut [C64]) {
        let n = self.eigen.n;
        let n2 = n / 3;
        let w: Vec<C64> = c.iter().zip(&self.eigen.values).map(|(cm, l)| cm * C64::from_polar(1.0, -l * t)).collect();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.eigen.vectors[i * n..(i + 1) * n];
            let mut s = C64::new(0.0, 0.0);
            for (v, wm) in row.iter().zip(&w) {
                s += wm * v;
            }
            *o = block_phase(i / n2) * s;
        }
    }
}

/// Eigen-decompositions of a set of modes of one grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub grid: Grid2D,
    pub modes: Vec<ModeEigen>,
}

/// Eigen-coefficients of a field over the propagator's modes.
#[derive(Debug, Clone)]
pub struct ModeCoefficients {
    pub coeffs: Vec<Vec<C64>>,
    /// Energy fraction of the input in modes that are not propagated.
    pub dropped: f64,
}

impl Propagator {
    /// Decompose the given FFT slots in parallel.
    pub fn new(profile: &CoriolisProfile, grid: Grid2D, slots: &[usize]) -> Result<Self> {
        let b = sample_b(profile, grid.n2);
        let d = derivative_matrix(grid.n2);
        let modes = slots.par_iter().map(|&s| ModeEigen::compute(&b, &d, &grid, s)).collect::<Result<Vec<_>>>()?;
        Ok(Propagator { grid, modes })
    }

    /// Decompose every mode of `u` above `skip` relative energy.
    pub fn for_field(profile: &CoriolisProfile, u: &StateField, skip: f64) -> Result<Self> {
        Propagator::new(profile, u.grid, &u.to_modes().active_slots(skip))
    }

    pub fn decompose(&self, u: &StateField) -> ModeCoefficients {
        let spec = u.to_modes();
        let total: f64 = (0..self.grid.n1).map(|k| spec.slot_energy(k)).sum();
        let kept: f64 = self.modes.iter().map(|m| spec.slot_energy(m.slot)).sum();
        let coeffs = self.modes.par_iter().map(|m| m.coefficients(spec.slot(m.slot))).collect();
        let dropped = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
        ModeCoefficients { coeffs, dropped }
    }

    pub fn synthesize(&self, c: &ModeCoefficients, t: f64) -> StateField {
        let mut spec = ModeSpectrum::zeros(self.grid);
        let slots: Vec<Vec<C64>> = self
            .modes
            .par_iter()
            .zip(&c.coeffs)
            .map(|(m, cm)| {
                let mut out = vec![C64::new(0.0, 0.0); 3 * self.grid.n2];
                m.synthesize(cm, t, &mut out);
                out
            })
            .collect();
        for (m, s) in self.modes.iter().zip(slots) {
            spec.slot_mut(m.slot).copy_from_slice(&s);
        }
        spec.to_field(t)
    }

    /// `U(t) = e^{tA} U0` after the resolution check.
    pub fn evolve(&self, u0: &StateField, t: f64) -> Result<StateField> {
        u0.check_resolution()?;
        let c = self.decompose(u0);
        let mut u = self.synthesize(&c, t);
        u.time = u0.time + t;
        Ok(u)
    }

    /// Evolve to each time in turn, handing every state to `visit`.
    pub fn evolve_series(
        &self,
        u0: &StateField,
        times: &[f64],
        mut visit: impl FnMut(&StateField) -> Result<()>,
    ) -> Result<f64> {
        u0.check_resolution()?;
        let c = self.decompose(u0);
        for &t in times {
            let mut u = self.synthesize(&c, t);
            u.time = u0.time + t;
            visit(&u)?;
        }
        Ok(c.dropped)
    }

    /// Exact projection onto the eigen-subspace of one branch.
    pub fn project_branch(&self, u: &StateField, branch: Branch) -> StateField {
        let mut c = self.decompose(u);
        let n = self.grid.n2;
        for cm in &mut c.coeffs {
            for (m, v) in cm.iter_mut().enumerate() {
                if !branch.eigen_range(n).contains(&m) {
                    *v = C64::new(0.0, 0.0);
                }
            }
        }
        let mut out = self.synthesize(&c, 0.0);
        out.time = u.time;
        out
    }

    /// Share of `‖U‖²` carried by each branch, indexed by [`Branch::index`].
    pub fn branch_fractions(&self, u: &StateField) -> [f64; 3] {
        let c = self.decompose(u);
        let n = self.grid.n2;
        let mut e = [0.0; 3];
        for cm in &c.coeffs {
            for b in Branch::ALL {
                e[b.index()] += cm[b.eigen_range(n)].iter().map(|v| v.norm_sqr()).sum::<f64>();
            }
        }
        let total: f64 = e.iter().sum();
        if total > 0.0 {
            e.iter_mut().for_each(|v| *v /= total);
        }
        e
    }
}

/// One-shot evolution of a field over all its active modes.
pub fn evolve(profile: &CoriolisProfile, u0: &StateField, t: f64) -> Result<StateField> {
    Propagator::for_field(profile, u0, DEFAULT_SKIP)?.evolve(u0, t)
}
