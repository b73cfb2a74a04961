//! Quantized projectors `𝐏ʲ` and reconstructions `𝐐ʲ` of the three branches.
//!
//! On each `x₁`-mode the principal projector symbol `p⁰ = (q⁰)⁻¹` and the
//! reconstruction columns are left-quantized in `x₂`. The Rossby column uses
//! the corrected root `τ₀ ≈ εE`; the Poincaré columns use `±√K`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rossbytrap_core::symbols::{k_symbol, mode_column, mode_matrix, rossby_gradient};
use rossbytrap_core::{Admissibility, CoriolisProfile, PhasePoint};

use crate::error::{Result, WaveError};
use crate::field::{ScalarField, StateField};
use crate::grid::Grid2D;
use crate::propagator::Branch;
use crate::quant::{matvec_add, quantize_many};

/// Largest share of the mass allowed on modes with `|ξ₁|` below the
/// admissibility margin.
pub const INADMISSIBLE_LIMIT: f64 = 1e-3;

/// Modes below this relative energy are neither projected nor rebuilt.
pub const MODE_SKIP: f64 = 1e-28;

/// Projector rows `p⁰ⱼ_c(x₂, ξ₂)` at fixed `ξ₁`, indexed `[3j + c]`.
pub fn projector_symbol(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> Result<[C64; 9]> {
    let m = mode_matrix(profile, &PhasePoint::new(0.0, x2, xi1, xi2))?;
    Ok(core::array::from_fn(|k| m.p[k / 3][k % 3]))
}

/// Reconstruction entries `q_c^j(x₂, ξ₂)` at fixed `ξ₁`, indexed `[3j + c]`.
pub fn reconstruction_symbol(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64, epsilon: f64) -> Result<[C64; 9]> {
    Admissibility::default().check(profile, &PhasePoint::new(0.0, x2, xi1, xi2))?;
    let b = profile.eval(x2).b;
    let s = k_symbol(xi1, xi2, b).sqrt();
    let t0 = epsilon * rossby_gradient(profile, xi1, x2, xi2).e;
    let cols = [mode_column(xi1, xi2, b, -s), mode_column(xi1, xi2, b, t0), mode_column(xi1, xi2, b, s)];
    Ok(core::array::from_fn(|k| cols[k / 3][k % 3]))
}

/// Quantized projector rows of one mode: `u₂ʲ = Σ_c P[3j+c] U_c`.
#[derive(Debug, Clone)]
pub struct Projector {
    pub n: usize,
    pub xi1: f64,
    pub blocks: [Vec<C64>; 9],
}

/// Quantized reconstruction columns of one mode: `U_c = Σⱼ Q[3j+c] u₂ʲ`.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub n: usize,
    pub xi1: f64,
    pub blocks: [Vec<C64>; 9],
}

impl Projector {
    pub fn new(profile: &CoriolisProfile, epsilon: f64, xi1: f64, n: usize) -> Result<Self> {
        let blocks = quantize_many(n, epsilon, |x2, xi2| projector_symbol(profile, xi1, x2, xi2))?;
        Ok(Projector { n, xi1, blocks })
    }

    /// `(u₂⁻, u₂⁰, u₂⁺)` from `(ρ, u₁, u₂)` on the `x₂` grid.
    pub fn project(&self, u: [&[C64]; 3]) -> [Vec<C64>; 3] {
        core::array::from_fn(|j| {
            let mut y = vec![C64::new(0.0, 0.0); self.n];
            for (c, uc) in u.iter().enumerate() {
                matvec_add(self.n, &self.blocks[3 * j + c], uc, &mut y);
            }
            y
        })
    }
}

impl Reconstruction {
    pub fn new(profile: &CoriolisProfile, epsilon: f64, xi1: f64, n: usize) -> Result<Self> {
        let blocks = quantize_many(n, epsilon, |x2, xi2| reconstruction_symbol(profile, xi1, x2, xi2, epsilon))?;
        Ok(Reconstruction { n, xi1, blocks })
    }

    /// `𝐐ʲ u₂ʲ` as `(ρ, u₁, u₂)`.
    pub fn reconstruct(&self, branch: Branch, u2j: &[C64]) -> [Vec<C64>; 3] {
        let j = branch.index();
        core::array::from_fn(|c| {
            let mut y = vec![C64::new(0.0, 0.0); self.n];
            matvec_add(self.n, &self.blocks[3 * j + c], u2j, &mut y);
            y
        })
    }
}

/// Slots to process and the mass share on inadmissible modes.
fn admissible_slots(grid: &Grid2D, energy: &[f64]) -> Result<Vec<usize>> {
    let total: f64 = energy.iter().sum();
    if total == 0.0 {
        return Ok(Vec::new());
    }
    let delta = Admissibility::default().delta_xi1;
    let mut bad = 0.0;
    let mut slots = Vec::new();
    for (k, &e) in energy.iter().enumerate() {
        if grid.xi1(grid.k1_of_slot(k)).abs() < delta {
            bad += e;
        } else if e > MODE_SKIP * total {
            slots.push(k);
        }
    }
    let fraction = bad / total;
    if fraction > INADMISSIBLE_LIMIT {
        return Err(WaveError::Admissibility { fraction, limit: INADMISSIBLE_LIMIT });
    }
    Ok(slots)
}

/// `u₂ʲ = 𝐏ʲU` for `j = −, 0, +`, mode by mode.
pub fn project_modes(profile: &CoriolisProfile, u: &StateField) -> Result<[ScalarField; 3]> {
    let g = u.grid;
    let spec = u.to_modes();
    let energy: Vec<f64> = (0..g.n1).map(|k| spec.slot_energy(k)).collect();
    let slots = admissible_slots(&g, &energy)?;
    let parts = slots
        .par_iter()
        .map(|&k| {
            let p = Projector::new(profile, g.epsilon, g.xi1(g.k1_of_slot(k)), g.n2)?;
            let s = spec.slot(k);
            Ok(p.project([&s[..g.n2], &s[g.n2..2 * g.n2], &s[2 * g.n2..]]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coeffs = [vec![C64::new(0.0, 0.0); g.n1 * g.n2], vec![C64::new(0.0, 0.0); g.n1 * g.n2], vec![C64::new(0.0, 0.0); g.n1 * g.n2]];
    for (&k, part) in slots.iter().zip(parts) {
        for (cj, pj) in coeffs.iter_mut().zip(part) {
            cj[k * g.n2..(k + 1) * g.n2].copy_from_slice(&pj);
        }
    }
    Ok(coeffs.map(|c| ScalarField::from_modes(g, &c)))
}

/// `𝐐ʲ u₂ʲ` as a state field.
pub fn reconstruct_mode(profile: &CoriolisProfile, u2j: &ScalarField, branch: Branch) -> Result<StateField> {
    let g = u2j.grid;
    let modes = u2j.to_modes();
    let energy: Vec<f64> = (0..g.n1).map(|k| modes[k * g.n2..(k + 1) * g.n2].iter().map(|v| v.norm_sqr()).sum()).collect();
    let slots = admissible_slots(&g, &energy)?;
    let parts = slots
        .par_iter()
        .map(|&k| {
            let q = Reconstruction::new(profile, g.epsilon, g.xi1(g.k1_of_slot(k)), g.n2)?;
            Ok(q.reconstruct(branch, &modes[k * g.n2..(k + 1) * g.n2]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spec = crate::field::ModeSpectrum::zeros(g);
    for (&k, part) in slots.iter().zip(parts) {
        let s = spec.slot_mut(k);
        for (c, pc) in part.iter().enumerate() {
            s[c * g.n2..(c + 1) * g.n2].copy_from_slice(pc);
        }
    }
    Ok(spec.to_field(0.0))
}
