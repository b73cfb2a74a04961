//! Poincaré-mode spectra: direct eigenvalues of the quantized
//! `H₂ = (−iε∂₂)² + b²` against Bohr–Sommerfeld levels, and the residual of
//! the full scalar symbol on eigenpairs of `T₊ = √(H₂ + ξ₁²)`.

use num_complex::Complex64 as C64;
use rossbytrap_core::bohr::Well;
use rossbytrap_core::quad::Quadrature;
use rossbytrap_core::{CoriolisProfile, Error as CoreError};

use crate::error::Result;
use crate::linalg::sym_eigen;
use crate::propagator::Branch;
use crate::quant::{matvec, quantize_many};

/// Quantized `H₂` as a real symmetric row-major matrix.
pub fn h2_matrix(profile: &CoriolisProfile, epsilon: f64, n: usize) -> Result<Vec<f64>> {
    let [m] = quantize_many(n, epsilon, |x2, xi2| {
        let b = profile.eval(x2).b;
        Ok([C64::new(xi2 * xi2 + b * b, 0.0)])
    })?;
    let mut h = vec![0.0; n * n];
    for j in 0..n {
        for k in 0..n {
            h[j * n + k] = 0.5 * (m[j * n + k].re + m[k * n + j].re);
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub k: usize,
    pub lambda_direct: f64,
    pub lambda_bs: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub branch: Branch,
    pub xi1: f64,
    pub epsilon: f64,
    pub rows: Vec<SpectrumRow>,
}

/// Direct and Bohr–Sommerfeld levels `k = 0 … count−1` of the deepest well.
pub fn bohr_sommerfeld_levels(
    profile: &CoriolisProfile,
    xi1: f64,
    epsilon: f64,
    n: usize,
    count: usize,
    branch: Branch,
) -> Result<SpectrumTable> {
    let quad = Quadrature::default();
    let well = Well::locate(profile)?;
    let e = sym_eigen(n, &h2_matrix(profile, epsilon, n)?)?;
    let mut rows = Vec::with_capacity(count);
    for k in 0..count {
        let direct = e.values[k];
        if direct >= well.barrier {
            return Err(CoreError::WindowError { level: direct, barrier: well.barrier }.into());
        }
        let bs = well.level(profile, k, epsilon, &quad)?;
        rows.push(SpectrumRow { k, lambda_direct: direct, lambda_bs: bs, diff: direct - bs });
    }
    Ok(SpectrumTable { branch, xi1, epsilon, rows })
}

/// Scaling of the level mismatch over an `ε`-sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedFit {
    /// Fitted `μₖ` in `diff ≈ μₖε + cₖε²`.
    pub shift: Vec<f64>,
    /// `maxₖ |diff|` per table.
    pub raw_error: Vec<f64>,
    /// `maxₖ |diff − μₖε|` per table.
    pub shifted_error: Vec<f64>,
    /// Log-log slopes of the two errors across the last two `ε`.
    pub raw_slope: f64,
    pub shifted_slope: f64,
}

/// Fit `diff/ε = μₖ + cₖε` by least squares per level and measure the
/// remaining mismatch.
pub fn fit_level_shift(tables: &[SpectrumTable]) -> ShiftedFit {
    assert!(tables.len() >= 2);
    let kmax = tables.iter().map(|t| t.rows.len()).min().unwrap_or(0);
    let shift: Vec<f64> = (0..kmax)
        .map(|k| {
            let pts: Vec<(f64, f64)> = tables.iter().map(|t| (t.epsilon, t.rows[k].diff / t.epsilon)).collect();
            let n = pts.len() as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
            let (mx, my) = (sx / n, sy / n);
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            my - (sxy / sxx) * mx
        })
        .collect();
    let raw_error: Vec<f64> = tables.iter().map(|t| t.rows[..kmax].iter().map(|r| r.diff.abs()).fold(0.0, f64::max)).collect();
    let shifted_error: Vec<f64> = tables
        .iter()
        .map(|t| t.rows[..kmax].iter().zip(&shift).map(|(r, mu)| (r.diff - mu * t.epsilon).abs()).fold(0.0, f64::max))
        .collect();
    let m = tables.len();
    let slope = |e: &[f64]| (e[m - 2] / e[m - 1]).ln() / (tables[m - 2].epsilon / tables[m - 1].epsilon).ln();
    ShiftedFit { raw_slope: slope(&raw_error), shifted_slope: slope(&shifted_error), shift, raw_error, shifted_error }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualEntry {
    pub k: usize,
    pub lambda: f64,
    /// `‖H(λ)ψ‖ / ‖ψ‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub xi1: f64,
    pub epsilon: f64,
    /// Offset added to `λ` before applying the symbol.
    pub shift: f64,
    pub entries: Vec<ResidualEntry>,
    pub max_residual: f64,
}

/// Apply the quantized `h(x₂, ξ₂, λ) = λ² − ξ₁² − ξ₂² − b² + εb′ξ₁/λ` to the
/// lowest `count` eigenpairs `(λ, ψ)` of `T₊`.
pub fn scalar_residual_check(
    profile: &CoriolisProfile,
    xi1: f64,
    epsilon: f64,
    n: usize,
    count: usize,
    shift: f64,
) -> Result<ResidualReport> {
    let e = sym_eigen(n, &h2_matrix(profile, epsilon, n)?)?;
    let mut entries = Vec::with_capacity(count);
    for k in 0..count {
        let lambda = (e.values[k] + xi1 * xi1).sqrt() + shift;
        let psi: Vec<C64> = (0..n).map(|j| C64::new(e.vectors[j * n + k], 0.0)).collect();
        let [h] = quantize_many(n, epsilon, |x2, xi2| {
            let v = profile.eval(x2);
            let s = lambda * lambda - xi1 * xi1 - xi2 * xi2 - v.b * v.b + epsilon * v.db * xi1 / lambda;
            Ok([C64::new(s, 0.0)])
        })?;
        let r = matvec(n, &h, &psi);
        let num: f64 = r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        entries.push(ResidualEntry { k, lambda, residual: num / den });
    }
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    Ok(ResidualReport { xi1, epsilon, shift, entries, max_residual })
}
