//! Collocation grid on the periodic box `[0, L1) × 𝕋`.

use std::f64::consts::TAU;

use crate::error::{Result, WaveError};

/// Points per `ε`-wavelength required in each direction.
pub const POINTS_PER_WAVELENGTH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub l1: f64,
    pub n1: usize,
    pub n2: usize,
    pub epsilon: f64,
}

impl Grid2D {
    /// Validated grid: powers of two and `N1 ≥ 8·L1/(2πε)`, `N2 ≥ 8/ε`.
    pub fn new(l1: f64, n1: usize, n2: usize, epsilon: f64) -> Result<Self> {
        let g = Grid2D::unchecked(l1, n1, n2, epsilon)?;
        let (m1, m2) = Grid2D::required(l1, epsilon);
        if (n1 as f64) < m1 - 1e-9 || (n2 as f64) < m2 - 1e-9 {
            return Err(WaveError::Grid(format!("need N1 ≥ {m1}, N2 ≥ {m2}; got {n1}×{n2}")));
        }
        Ok(g)
    }

    /// Grid without the resolution condition, for small structural tests.
    pub fn unchecked(l1: f64, n1: usize, n2: usize, epsilon: f64) -> Result<Self> {
        if !(l1 > 0.0 && l1.is_finite()) {
            return Err(WaveError::Grid(format!("box length {l1} must be positive")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(WaveError::Grid(format!("epsilon {epsilon} must be positive")));
        }
        if !n1.is_power_of_two() || !n2.is_power_of_two() || n1 < 2 || n2 < 4 {
            return Err(WaveError::Grid(format!("sizes {n1}×{n2} must be powers of two")));
        }
        Ok(Grid2D { l1, n1, n2, epsilon })
    }

    /// Smallest valid grid for `(L1, ε)`.
    pub fn minimal(l1: f64, epsilon: f64) -> Result<Self> {
        let (m1, m2) = Grid2D::required(l1, epsilon);
        let up = |m: f64| ((m - 1e-9).ceil().max(4.0) as usize).next_power_of_two();
        Grid2D::new(l1, up(m1), up(m2), epsilon)
    }

    fn required(l1: f64, epsilon: f64) -> (f64, f64) {
        (POINTS_PER_WAVELENGTH * l1 / (TAU * epsilon), POINTS_PER_WAVELENGTH / epsilon)
    }

    pub fn h1(&self) -> f64 {
        self.l1 / self.n1 as f64
    }

    pub fn h2(&self) -> f64 {
        TAU / self.n2 as f64
    }

    pub fn x1(&self, i: usize) -> f64 {
        i as f64 * self.h1()
    }

    pub fn x2(&self, j: usize) -> f64 {
        j as f64 * self.h2()
    }

    pub fn len(&self) -> usize {
        3 * self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed integer frequency of FFT slot `k` in `x₁`.
    pub fn k1_of_slot(&self, k: usize) -> i64 {
        signed_frequency(k, self.n1)
    }

    /// FFT slot of the signed frequency `k1`.
    pub fn slot_of_k1(&self, k1: i64) -> usize {
        k1.rem_euclid(self.n1 as i64) as usize
    }

    /// `κ = 2πk₁/L1`.
    pub fn kappa(&self, k1: i64) -> f64 {
        TAU * k1 as f64 / self.l1
    }

    /// Semiclassical frequency `ξ₁ = εκ`.
    pub fn xi1(&self, k1: i64) -> f64 {
        self.epsilon * self.kappa(k1)
    }

    /// Nearest lattice value of `ξ₁` and its frequency.
    pub fn snap_xi1(&self, xi1: f64) -> (i64, f64) {
        let k1 = (xi1 / (self.epsilon * TAU / self.l1)).round() as i64;
        (k1, self.xi1(k1))
    }

    /// Nearest lattice value `εn` of `ξ₂`.
    pub fn snap_xi2(&self, xi2: f64) -> (i64, f64) {
        let n = (xi2 / self.epsilon).round() as i64;
        (n, n as f64 * self.epsilon)
    }
}

/// Signed frequency in FFT ordering; the Nyquist slot maps to `+N/2`.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
