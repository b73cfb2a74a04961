//! Phase-space points of `T*(ℝ × 𝕋)` and the admissible region.

use crate::error::{Error, Result};
use crate::profile::CoriolisProfile;

/// A point `(x₁, x₂; ξ₁, ξ₂)`; `x₂` is an angle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub x1: f64,
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl PhasePoint {
    pub const fn new(x1: f64, x2: f64, xi1: f64, xi2: f64) -> Self {
        PhasePoint { x1, x2, xi1, xi2 }
    }
}

/// Margins defining the admissible region `|ξ₁| ≥ δ_ξ1`, `ξ₂² + b² ≥ δ_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub delta_xi1: f64,
    pub delta_b: f64,
}

impl Default for Admissibility {
    fn default() -> Self {
        Admissibility { delta_xi1: 1e-3, delta_b: 1e-3 }
    }
}

impl Admissibility {
    /// No margin beyond exact singularity.
    pub const STRICT: Admissibility = Admissibility { delta_xi1: 0.0, delta_b: 0.0 };

    pub fn admits(&self, profile: &CoriolisProfile, pt: &PhasePoint) -> bool {
        self.admits_xi(profile, pt.x2, pt.xi1, pt.xi2)
    }

    pub fn admits_xi(&self, profile: &CoriolisProfile, x2: f64, xi1: f64, xi2: f64) -> bool {
        let b = profile.eval(x2).b;
        let lower = xi2 * xi2 + b * b;
        xi1.abs() >= self.delta_xi1 && xi1 != 0.0 && lower >= self.delta_b && lower > 0.0
    }

    pub fn check(&self, profile: &CoriolisProfile, pt: &PhasePoint) -> Result<()> {
        if self.admits(profile, pt) {
            Ok(())
        } else {
            Err(Error::Inadmissible { xi1: pt.xi1, x2: pt.x2, xi2: pt.xi2 })
        }
    }
}
