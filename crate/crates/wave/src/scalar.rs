//! Scalar Rossby propagation on one `x₁`-mode.
//!
//! The Rossby root of the dispersion relation solves `τ(ξ₁² + H₂) = εb′ξ₁`
//! to leading order, so the slow branch of a mode is the generalized
//! eigenproblem `ξ₁ diag(b′) c = τ (ξ₁² + H₂) c` with `H₂ = −ε²D² + b²`.
//! A scalar datum evolves as `u(s) = Σ e^{iτs} cₘ wₘ` in unscaled time.

use num_complex::Complex64 as C64;
use rossbytrap_core::CoriolisProfile;

use crate::error::Result;
use crate::generator::sample_b;
use crate::linalg::generalized_diag_eigen;
use crate::spectral::{derivative_matrix, h2_from_derivative};

#[derive(Debug, Clone)]
pub struct ScalarRossby {
    pub n: usize,
    pub epsilon: f64,
    pub xi1: f64,
    /// Ascending generalized eigenvalues.
    pub tau: Vec<f64>,
    /// Row-major; columns are `B`-orthonormal eigenvectors.
    w: Vec<f64>,
    /// `ξ₁² + H₂`, row-major.
    b: Vec<f64>,
}

impl ScalarRossby {
    pub fn new(profile: &CoriolisProfile, epsilon: f64, xi1: f64, n: usize) -> Result<Self> {
        let h = std::f64::consts::TAU / n as f64;
        let bx = sample_b(profile, n);
        let bp: Vec<f64> = (0..n).map(|j| xi1 * profile.eval(j as f64 * h).db).collect();
        let d = derivative_matrix(n);
        let mut b = h2_from_derivative(&d, &bx, epsilon);
        for j in 0..n {
            b[j * n + j] += xi1 * xi1;
        }
        let (tau, w) = generalized_diag_eigen(n, &bp, &b)?;
        Ok(ScalarRossby { n, epsilon, xi1, tau, w, b })
    }

    /// Evolve `u0` over unscaled time `s`.
    pub fn evolve(&self, u0: &[C64], s: f64) -> Vec<C64> {
        let n = self.n;
        // c = Wᵀ B u0
        let bu: Vec<C64> = (0..n).map(|j| self.b[j * n..(j + 1) * n].iter().zip(u0).map(|(a, u)| u * a).sum()).collect();
        let mut c = vec![C64::new(0.0, 0.0); n];
        for (j, v) in bu.iter().enumerate() {
            for (cm, w) in c.iter_mut().zip(&self.w[j * n..(j + 1) * n]) {
                *cm += v * w;
            }
        }
        for (cm, t) in c.iter_mut().zip(&self.tau) {
            *cm *= C64::from_polar(1.0, t * s);
        }
        (0..n).map(|j| self.w[j * n..(j + 1) * n].iter().zip(&c).map(|(w, cm)| cm * w).sum()).collect()
    }
}
