//! Principal symbols: dispersion roots, mode matrix and the Rossby symbol `E`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat3::{self, Mat3};
use crate::math::{self, TAU};
use crate::phase::{Admissibility, PhasePoint};
use crate::profile::CoriolisProfile;

/// The three real roots of `τ³ − Kτ + εb′ξ₁ = 0`, `K = ξ₁² + ξ₂² + b²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoots {
    pub tau_minus: f64,
    pub tau_zero: f64,
    pub tau_plus: f64,
    pub epsilon: f64,
    /// `|τ³ − Kτ + q| / max(1, |τ|³)` for `(τ₋, τ₀, τ₊)`.
    pub residuals: [f64; 3],
}

impl DispersionRoots {
    pub fn as_array(&self) -> [f64; 3] {
        [self.tau_minus, self.tau_zero, self.tau_plus]
    }
}

/// Leading symbols of the reconstruction columns and their inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMatrix {
    /// Columns ordered `(−, 0, +)`; rows are `(ρ, u₁, u₂)`.
    pub q: Mat3,
    /// `q⁻¹`; row `j` is the projector symbol onto branch `j`.
    pub p: Mat3,
    /// `|det q|`.
    pub jacobian: f64,
}

impl ModeMatrix {
    /// Middle row of `p`: the Rossby projector symbol `(p⁰ᵨ, p⁰₁, p⁰₂)`.
    pub fn rossby_row(&self) -> [C64; 3] {
        self.p[1]
    }

    /// Column `j` of `q`.
    pub fn column(&self, j: usize) -> [C64; 3] {
        [self.q[0][j], self.q[1][j], self.q[2][j]]
    }
}

/// `K = ξ₁² + ξ₂² + b²`.
#[inline]
pub fn k_symbol(xi1: f64, xi2: f64, b: f64) -> f64 {
    xi1 * xi1 + xi2 * xi2 + b * b
}

fn cubic(tau: f64, k: f64, q: f64) -> f64 {
    tau * (tau * tau - k) + q
}

fn residual(tau: f64, k: f64, q: f64) -> f64 {
    cubic(tau, k, q).abs() / (tau.abs() * tau * tau).max(1.0)
}

fn polish(tau: f64, k: f64, q: f64) -> f64 {
    let d = 3.0 * tau * tau - k;
    if d == 0.0 {
        tau
    } else {
        tau - cubic(tau, k, q) / d
    }
}

/// Roots of the dispersion cubic at `pt` and semiclassical parameter `epsilon`.
pub fn dispersion_roots(profile: &CoriolisProfile, pt: &PhasePoint, epsilon: f64) -> Result<DispersionRoots> {
    dispersion_roots_with(profile, pt, epsilon, &Admissibility::default())
}

pub fn dispersion_roots_with(
    profile: &CoriolisProfile,
    pt: &PhasePoint,
    epsilon: f64,
    adm: &Admissibility,
) -> Result<DispersionRoots> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be non-negative"));
    }
    adm.check(profile, pt)?;
    let v = profile.eval(pt.x2);
    let k = k_symbol(pt.xi1, pt.xi2, v.b);
    let q = epsilon * v.db * pt.xi1;
    roots_kq(k, q, epsilon)
}

/// Roots of `τ³ − kτ + q` for `k > 0`.
pub fn roots_kq(k: f64, q: f64, epsilon: f64) -> Result<DispersionRoots> {
    if q == 0.0 {
        let s = math::sqrt(k);
        return Ok(DispersionRoots {
            tau_minus: -s,
            tau_zero: 0.0,
            tau_plus: s,
            epsilon,
            residuals: [residual(-s, k, 0.0), 0.0, residual(s, k, 0.0)],
        });
    }
    let disc = 4.0 * k * k * k - 27.0 * q * q;
    if !(disc > 0.0) {
        return Err(Error::DegenerateRoots { discriminant: disc });
    }
    let r = 2.0 * math::sqrt(k / 3.0);
    let c = (-1.5 * q / k * math::sqrt(3.0 / k)).clamp(-1.0, 1.0);
    let phi = math::acos(c) / 3.0;
    let mut t = [0.0; 3];
    for (i, ti) in t.iter_mut().enumerate() {
        *ti = polish(r * math::cos(phi - TAU * i as f64 / 3.0), k, q);
    }
    t.sort_by(|a, b| a.total_cmp(b));
    // the small root loses relative accuracy in the trigonometric form
    let mut t0 = t[1];
    for _ in 0..3 {
        t0 = polish(t0, k, q);
    }
    t[1] = t0;
    Ok(DispersionRoots {
        tau_minus: t[0],
        tau_zero: t[1],
        tau_plus: t[2],
        epsilon,
        residuals: [residual(t[0], k, q), residual(t[1], k, q), residual(t[2], k, q)],
    })
}

/// Column of the reconstruction symbol for root `tau` (requires `τ² ≠ ξ₁²`).
pub fn mode_column(xi1: f64, xi2: f64, b: f64, tau: f64) -> [C64; 3] {
    let den = tau * tau - xi1 * xi1;
    [
        C64::new(-xi2 * tau, xi1 * b) / den,
        C64::new(xi1 * xi2, -b * tau) / den,
        C64::new(1.0, 0.0),
    ]
}

fn assemble(xi1: f64, xi2: f64, b: f64, taus: [f64; 3]) -> ModeMatrix {
    let mut q = [[mat3::ZERO; 3]; 3];
    for (j, &tau) in taus.iter().enumerate() {
        let col = mode_column(xi1, xi2, b, tau);
        for i in 0..3 {
            q[i][j] = col[i];
        }
    }
    let p = mat3::inverse(&q).expect("admissible mode matrix is invertible");
    ModeMatrix { q, p, jacobian: mat3::det(&q).norm() }
}

/// Principal mode matrix (`τ = ±√K, 0`).
pub fn mode_matrix(profile: &CoriolisProfile, pt: &PhasePoint) -> Result<ModeMatrix> {
    mode_matrix_with(profile, pt, &Admissibility::default())
}

pub fn mode_matrix_with(profile: &CoriolisProfile, pt: &PhasePoint, adm: &Admissibility) -> Result<ModeMatrix> {
    adm.check(profile, pt)?;
    let b = profile.eval(pt.x2).b;
    let s = math::sqrt(k_symbol(pt.xi1, pt.xi2, b));
    Ok(assemble(pt.xi1, pt.xi2, b, [-s, 0.0, s]))
}

/// Mode matrix built from the exact roots at `epsilon`.
pub fn mode_matrix_at(profile: &CoriolisProfile, pt: &PhasePoint, epsilon: f64) -> Result<ModeMatrix> {
    let r = dispersion_roots(profile, pt, epsilon)?;
    let b = profile.eval(pt.x2).b;
    Ok(assemble(pt.xi1, pt.xi2, b, r.as_array()))
}

/// Closed form of `|det q|` for the principal matrix.
pub fn jacobian_closed_form(xi1: f64, xi2: f64, b: f64) -> f64 {
    let k = k_symbol(xi1, xi2, b);
    2.0 * k * math::sqrt(k) / ((xi2 * xi2 + b * b) * xi1.abs())
}

/// `E = b′ξ₁ / (ξ₁² + ξ₂² + b²)` at an admissible point.
pub fn rossby_symbol_e(profile: &CoriolisProfile, pt: &PhasePoint) -> Result<f64> {
    Admissibility::default().check(profile, pt)?;
    Ok(rossby_gradient(profile, pt.xi1, pt.x2, pt.xi2).e)
}

/// `E` and its first partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RossbyGradient {
    pub e: f64,
    pub d_xi1: f64,
    pub d_x2: f64,
    pub d_xi2: f64,
}

/// `E` with `∂ξ₁E`, `∂x₂E`, `∂ξ₂E`; no admissibility check beyond `K > 0`.
pub fn rossby_gradient(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> RossbyGradient {
    let v = profile.eval(x2);
    let k = k_symbol(xi1, xi2, v.b);
    let k2 = k * k;
    RossbyGradient {
        e: v.db * xi1 / k,
        d_xi1: v.db * (xi2 * xi2 - xi1 * xi1 + v.b * v.b) / k2,
        d_x2: xi1 * (v.d2b * k - 2.0 * v.b * v.db * v.db) / k2,
        d_xi2: -2.0 * v.db * xi1 * xi2 / k2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    #[test]
    fn epsilon_zero_roots_are_exact() {
        let p = CoriolisProfile::sin();
        let pt = PhasePoint::new(0.0, 0.7, 1.3, -0.4);
        let r = dispersion_roots(&p, &pt, 0.0).unwrap();
        let k = k_symbol(1.3, -0.4, libm::sin(0.7));
        assert_eq!(r.tau_zero, 0.0);
        assert_eq!(r.tau_plus, libm::sqrt(k));
        assert_eq!(r.tau_minus, -libm::sqrt(k));
    }

    #[test]
    fn flat_latitude_kills_epsilon_term() {
        let p = CoriolisProfile::sin();
        let pt = PhasePoint::new(0.0, PI / 2.0, 1.0, 1.0);
        // b′(π/2) is ~6e-17, not exactly zero, so τ₀ is at roundoff level
        let r = dispersion_roots(&p, &pt, 0.3).unwrap();
        assert!(r.tau_zero.abs() < 1e-16);
    }

    #[test]
    fn mode_matrix_reference_values() {
        let p = CoriolisProfile::sin();
        let pt = PhasePoint::new(0.0, PI / 2.0, 1.0, 0.0);
        let m = mode_matrix(&p, &pt).unwrap();
        assert!((m.jacobian - 4.0 * core::f64::consts::SQRT_2).abs() < 1e-12);
        let row = m.rossby_row();
        assert!((row[0] - C64::new(0.0, 0.5)).norm() < 1e-14);
        assert!(row[1].norm() < 1e-14);
        assert!((row[2] - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn columns_are_null_vectors_of_principal_symbol() {
        // (iτ + σ) v = 0 with σ = [[0, iξ₁, iξ₂], [iξ₁, 0, −b], [iξ₂, b, 0]]
        let p = CoriolisProfile::two_plus_sin();
        let pt = PhasePoint::new(0.0, 1.1, -0.8, 0.6);
        let m = mode_matrix(&p, &pt).unwrap();
        let b = p.eval(pt.x2).b;
        let i = C64::new(0.0, 1.0);
        let sigma = [
            [mat3::ZERO, i * pt.xi1, i * pt.xi2],
            [i * pt.xi1, mat3::ZERO, C64::from(-b)],
            [i * pt.xi2, C64::from(b), mat3::ZERO],
        ];
        let s = libm::sqrt(k_symbol(pt.xi1, pt.xi2, b));
        for (j, tau) in [-s, 0.0, s].into_iter().enumerate() {
            let v = m.column(j);
            let w = mat3::apply(&sigma, &v);
            for c in 0..3 {
                assert!((w[c] + i * tau * v[c]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = CoriolisProfile::two_plus_sin();
        let (xi1, x2, xi2) = (0.9, 0.4, -0.3);
        let g = rossby_gradient(&p, xi1, x2, xi2);
        let h = 1e-6;
        let e = |a: f64, b: f64, c: f64| rossby_gradient(&p, a, b, c).e;
        assert!((g.d_xi1 - (e(xi1 + h, x2, xi2) - e(xi1 - h, x2, xi2)) / (2.0 * h)).abs() < 1e-8);
        assert!((g.d_x2 - (e(xi1, x2 + h, xi2) - e(xi1, x2 - h, xi2)) / (2.0 * h)).abs() < 1e-8);
        assert!((g.d_xi2 - (e(xi1, x2, xi2 + h) - e(xi1, x2, xi2 - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn inadmissible_points_rejected() {
        let p = CoriolisProfile::sin();
        assert!(mode_matrix(&p, &PhasePoint::new(0.0, 0.5, 0.0, 0.1)).is_err());
        assert!(mode_matrix(&p, &PhasePoint::new(0.0, 0.0, 1.0, 0.0)).is_err());
        assert!(rossby_symbol_e(&p, &PhasePoint::new(0.0, 0.0, 1e-4, 0.5)).is_err());
    }
}
