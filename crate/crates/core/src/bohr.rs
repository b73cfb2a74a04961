//! Bohr–Sommerfeld levels of `H₂ = (−iε∂₂)² + b(x₂)²` in a single well of `b²`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};
use crate::profile::CoriolisProfile;
use crate::quad::Quadrature;
use crate::roots::{bisect, brent};

/// The well of `V = b²` around its global minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well {
    pub x_min: f64,
    pub v_min: f64,
    /// `V″(x_min) = 2(b′² + b b″)`.
    pub curvature: f64,
    /// Lower of the two neighbouring maxima of `V`.
    pub barrier: f64,
}

fn potential(profile: &CoriolisProfile, x: f64) -> f64 {
    let b = profile.eval(x).b;
    b * b
}

impl Well {
    /// The unique global well; two minima at equal depth are rejected.
    pub fn locate(profile: &CoriolisProfile) -> Result<Self> {
        let mut crit: Vec<f64> = profile.zeros_of_b().to_vec();
        crit.extend_from_slice(profile.zeros_of_bprime());
        crit.sort_by(|a, b| a.total_cmp(b));
        crit.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        if crit.len() < 2 {
            return Err(Error::InvalidProfile("profile has no well"));
        }
        let vals: Vec<f64> = crit.iter().map(|&x| potential(profile, x)).collect();
        let vmin = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let minima: Vec<usize> = (0..crit.len()).filter(|&i| vals[i] <= vmin + 1e-12 * (1.0 + vmin)).collect();
        if minima.len() != 1 {
            return Err(Error::WindowError { level: vmin, barrier: vmin });
        }
        let i = minima[0];
        let n = crit.len();
        let left = vals[(i + n - 1) % n];
        let right = vals[(i + 1) % n];
        let x = crit[i];
        let v = profile.eval(x);
        Ok(Well {
            x_min: x,
            v_min: vals[i],
            curvature: 2.0 * (v.db * v.db + v.b * v.d2b),
            barrier: left.min(right),
        })
    }

    /// Harmonic-oscillator levels of the quadratic model `V_min + ½V″u²`:
    /// `V_min + (2k+1) ε √(V″/2)`.
    pub fn harmonic_level(&self, k: usize, epsilon: f64) -> f64 {
        self.v_min + (2 * k + 1) as f64 * epsilon * math::sqrt(0.5 * self.curvature)
    }

    /// Classical turning points `λ = V(x)` on either side of the minimum.
    pub fn turning_points(&self, profile: &CoriolisProfile, lambda: f64) -> Result<(f64, f64)> {
        if !(lambda > self.v_min) {
            return Ok((self.x_min, self.x_min));
        }
        if lambda >= self.barrier {
            return Err(Error::WindowError { level: lambda, barrier: self.barrier });
        }
        let f = |x: f64| lambda - potential(profile, x);
        let steps = 4096;
        let h = TAU / steps as f64;
        let find = |dir: f64| -> Result<f64> {
            for i in 1..=steps {
                let a = self.x_min + dir * h * (i - 1) as f64;
                let b = self.x_min + dir * h * i as f64;
                if f(b) <= 0.0 {
                    return bisect(f, a.min(b), a.max(b), 1e-15).ok_or(Error::WindowError { level: lambda, barrier: self.barrier });
                }
            }
            Err(Error::WindowError { level: lambda, barrier: self.barrier })
        };
        Ok((find(-1.0)?, find(1.0)?))
    }

    /// `(1/2π)∮ξ₂dx₂ = (1/π)∫√(λ − V)` over the classically allowed interval.
    pub fn action(&self, profile: &CoriolisProfile, lambda: f64, quad: &Quadrature) -> Result<f64> {
        let (a, b) = self.turning_points(profile, lambda)?;
        if a == b {
            return Ok(0.0);
        }
        let integral = quad.integrate_endpoint_singular(a, b, |x, s, _| {
            let d = lambda - potential(profile, x);
            if d > 0.0 {
                math::sqrt(d) * s
            } else {
                0.0
            }
        })?;
        Ok(integral / PI)
    }

    /// Solve `action(λ) = (k + ½)ε`.
    pub fn level(&self, profile: &CoriolisProfile, k: usize, epsilon: f64, quad: &Quadrature) -> Result<f64> {
        let target = (k as f64 + 0.5) * epsilon;
        let top = self.v_min + (1.0 - 1e-9) * (self.barrier - self.v_min);
        let a_top = self.action(profile, top, quad)?;
        if a_top <= target {
            return Err(Error::WindowError { level: top, barrier: self.barrier });
        }
        let tol = 1e-14 * (1.0 + self.barrier);
        brent(|l| Ok::<_, Error>(self.action(profile, l, quad)? - target), self.v_min, top, tol)?
            .ok_or(Error::WindowError { level: top, barrier: self.barrier })
    }
}
