//! Action variables of the librating families and the action-angle form of
//! the drift, `F = 2π ∂ξ₁H / ∂_A H`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, TAU};
use crate::orbit::{elliptic_points, nearest_elliptic, unwrap_near, EllipticPoint, Libration};
use crate::phase::PhasePoint;
use crate::profile::CoriolisProfile;
use crate::quad::Quadrature;

/// A family of nested orbits at fixed `ξ₁` around one elliptic point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitFamily {
    pub xi1: f64,
    pub centre: EllipticPoint,
}

impl OrbitFamily {
    /// Family around the elliptic point of largest `|E|` with the sign of `sign`.
    pub fn principal(profile: &CoriolisProfile, xi1: f64, sign: f64) -> Result<Self> {
        elliptic_points(profile, xi1)
            .into_iter()
            .filter(|p| p.energy * sign > 0.0)
            .max_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()))
            .map(|centre| OrbitFamily { xi1, centre })
            .ok_or(Error::NoClosedOrbit { xi1, energy: sign })
    }

    /// Family whose centre lies inside the interval of `orbit`.
    pub fn containing(profile: &CoriolisProfile, orbit: &Libration) -> Result<Self> {
        let mid = 0.5 * (orbit.x_minus + orbit.x_plus);
        let sign = math::signum0(orbit.energy);
        elliptic_points(profile, orbit.xi1)
            .into_iter()
            .filter(|p| p.energy * sign > 0.0)
            .map(|p| EllipticPoint { x2: unwrap_near(p.x2, mid), energy: p.energy })
            .find(|p| p.x2 >= orbit.x_minus - 1e-9 && p.x2 <= orbit.x_plus + 1e-9)
            .map(|centre| OrbitFamily { xi1: orbit.xi1, centre })
            .ok_or(Error::NoClosedOrbit { xi1: orbit.xi1, energy: orbit.energy })
    }

    /// The same family continued to a nearby `ξ₁`.
    pub fn at_xi1(&self, profile: &CoriolisProfile, xi1: f64) -> Result<Self> {
        let sign = math::signum0(self.centre.energy) * math::signum0(xi1) * math::signum0(self.xi1);
        nearest_elliptic(profile, xi1, sign, self.centre.x2)
            .map(|centre| OrbitFamily { xi1, centre })
            .ok_or(Error::NoClosedOrbit { xi1, energy: self.centre.energy })
    }

    /// Orbit of the family at `energy`.
    pub fn orbit(&self, profile: &CoriolisProfile, energy: f64) -> Result<Libration> {
        let ec = self.centre.energy;
        if energy * ec <= 0.0 || energy.abs() > ec.abs() {
            return Err(Error::NoClosedOrbit { xi1: self.xi1, energy });
        }
        if energy == ec {
            return Ok(Libration::fixed(self.xi1, &self.centre));
        }
        Libration::around(profile, self.xi1, energy, self.centre.x2)
    }

    pub fn action(&self, profile: &CoriolisProfile, energy: f64, quad: &Quadrature) -> Result<f64> {
        self.orbit(profile, energy)?.action(profile, quad)
    }

    /// Unsigned area of the member with `|E| = u`.
    fn area_at(&self, profile: &CoriolisProfile, u: f64, quad: &Quadrature) -> Result<f64> {
        let s = math::signum0(self.centre.energy);
        self.orbit(profile, s * u)?.area(profile, quad)
    }

    /// `H(A)`: the energy of the family member with action `action`.
    pub fn energy_for_action(&self, profile: &CoriolisProfile, action: f64, quad: &Quadrature) -> Result<f64> {
        let s = math::signum0(self.centre.energy);
        let ec = self.centre.energy.abs();
        if action * s > 0.0 {
            return Err(Error::TableOutOfRange { value: action, lo: 0.0, hi: 0.0 });
        }
        let target = action.abs() * TAU;
        if target == 0.0 {
            return Ok(self.centre.energy);
        }
        // a(u) decreases from its separatrix value to 0 at u = |E_c|
        let mut hi = ec;
        let mut lo = 0.5 * ec;
        let mut found = false;
        for _ in 0..60 {
            match self.area_at(profile, lo, quad) {
                Ok(a) if a > target => {
                    found = true;
                    break;
                }
                Ok(_) => {
                    hi = lo;
                    lo *= 0.5;
                }
                Err(_) => break,
            }
        }
        if !found {
            return Err(Error::TableOutOfRange { value: action, lo: 0.0, hi: f64::NAN });
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..100 {
            let orbit = self.orbit(profile, s * u)?;
            let f = orbit.area(profile, quad)? - target;
            if f > 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let t = orbit.period(profile, quad)?;
            let mut next = u + f / t;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() <= 1e-15 * u || hi - lo <= 1e-15 * u {
                return Ok(s * next);
            }
            u = next;
        }
        Ok(s * u)
    }
}

/// `A(ξ₁, E)` on the principal family carrying energy `energy`.
pub fn action_a(profile: &CoriolisProfile, xi1: f64, energy: f64) -> Result<f64> {
    action_a_with(profile, xi1, energy, &Quadrature::default())
}

pub fn action_a_with(profile: &CoriolisProfile, xi1: f64, energy: f64, quad: &Quadrature) -> Result<f64> {
    OrbitFamily::principal(profile, xi1, math::signum0(energy))?.action(profile, energy, quad)
}

/// Tabulated `(A, E, dE/dA)` for one family, inverted by cubic Hermite
/// interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionTable {
    pub family: OrbitFamily,
    /// Increasing.
    pub actions: Vec<f64>,
    pub energies: Vec<f64>,
    /// `dE/dA = 2π/T`.
    pub slopes: Vec<f64>,
}

impl ActionTable {
    /// `n` Chebyshev-spaced energies between `|E_c|` and `frac_min·|E_c|`.
    pub fn build(profile: &CoriolisProfile, family: OrbitFamily, n: usize, frac_min: f64, quad: &Quadrature) -> Result<Self> {
        if n < 2 || !(frac_min > 0.0 && frac_min < 1.0) {
            return Err(Error::InvalidArgument("table needs n ≥ 2 and 0 < frac_min < 1"));
        }
        let ec = family.centre.energy;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let c = 0.5 * (1.0 - math::cos(math::PI * i as f64 / (n - 1) as f64));
            let e = ec * (1.0 - (1.0 - frac_min) * c);
            let orbit = family.orbit(profile, e)?;
            let a = orbit.action(profile, quad)?;
            let t = orbit.period(profile, quad)?;
            rows.push((a, e, TAU / t));
        }
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(ActionTable {
            family,
            actions: rows.iter().map(|r| r.0).collect(),
            energies: rows.iter().map(|r| r.1).collect(),
            slopes: rows.iter().map(|r| r.2).collect(),
        })
    }

    /// `E(A)` by Hermite interpolation.
    pub fn energy(&self, action: f64) -> Result<f64> {
        let (lo, hi) = (self.actions[0], *self.actions.last().unwrap());
        if !(action >= lo && action <= hi) {
            return Err(Error::TableOutOfRange { value: action, lo, hi });
        }
        let i = match self.actions.partition_point(|&a| a <= action) {
            0 => 0,
            k if k >= self.actions.len() => self.actions.len() - 2,
            k => k - 1,
        };
        let (a0, a1) = (self.actions[i], self.actions[i + 1]);
        let h = a1 - a0;
        let t = (action - a0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.energies[i] + h10 * h * self.slopes[i] + h01 * self.energies[i + 1] + h11 * h * self.slopes[i + 1])
    }
}

/// Partial derivatives of `H(A, ξ₁)` at the orbit through a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSlopes {
    pub action: f64,
    pub d_xi1: f64,
    pub d_action: f64,
}

/// `∂ξ₁H` and `∂_A H` by Richardson-extrapolated central differences.
pub fn hamiltonian_slopes(profile: &CoriolisProfile, pt: &PhasePoint, quad: &Quadrature) -> Result<HamiltonianSlopes> {
    let orbit = Libration::through(profile, pt.xi1, pt.x2, pt.xi2)?;
    let family = OrbitFamily::containing(profile, &orbit)?;
    let a0 = orbit.action(profile, quad)?;
    let xi1 = pt.xi1;
    let h_at = |a: f64, x: f64| -> Result<f64> {
        let fam = if x == xi1 { family } else { family.at_xi1(profile, x)? };
        fam.energy_for_action(profile, a, quad)
    };
    let dx = 1e-3 * xi1.abs();
    let central_xi = |h: f64| -> Result<f64> { Ok((h_at(a0, xi1 + h)? - h_at(a0, xi1 - h)?) / (2.0 * h)) };
    let d_xi1 = (4.0 * central_xi(0.5 * dx)? - central_xi(dx)?) / 3.0;
    let d_action = if a0.abs() > 1e-12 {
        let da = 1e-3 * a0.abs();
        let central_a = |h: f64| -> Result<f64> { Ok((h_at(a0 + h, xi1)? - h_at(a0 - h, xi1)?) / (2.0 * h)) };
        (4.0 * central_a(0.5 * da)? - central_a(da)?) / 3.0
    } else {
        TAU / orbit.period(profile, quad)?
    };
    Ok(HamiltonianSlopes { action: a0, d_xi1, d_action })
}

/// Drift from the action-angle form.
pub fn drift_f_action(profile: &CoriolisProfile, pt: &PhasePoint) -> Result<f64> {
    drift_f_action_with(profile, pt, &Quadrature::default())
}

pub fn drift_f_action_with(profile: &CoriolisProfile, pt: &PhasePoint, quad: &Quadrature) -> Result<f64> {
    let s = hamiltonian_slopes(profile, pt, quad)?;
    Ok(TAU * s.d_xi1 / s.d_action)
}
