//! Librating orbits of the `(x₂, ξ₂)` motion at fixed `ξ₁`, described through
//! their turning points.
//!
//! On the level set `E = const` one has `ξ₂² = g(x₂)` with
//! `g(x) = b′(x)ξ₁/E − ξ₁² − b(x)²`, so an orbit is the graph `ξ₂ = ±√g` over
//! a maximal interval `[x₋, x₊]` where `g > 0`. Period, drift and enclosed
//! area are one-dimensional integrals over that interval.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};
use crate::phase::{Admissibility, PhasePoint};
use crate::profile::CoriolisProfile;
use crate::quad::{Quadrature, Side};
use crate::roots::bisect;
use crate::symbols::rossby_gradient;

const SCAN_STEPS: usize = 2048;

/// Non-degenerate extremum of `x ↦ E(ξ₁, x, 0)`: the centre of a family of
/// nested librating orbits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPoint {
    pub x2: f64,
    pub energy: f64,
}

/// All elliptic fixed points at `ξ₁`, sorted by `x₂ ∈ [0, 2π)`.
///
/// These are the critical points of `φ(x) = b′ξ₁/(ξ₁² + b²)` at which `|φ|`
/// is a strict local maximum.
pub fn elliptic_points(profile: &CoriolisProfile, xi1: f64) -> Vec<EllipticPoint> {
    let phi = |x: f64| rossby_gradient(profile, xi1, x, 0.0).e;
    let dphi = |x: f64| rossby_gradient(profile, xi1, x, 0.0).d_x2;
    let h = TAU / SCAN_STEPS as f64;
    let mut out: Vec<EllipticPoint> = Vec::new();
    for i in 0..SCAN_STEPS {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        if dphi(a) * dphi(b) < 0.0 || dphi(b) == 0.0 {
            let x = bisect(dphi, a, b, 1e-15).unwrap_or(b);
            let e = phi(x);
            let probe = 1e-4;
            let is_max = e.abs() > phi(x - probe).abs() && e.abs() > phi(x + probe).abs();
            if is_max && e != 0.0 {
                let x = math::wrap_angle(x);
                if !out.iter().any(|p| (p.x2 - x).abs() < 1e-9 || TAU - (p.x2 - x).abs() < 1e-9) {
                    out.push(EllipticPoint { x2: x, energy: e });
                }
            }
        }
    }
    out.sort_by(|a, b| a.x2.total_cmp(&b.x2));
    out
}

/// Elliptic point carrying energies of sign `sign` that lies closest to `near`
/// on the circle.
pub fn nearest_elliptic(profile: &CoriolisProfile, xi1: f64, sign: f64, near: f64) -> Option<EllipticPoint> {
    elliptic_points(profile, xi1)
        .into_iter()
        .filter(|p| p.energy * sign > 0.0)
        .min_by(|a, b| circle_dist(a.x2, near).total_cmp(&circle_dist(b.x2, near)))
        .map(|p| EllipticPoint { x2: unwrap_near(p.x2, near), energy: p.energy })
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = math::wrap_angle(a - b);
    d.min(TAU - d)
}

/// Representative of `x` modulo 2π closest to `reference`.
pub fn unwrap_near(x: f64, reference: f64) -> f64 {
    x + TAU * math::round((reference - x) / TAU)
}

/// A librating orbit `{E(ξ₁, ·, ·) = energy}` over `[x_minus, x_plus]`.
///
/// When `x_minus == x_plus` the orbit is the zero-amplitude limit at an
/// elliptic point and all integrals are replaced by their harmonic limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Libration {
    pub xi1: f64,
    pub energy: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    /// Reference latitude with known `g(x_ref) = g_ref`. Turning points and
    /// quadrature nodes are handled as offsets `u = x − x_ref` and `g` as an
    /// increment from `g_ref`, so small orbits keep full relative accuracy.
    x_ref: f64,
    g_ref: f64,
    u_minus: f64,
    u_plus: f64,
}

impl Libration {
    /// Orbit through `(x₂, ξ₂)` at `ξ₁`.
    pub fn through(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> Result<Self> {
        let pt = PhasePoint::new(0.0, x2, xi1, xi2);
        Admissibility::default().check(profile, &pt)?;
        let e = rossby_gradient(profile, xi1, x2, xi2).e;
        if e == 0.0 {
            return Err(Error::NoClosedOrbit { xi1, energy: e });
        }
        let shell = Libration::seed(xi1, e, x2, xi2 * xi2);
        let g = |u: f64| shell.g_offset(profile, u);
        let v = profile.eval(x2);
        let scale = xi1 * xi1 + v.b * v.b + (v.db * xi1 / e).abs();
        if xi2 * xi2 <= 1e-13 * scale {
            // the base point is itself a turning point
            let slope = dg_of(profile, xi1, e, x2);
            if slope.abs() <= 1e-10 * scale {
                return Ok(shell);
            }
            let dir = slope.signum();
            let start = dir * 1e-9;
            if g(start) <= 0.0 {
                return Ok(shell);
            }
            let other = scan(&g, start, dir)?;
            return Ok(if dir > 0.0 { shell.with_offsets(0.0, other) } else { shell.with_offsets(other, 0.0) });
        }
        shell.widen(profile)
    }

    /// Orbit of energy `energy` whose interval contains `anchor`.
    pub fn around(profile: &CoriolisProfile, xi1: f64, energy: f64, anchor: f64) -> Result<Self> {
        if energy == 0.0 || xi1 == 0.0 {
            return Err(Error::NoClosedOrbit { xi1, energy });
        }
        let g0 = g_of(profile, xi1, energy, anchor);
        if !(g0 > 0.0) {
            return Err(Error::NoClosedOrbit { xi1, energy });
        }
        Libration::seed(xi1, energy, anchor, g0).widen(profile)
    }

    /// The zero-amplitude orbit at an elliptic point.
    pub fn fixed(xi1: f64, point: &EllipticPoint) -> Self {
        Libration::seed(xi1, point.energy, point.x2, 0.0)
    }

    fn seed(xi1: f64, energy: f64, x_ref: f64, g_ref: f64) -> Self {
        Libration { xi1, energy, x_minus: x_ref, x_plus: x_ref, x_ref, g_ref, u_minus: 0.0, u_plus: 0.0 }
    }

    fn with_offsets(self, u_minus: f64, u_plus: f64) -> Self {
        Libration {
            x_minus: self.x_ref + u_minus,
            x_plus: self.x_ref + u_plus,
            u_minus,
            u_plus,
            ..self
        }
    }

    fn widen(self, profile: &CoriolisProfile) -> Result<Self> {
        let g = |u: f64| self.g_offset(profile, u);
        let um = scan(&g, 0.0, -1.0)?;
        let up = scan(&g, 0.0, 1.0)?;
        Ok(self.with_offsets(um, up))
    }

    fn g_offset(&self, profile: &CoriolisProfile, u: f64) -> f64 {
        let (db, dbp) = profile.delta_offset(self.x_ref, u);
        let b = profile.eval(self.x_ref + u).b;
        self.g_ref + dbp * self.xi1 / self.energy - db * (2.0 * b - db)
    }

    pub fn is_fixed_point(&self) -> bool {
        self.u_minus == self.u_plus
    }

    /// `g(x) = b′ξ₁/E − ξ₁² − b²`; equals `ξ₂²` on the orbit.
    pub fn g(&self, profile: &CoriolisProfile, x: f64) -> f64 {
        self.g_offset(profile, x - self.x_ref)
    }

    /// Signed drift `F = x₁(T) − x₁(0)` along the `E`-flow.
    pub fn drift(&self, profile: &CoriolisProfile, quad: &Quadrature) -> Result<f64> {
        let (xi1, e) = (self.xi1, self.energy);
        let h = |x: f64| profile.eval(x).db / e - 2.0 * xi1;
        Ok(math::signum0(e) * self.integrate_over_sqrt_g(profile, quad, h)?)
    }

    /// Period of the `(x₂, ξ₂)` motion, `∫ K/(|E|√g) dx` with `K = b′ξ₁/E`.
    pub fn period(&self, profile: &CoriolisProfile, quad: &Quadrature) -> Result<f64> {
        let (xi1, e) = (self.xi1, self.energy);
        let w = |x: f64| profile.eval(x).db * xi1 / (e * e.abs());
        self.integrate_over_sqrt_g(profile, quad, w)
    }

    /// Unsigned enclosed area `2∫√g dx`.
    pub fn area(&self, profile: &CoriolisProfile, quad: &Quadrature) -> Result<f64> {
        if self.is_fixed_point() {
            return Ok(0.0);
        }
        let (a, b) = (self.u_minus, self.u_plus);
        let half = quad.integrate_endpoint_singular(a, b, |u, s, _| {
            let g = self.g_offset(profile, u);
            if g > 0.0 {
                math::sqrt(g) * s
            } else {
                0.0
            }
        })?;
        Ok(2.0 * half)
    }

    /// Action `(1/2π)∮ξ₂dx₂` taken along the direction of motion.
    ///
    /// Orbits with `E > 0` run counter-clockwise in the `(x₂, ξ₂)` plane, so
    /// the oriented integral is `−sign(E)·area`; with this orientation the
    /// action increases with `E` and `dA/dE = T/2π`.
    pub fn action(&self, profile: &CoriolisProfile, quad: &Quadrature) -> Result<f64> {
        Ok(-math::signum0(self.energy) * self.area(profile, quad)? / TAU)
    }

    /// `∫_{x₋}^{x₊} f/√g`, or its zero-amplitude limit `π f(x*)/√(−g″(x*)/2)`.
    fn integrate_over_sqrt_g(
        &self,
        profile: &CoriolisProfile,
        quad: &Quadrature,
        f: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        let (xi1, e) = (self.xi1, self.energy);
        if self.is_fixed_point() {
            let alpha = -0.5 * d2g_of(profile, xi1, e, self.x_minus);
            if !(alpha > 0.0) {
                return Err(Error::NoClosedOrbit { xi1, energy: e });
            }
            return Ok(PI * f(self.x_minus) / math::sqrt(alpha));
        }
        let (a, b) = (self.u_minus, self.u_plus);
        let x0 = self.x_ref;
        let slope_a = dg_of(profile, xi1, e, x0 + a).abs();
        let slope_b = dg_of(profile, xi1, e, x0 + b).abs();
        quad.integrate_endpoint_singular(a, b, |u, s, side| {
            let s2 = s * s;
            let g = self.g_offset(profile, u);
            let ratio = if g > 0.0 && s2 > 0.0 {
                g / s2
            } else {
                match side {
                    Side::Left => slope_a,
                    Side::Right => slope_b,
                }
            };
            f(x0 + u) / math::sqrt(ratio)
        })
    }
}

#[inline]
fn g_of(profile: &CoriolisProfile, xi1: f64, e: f64, x: f64) -> f64 {
    let v = profile.eval(x);
    v.db * xi1 / e - xi1 * xi1 - v.b * v.b
}

#[inline]
fn dg_of(profile: &CoriolisProfile, xi1: f64, e: f64, x: f64) -> f64 {
    let v = profile.eval(x);
    v.d2b * xi1 / e - 2.0 * v.b * v.db
}

#[inline]
fn d2g_of(profile: &CoriolisProfile, xi1: f64, e: f64, x: f64) -> f64 {
    let v = profile.eval(x);
    profile.d3b(x) * xi1 / e - 2.0 * v.db * v.db - 2.0 * v.b * v.d2b
}

/// First zero of `g` met when walking from `x0` in direction `dir`.
fn scan(g: &impl Fn(f64) -> f64, x0: f64, dir: f64) -> Result<f64> {
    // bisection runs to the last representable midpoint, which for offsets
    // near zero is far below the spacing of absolute latitudes
    let h = dir * TAU / SCAN_STEPS as f64;
    let mut a = x0;
    let mut ga = g(a);
    if !(ga > 0.0) {
        return Err(Error::InvalidArgument("scan must start where g > 0"));
    }
    for i in 1..=SCAN_STEPS {
        let b = x0 + h * i as f64;
        let gb = g(b);
        if gb <= 0.0 {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            return bisect(g, lo, hi, 0.0).ok_or(Error::NoTurningPoints);
        }
        a = b;
        ga = gb;
    }
    let _ = ga;
    Err(Error::NoTurningPoints)
}

/// Signed drift through `(x₂, ξ₂)` at `ξ₁` by the turning-point integral.
pub fn drift_f_space_signed(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> Result<f64> {
    drift_f_space_signed_with(profile, xi1, x2, xi2, &Quadrature::default())
}

pub fn drift_f_space_signed_with(
    profile: &CoriolisProfile,
    xi1: f64,
    x2: f64,
    xi2: f64,
    quad: &Quadrature,
) -> Result<f64> {
    Libration::through(profile, xi1, x2, xi2)?.drift(profile, quad)
}

/// `|F|` by the turning-point integral.
pub fn drift_f_space(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> Result<f64> {
    drift_f_space_signed(profile, xi1, x2, xi2).map(f64::abs)
}
