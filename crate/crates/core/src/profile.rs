//! Latitude-dependent Coriolis factor `b(x₂)` as a truncated Fourier series.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, TAU};
use crate::roots::bisect;

/// `(b, b′, b″)` at one latitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub b: f64,
    pub db: f64,
    pub d2b: f64,
}

/// `b(x₂) = c + Σₖ (aₖ cos kx₂ + sₖ sin kx₂)`, `k = 1, 2, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoriolisProfile {
    name: String,
    constant: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    zeros_of_b: Vec<f64>,
    zeros_of_bprime: Vec<f64>,
}

const SCAN: usize = 4096;
const ZERO_TOL: f64 = 1e-10;

impl CoriolisProfile {
    /// Build a profile from Fourier coefficients; `cos[k-1]` multiplies `cos(k x₂)`.
    pub fn fourier(name: impl Into<String>, constant: f64, cos: &[f64], sin: &[f64]) -> Result<Self> {
        if !constant.is_finite() || cos.iter().chain(sin).any(|c| !c.is_finite()) {
            return Err(Error::InvalidProfile("non-finite coefficient"));
        }
        let mut cos = cos.to_vec();
        let mut sin = sin.to_vec();
        let n = cos.len().max(sin.len());
        cos.resize(n, 0.0);
        sin.resize(n, 0.0);
        if cos.iter().chain(&sin).all(|c| *c == 0.0) {
            return Err(Error::InvalidProfile("constant profile has no Rossby dynamics"));
        }
        let mut p = CoriolisProfile {
            name: name.into(),
            constant,
            cos,
            sin,
            zeros_of_b: Vec::new(),
            zeros_of_bprime: Vec::new(),
        };
        p.zeros_of_b = periodic_zeros(|x| p.eval(x).b, |x| p.eval(x).db);
        p.zeros_of_bprime = periodic_zeros(|x| p.eval(x).db, |x| p.eval(x).d2b);
        Ok(p)
    }

    /// `b = sin x₂` (equatorial beta-plane-like, vanishes at 0 and π).
    pub fn sin() -> Self {
        Self::fourier("sin", 0.0, &[], &[1.0]).expect("valid built-in")
    }

    /// `b = 2 + sin x₂`.
    pub fn two_plus_sin() -> Self {
        Self::fourier("2+sin", 2.0, &[], &[1.0]).expect("valid built-in")
    }

    /// `b = 1 + cos(x₂)/2`.
    pub fn one_plus_half_cos() -> Self {
        Self::fourier("1+0.5cos", 1.0, &[0.5], &[]).expect("valid built-in")
    }

    /// Look up a built-in profile by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Self::sin()),
            "2+sin" => Some(Self::two_plus_sin()),
            "1+0.5cos" => Some(Self::one_plus_half_cos()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn cos_coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coefficients(&self) -> &[f64] {
        &self.sin
    }

    /// Highest harmonic present.
    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn zeros_of_b(&self) -> &[f64] {
        &self.zeros_of_b
    }

    pub fn zeros_of_bprime(&self) -> &[f64] {
        &self.zeros_of_bprime
    }

    /// `(b, b′, b″)` at `x2`.
    pub fn eval(&self, x2: f64) -> ProfileValues {
        let [b, db, d2b, _] = self.derivatives(x2);
        ProfileValues { b, db, d2b }
    }

    /// `b‴(x₂)`.
    pub fn d3b(&self, x2: f64) -> f64 {
        self.derivatives(x2)[3]
    }

    fn derivatives(&self, x2: f64) -> [f64; 4] {
        let (s1, c1) = math::sin_cos(x2);
        let (mut s, mut c) = (s1, c1);
        let mut out = [self.constant, 0.0, 0.0, 0.0];
        for (k, (&a, &bk)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kf = (k + 1) as f64;
            let k2 = kf * kf;
            out[0] += a * c + bk * s;
            out[1] += kf * (bk * c - a * s);
            out[2] -= k2 * (a * c + bk * s);
            out[3] -= k2 * kf * (bk * c - a * s);
            let (sn, cn) = (s * c1 + c * s1, c * c1 - s * s1);
            s = sn;
            c = cn;
        }
        out
    }

    /// `(b(x) − b(x₀), b′(x) − b′(x₀))` without cancellation when `x ≈ x₀`.
    pub fn delta(&self, x: f64, x0: f64) -> (f64, f64) {
        self.delta_offset(x0, x - x0)
    }

    /// `(b(x₀+u) − b(x₀), b′(x₀+u) − b′(x₀))` with relative accuracy in `u`.
    pub fn delta_offset(&self, x0: f64, u: f64) -> (f64, f64) {
        let (mut db, mut dbp) = (0.0, 0.0);
        for (k, (&a, &s)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kf = (k + 1) as f64;
            let (su, _) = math::sin_cos(0.5 * kf * u);
            let (sv, cv) = math::sin_cos(kf * (x0 + 0.5 * u));
            let dcos = -2.0 * sv * su;
            let dsin = 2.0 * cv * su;
            db += a * dcos + s * dsin;
            dbp += kf * (s * dcos - a * dsin);
        }
        (db, dbp)
    }

    /// Minimum and maximum of `b²` sampled on a fine grid.
    pub fn b_squared_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..SCAN {
            let b = self.eval(TAU * i as f64 / SCAN as f64).b;
            lo = lo.min(b * b);
            hi = hi.max(b * b);
        }
        (lo, hi)
    }

    /// `max |b′|` sampled on a fine grid.
    pub fn max_abs_bprime(&self) -> f64 {
        (0..SCAN)
            .map(|i| self.eval(TAU * i as f64 / SCAN as f64).db.abs())
            .fold(0.0, f64::max)
    }
}

/// Zeros of a smooth 2π-periodic function on `[0, 2π)`: transversal zeros by
/// sign change, tangential ones as critical points where `|f|` is negligible.
fn periodic_zeros(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = TAU / SCAN as f64;
    let scale = (0..SCAN).map(|i| f(i as f64 * h).abs()).fold(0.0, f64::max).max(1.0);
    let mut out: Vec<f64> = Vec::new();
    let push = |x: f64, out: &mut Vec<f64>| {
        let x = math::wrap_angle(x);
        let dup = out.iter().any(|&z| {
            let d = (z - x).abs();
            d < 1e-8 || (TAU - d) < 1e-8
        });
        if !dup {
            out.push(x);
        }
    };
    for i in 0..SCAN {
        let a = i as f64 * h;
        let b = a + h;
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            push(a, &mut out);
        } else if fa * fb < 0.0 {
            if let Some(x) = bisect(&f, a, b, 1e-15) {
                push(x, &mut out);
            }
        }
        let (da, db) = (df(a), df(b));
        if da * db < 0.0 {
            if let Some(x) = bisect(&df, a, b, 1e-15) {
                if f(x).abs() <= ZERO_TOL * scale {
                    push(x, &mut out);
                }
            }
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}
