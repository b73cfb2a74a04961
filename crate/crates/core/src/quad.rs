//! Gauss–Legendre rules and an endpoint-singular integrator for turning-point
//! integrals `∫ f/√g` with simple zeros of `g` at both ends.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// `(∫_a^b f, ∫_a^b |f|)` from the same nodes.
    fn integrate_with_magnitude(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let (mut s, mut m) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(c + h * x);
            s += w * v;
            m += w * v.abs();
        }
        (s * h, m * h.abs())
    }
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A ladder of rules of doubling size used for convergence checks.
///
/// Integrals are accepted once two successive rules agree to `rel_tol`
/// relative to `∫|φ|`, so integrals that nearly cancel still converge. Near
/// a very flat turning point the integrand carries rounding noise that grows
/// as nodes crowd the endpoint; when the successive changes stop decreasing
/// the best estimate is accepted if its change is below `floor_tol`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    rules: Vec<GaussLegendre>,
    pub rel_tol: f64,
    pub floor_tol: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(16, 512, 1e-12)
    }
}

impl Quadrature {
    /// Rules of size `min, 2min, …, ≤ max`.
    pub fn new(min: usize, max: usize, rel_tol: f64) -> Self {
        let mut rules = Vec::new();
        let mut n = min.max(2);
        while n <= max {
            rules.push(GaussLegendre::new(n));
            n *= 2;
        }
        Quadrature { rules, rel_tol, floor_tol: 1e-8 }
    }

    /// Same rule ladder with a different tolerance.
    pub fn with_tolerance(&self, rel_tol: f64) -> Self {
        Quadrature { rules: self.rules.clone(), rel_tol, floor_tol: self.floor_tol.max(rel_tol) }
    }

    /// `∫_{a}^{b} φ(x) dx` where `φ(x) = f(x)/√g(x)`-type integrands are smooth
    /// after `x = a + s²` on the left half and `x = b − s²` on the right half.
    ///
    /// `kernel(x, s, side)` must return `φ(x)·s`, which stays bounded as the
    /// node approaches the endpoint; the Jacobian factor 2 is applied here.
    pub fn integrate_endpoint_singular(
        &self,
        a: f64,
        b: f64,
        mut kernel: impl FnMut(f64, f64, Side) -> f64,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let smax = math::sqrt(mid - a);
        let mut prev: Option<f64> = None;
        let mut last_change = f64::INFINITY;
        let mut best = (f64::INFINITY, f64::NAN);
        let mut scale_of_last = 0.0;
        for rule in &self.rules {
            let (left, ml) = rule.integrate_with_magnitude(0.0, smax, |s| 2.0 * kernel(a + s * s, s, Side::Left));
            let (right, mr) = rule.integrate_with_magnitude(0.0, smax, |s| 2.0 * kernel(b - s * s, s, Side::Right));
            let total = left + right;
            let magnitude = ml + mr;
            scale_of_last = magnitude;
            if !total.is_finite() {
                return Err(Error::QuadratureFailure { estimate: total, change: f64::NAN });
            }
            if let Some(p) = prev {
                let change = (total - p).abs();
                let scale = magnitude.max(1e-300);
                if change <= self.rel_tol * scale || change < 1e-15 {
                    return Ok(total);
                }
                if change < best.0 {
                    best = (change, p);
                }
                if change > last_change && best.0 <= self.floor_tol * scale {
                    return Ok(best.1);
                }
                last_change = change;
            }
            prev = Some(total);
        }
        if best.0 <= self.floor_tol * scale_of_last {
            return Ok(best.1);
        }
        Err(Error::QuadratureFailure { estimate: prev.unwrap_or(f64::NAN), change: last_change })
    }
}

/// Which endpoint substitution produced a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}
