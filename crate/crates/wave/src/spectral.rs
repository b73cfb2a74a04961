//! Fourier collocation on the circle: differentiation matrix, FFT helpers
//! and spectral-tail measurements.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::grid::signed_frequency;

/// Fourier differentiation matrix on `N` equispaced points of `[0, 2π)`,
/// row-major. The Nyquist mode is differentiated to zero, which keeps the
/// matrix real and antisymmetric.
pub fn derivative_matrix(n: usize) -> Vec<f64> {
    assert!(n % 2 == 0 && n >= 2);
    let h = TAU / n as f64;
    let mut d = vec![0.0; n * n];
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let m = j as i64 - k as i64;
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                d[j * n + k] = 0.5 * sign / (0.5 * m as f64 * h).tan();
            }
        }
    }
    d
}

/// `−ε²D² + diag(b²)`, row-major.
pub fn h2_from_derivative(d: &[f64], b: &[f64], epsilon: f64) -> Vec<f64> {
    let n = b.len();
    let mut h = vec![0.0; n * n];
    for j in 0..n {
        for k in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                s += d[j * n + l] * d[l * n + k];
            }
            h[j * n + k] = -epsilon * epsilon * s;
        }
        h[j * n + j] += b[j] * b[j];
    }
    h
}

/// Forward/inverse transforms of one length, planned once.
#[derive(Clone)]
pub struct Fft1 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft1 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft1 { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `ûₖ = (1/N) Σⱼ uⱼ e^{−2πijk/N}` in place.
    pub fn forward(&self, buf: &mut [C64]) {
        self.forward.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// `uⱼ = Σₖ ûₖ e^{2πijk/N}` in place.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.inverse.process(buf);
    }

    /// Unnormalized forward transform.
    pub fn forward_raw(&self, buf: &mut [C64]) {
        self.forward.process(buf);
    }
}

/// Whether the signed frequency `m` of an `N`-point transform lies in the
/// outer quarter of the band.
pub fn in_tail(m: i64, n: usize) -> bool {
    8 * m.unsigned_abs() as usize >= 3 * n
}

/// `√(Σ_tail |ûₖ|² / Σ |ûₖ|²)` for coefficients in FFT order.
pub fn tail_fraction(coeffs: &[C64]) -> f64 {
    let n = coeffs.len();
    let (mut tail, mut total) = (0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if in_tail(signed_frequency(k, n), n) {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (tail / total).sqrt()
    }
}
