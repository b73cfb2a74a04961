//! Husimi densities with Gaussian windows of width `√ε`.
//!
//! With `φ_{y,η}(x) = g(x − y) e^{iηx/ε}` and an `L²`-normalized Gaussian
//! `g`, the density `|⟨φ_{y,η}, u⟩|²` integrates against `dy dη / (2πε)` to
//! `‖u‖²`. Window centres sit on grid nodes (optionally strided) and `η` on
//! the Fourier lattice, so every transform is one FFT per centre.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::field::StateField;
use crate::grid::{signed_frequency, Grid2D};
use crate::spectral::Fft1;

/// Density on a `(y, η)` grid of one variable pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiMarginal {
    pub y: Vec<f64>,
    /// Ascending lattice frequencies.
    pub eta: Vec<f64>,
    /// `[y][η]`, row-major.
    pub density: Vec<f64>,
    /// `dy dη / (2πε)` per cell.
    pub cell: f64,
}

/// Full density on `(y₁, y₂, η₁, η₂)`, for small grids.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiDensity {
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    /// `[y₁][η₁][y₂][η₂]`, row-major.
    pub density: Vec<f64>,
    pub cell: f64,
}

/// Windowed transforms of one periodic variable.
struct Window1 {
    n: usize,
    h: f64,
    length: f64,
    epsilon: f64,
    stride: usize,
    fft: Fft1,
}

impl Window1 {
    fn new(n: usize, length: f64, epsilon: f64, stride: usize) -> Self {
        assert!(stride >= 1 && n % stride == 0);
        Window1 { n, h: length / n as f64, length, epsilon, stride, fft: Fft1::new(n) }
    }

    fn g(&self, d: f64) -> f64 {
        let d = (d + 0.5 * self.length).rem_euclid(self.length) - 0.5 * self.length;
        (PI * self.epsilon).powf(-0.25) * (-d * d / (2.0 * self.epsilon)).exp()
    }

    fn centres(&self) -> Vec<f64> {
        (0..self.n / self.stride).map(|c| (c * self.stride) as f64 * self.h).collect()
    }

    /// Slot permutation putting lattice frequencies in ascending order.
    fn ascending(&self) -> Vec<usize> {
        let mut slots: Vec<usize> = (0..self.n).collect();
        slots.sort_by_key(|&k| signed_frequency(k, self.n));
        slots
    }

    fn eta(&self) -> Vec<f64> {
        self.ascending().iter().map(|&k| self.epsilon * TAU * signed_frequency(k, self.n) as f64 / self.length).collect()
    }

    /// `V(y_c, η_m) = h Σⱼ g(xⱼ − y_c) e^{−iη_m xⱼ/ε} uⱼ` for centre `c`, in
    /// ascending-frequency order.
    fn transform(&self, u: &[C64], centre: usize, order: &[usize], out: &mut [C64]) {
        let y = (centre * self.stride) as f64 * self.h;
        let mut buf: Vec<C64> = u.iter().enumerate().map(|(j, v)| v * self.g(j as f64 * self.h - y)).collect();
        self.fft.forward_raw(&mut buf);
        for (o, &k) in out.iter_mut().zip(order) {
            *o = buf[k] * self.h;
        }
    }

    /// `dy dη/(2πε)` including the stride.
    fn cell(&self) -> f64 {
        (self.stride as f64 * self.h) * (self.epsilon * TAU / self.length) / (TAU * self.epsilon)
    }
}

/// Density in `(x₂, ξ₂)` summed over components and integrated over `x₁`.
pub fn husimi_x2(u: &StateField, stride: usize) -> HusimiMarginal {
    let g = u.grid;
    let w = Window1::new(g.n2, TAU, g.epsilon, stride);
    let order = w.ascending();
    let nc = g.n2 / stride;
    let mut density = vec![0.0; nc * g.n2];
    let mut out = vec![C64::new(0.0, 0.0); g.n2];
    for c in 0..3 {
        let comp = u.component(c);
        for i in 0..g.n1 {
            let row = &comp[i * g.n2..(i + 1) * g.n2];
            if row.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                continue;
            }
            for yc in 0..nc {
                w.transform(row, yc, &order, &mut out);
                for (d, o) in density[yc * g.n2..(yc + 1) * g.n2].iter_mut().zip(&out) {
                    *d += o.norm_sqr() * g.h1();
                }
            }
        }
    }
    HusimiMarginal { y: w.centres(), eta: w.eta(), density, cell: w.cell() }
}

/// Density in `(x₁, ξ₁)` summed over components and integrated over `x₂`.
pub fn husimi_x1(u: &StateField, stride: usize) -> HusimiMarginal {
    let g = u.grid;
    let w = Window1::new(g.n1, g.l1, g.epsilon, stride);
    let order = w.ascending();
    let nc = g.n1 / stride;
    let mut density = vec![0.0; nc * g.n1];
    let mut col = vec![C64::new(0.0, 0.0); g.n1];
    let mut out = vec![C64::new(0.0, 0.0); g.n1];
    for c in 0..3 {
        for j in 0..g.n2 {
            for (i, v) in col.iter_mut().enumerate() {
                *v = u.get(c, i, j);
            }
            if col.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                continue;
            }
            for yc in 0..nc {
                w.transform(&col, yc, &order, &mut out);
                for (d, o) in density[yc * g.n1..(yc + 1) * g.n1].iter_mut().zip(&out) {
                    *d += o.norm_sqr() * g.h2();
                }
            }
        }
    }
    HusimiMarginal { y: w.centres(), eta: w.eta(), density, cell: w.cell() }
}

/// Full four-dimensional density; memory grows like `N1²N2²/(s₁s₂)`.
pub fn husimi(u: &StateField, stride1: usize, stride2: usize) -> HusimiDensity {
    let g: Grid2D = u.grid;
    let w1 = Window1::new(g.n1, g.l1, g.epsilon, stride1);
    let w2 = Window1::new(g.n2, TAU, g.epsilon, stride2);
    let (o1, o2) = (w1.ascending(), w2.ascending());
    let (c1, c2) = (g.n1 / stride1, g.n2 / stride2);
    let mut density = vec![0.0; c1 * g.n1 * c2 * g.n2];
    let mut col = vec![C64::new(0.0, 0.0); g.n1];
    let mut out1 = vec![C64::new(0.0, 0.0); g.n1];
    let mut out2 = vec![C64::new(0.0, 0.0); g.n2];
    for c in 0..3 {
        // first pass along x₁: T[y₁][η₁][x₂]
        let mut t = vec![C64::new(0.0, 0.0); c1 * g.n1 * g.n2];
        for j in 0..g.n2 {
            for (i, v) in col.iter_mut().enumerate() {
                *v = u.get(c, i, j);
            }
            for yc in 0..c1 {
                w1.transform(&col, yc, &o1, &mut out1);
                for (m, o) in out1.iter().enumerate() {
                    t[(yc * g.n1 + m) * g.n2 + j] = *o;
                }
            }
        }
        for a in 0..c1 * g.n1 {
            let row = &t[a * g.n2..(a + 1) * g.n2];
            for yc in 0..c2 {
                w2.transform(row, yc, &o2, &mut out2);
                let base = (a * c2 + yc) * g.n2;
                for (d, o) in density[base..base + g.n2].iter_mut().zip(&out2) {
                    *d += o.norm_sqr();
                }
            }
        }
    }
    HusimiDensity {
        y1: w1.centres(),
        y2: w2.centres(),
        eta1: w1.eta(),
        eta2: w2.eta(),
        density,
        cell: w1.cell() * w2.cell(),
    }
}

impl HusimiMarginal {
    /// `Σ ρ · cell`, which approximates `‖U‖²`.
    pub fn total(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell
    }

    /// Mean `(y, η)`; `y` is averaged on the circle around the heaviest centre.
    pub fn centroid(&self) -> (f64, f64) {
        let ne = self.eta.len();
        let period = self.y.len() as f64 * (self.y.get(1).copied().unwrap_or(0.0) - self.y[0]);
        let (mut peak, mut best) = (0, -1.0);
        for (a, _) in self.y.iter().enumerate() {
            let s: f64 = self.density[a * ne..(a + 1) * ne].iter().sum();
            if s > best {
                best = s;
                peak = a;
            }
        }
        let (mut m, mut my, mut me) = (0.0, 0.0, 0.0);
        for (a, &y) in self.y.iter().enumerate() {
            let dy = (y - self.y[peak] + 0.5 * period).rem_euclid(period) - 0.5 * period;
            for (e, &eta) in self.eta.iter().enumerate() {
                let d = self.density[a * ne + e];
                m += d;
                my += d * dy;
                me += d * eta;
            }
        }
        if m == 0.0 {
            return (f64::NAN, f64::NAN);
        }
        ((self.y[peak] + my / m).rem_euclid(period), me / m)
    }

    /// Density summed over `η`, per centre.
    pub fn position_profile(&self) -> Vec<f64> {
        let ne = self.eta.len();
        (0..self.y.len()).map(|a| self.density[a * ne..(a + 1) * ne].iter().sum::<f64>() * self.cell).collect()
    }

    /// `√(⟨(y − ȳ)²⟩)` about the centroid, on the circle.
    pub fn position_spread(&self) -> f64 {
        let (yc, _) = self.centroid();
        let period = self.y.len() as f64 * (self.y.get(1).copied().unwrap_or(0.0) - self.y[0]);
        let p = self.position_profile();
        let m: f64 = p.iter().sum();
        let v: f64 = self
            .y
            .iter()
            .zip(&p)
            .map(|(&y, &w)| {
                let d = (y - yc + 0.5 * period).rem_euclid(period) - 0.5 * period;
                w * d * d
            })
            .sum();
        (v / m).sqrt()
    }
}

impl HusimiDensity {
    pub fn total(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell
    }

    /// Index `(y₁, η₁, y₂, η₂)` of the largest value.
    pub fn argmax(&self) -> (usize, usize, usize, usize) {
        let (mut best, mut idx) = (-1.0, 0);
        for (k, &d) in self.density.iter().enumerate() {
            if d > best {
                best = d;
                idx = k;
            }
        }
        let (n1, c2, n2) = (self.eta1.len(), self.y2.len(), self.eta2.len());
        let e2 = idx % n2;
        let y2 = (idx / n2) % c2;
        let e1 = (idx / (n2 * c2)) % n1;
        let y1 = idx / (n2 * c2 * n1);
        (y1, e1, y2, e2)
    }
}
