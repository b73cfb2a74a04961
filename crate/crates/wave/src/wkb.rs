//! WKB initial data `(R⁰, U₁⁰, U₂⁰) e^{iS/ε}` and their Lagrangian clouds.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rossbytrap_core::symbols::{k_symbol, mode_column};
use rossbytrap_core::{drift_f_space_signed, mode_matrix, Admissibility, CoriolisProfile, PhasePoint};

use crate::error::{Result, WaveError};
use crate::field::StateField;
use crate::grid::Grid2D;
use crate::propagator::Branch;

/// `S = ξ̄₁x₁ + ξ̄₂x₂ + Σₘ (aₘ cos mx₂ + sₘ sin mx₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    pub xi1: f64,
    pub xi2: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Phase {
    pub fn linear(xi1: f64, xi2: f64) -> Self {
        Phase { xi1, xi2, cos: Vec::new(), sin: Vec::new() }
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        let mut s = self.xi1 * x1 + self.xi2 * x2;
        for (m, a) in self.cos.iter().enumerate() {
            s += a * ((m + 1) as f64 * x2).cos();
        }
        for (m, a) in self.sin.iter().enumerate() {
            s += a * ((m + 1) as f64 * x2).sin();
        }
        s
    }

    /// `∂₂S`; `∂₁S = ξ̄₁` everywhere.
    pub fn d_x2(&self, x2: f64) -> f64 {
        let mut s = self.xi2;
        for (m, a) in self.cos.iter().enumerate() {
            let k = (m + 1) as f64;
            s -= a * k * (k * x2).sin();
        }
        for (m, a) in self.sin.iter().enumerate() {
            let k = (m + 1) as f64;
            s += a * k * (k * x2).cos();
        }
        s
    }
}

/// `scale · exp(−d₁²/2σ₁²) · exp(−(1 − cos(x₂ − c₂))/σ₂²)`, with `d₁` the
/// periodic distance to `c₁`, set to zero where it drops below `cutoff·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub centre: (f64, f64),
    pub width: (f64, f64),
    pub scale: f64,
    pub cutoff: f64,
}

impl Envelope {
    pub fn gaussian(centre: (f64, f64), width: (f64, f64)) -> Self {
        Envelope { centre, width, scale: 1.0, cutoff: 1e-17 }
    }

    fn factor_x1(&self, x1: f64, l1: f64) -> f64 {
        let d = (x1 - self.centre.0 + 0.5 * l1).rem_euclid(l1) - 0.5 * l1;
        (-d * d / (2.0 * self.width.0 * self.width.0)).exp()
    }

    fn factor_x2(&self, x2: f64) -> f64 {
        (-(1.0 - (x2 - self.centre.1).cos()) / (self.width.1 * self.width.1)).exp()
    }

    pub fn value(&self, x1: f64, x2: f64, l1: f64) -> f64 {
        let v = self.factor_x1(x1, l1) * self.factor_x2(x2);
        if v < self.cutoff {
            0.0
        } else {
            self.scale * v
        }
    }
}

/// Amplitude direction `(R⁰, U₁⁰, U₂⁰)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Polarization {
    /// Principal reconstruction column of a branch at `(x, ∇S(x))`.
    Branch(Branch),
    Fixed([C64; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WkbSpec {
    pub phase: Phase,
    pub envelope: Envelope,
    pub polarization: Polarization,
}

/// Cloud `{(x, ∇S(x))}` over the support, one record per latitude since
/// `∇S` does not depend on `x₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudColumn {
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
    /// `max_{x₁} |amplitude|` on this latitude.
    pub envelope: f64,
    /// `p⁰ᵨR⁰ + p⁰₁U₁⁰ + p⁰₂U₂⁰` per unit envelope.
    pub rossby_weight: C64,
    /// `|p⁰| · |(R⁰, U₁⁰, U₂⁰)|`, the largest weight the amplitude could carry.
    pub weight_bound: f64,
}

/// Weights below this share of their bound are rounding noise.
pub const WEIGHT_NOISE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianCloud {
    pub columns: Vec<CloudColumn>,
}

/// How the Rossby-weighted cloud sits relative to the trapped set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaContact {
    /// Columns whose weighted envelope exceeds the threshold.
    pub weighted_columns: usize,
    /// `min |F|` over those columns.
    pub min_abs_drift: f64,
    /// Whether `F` changes sign across them (a root of `F` is enclosed).
    pub sign_change: bool,
}

impl WkbSpec {
    /// Move `ξ̄₁`, `ξ̄₂` to the nearest lattice values of `grid`.
    pub fn snapped(&self, grid: &Grid2D) -> WkbSpec {
        let mut s = self.clone();
        s.phase.xi1 = grid.snap_xi1(self.phase.xi1).1;
        s.phase.xi2 = grid.snap_xi2(self.phase.xi2).1;
        s
    }

    fn amplitude(&self, profile: &CoriolisProfile, x2: f64) -> Result<[C64; 3]> {
        match self.polarization {
            Polarization::Fixed(a) => Ok(a),
            Polarization::Branch(br) => {
                let xi1 = self.phase.xi1;
                let xi2 = self.phase.d_x2(x2);
                Admissibility::default().check(profile, &PhasePoint::new(0.0, x2, xi1, xi2))?;
                let b = profile.eval(x2).b;
                let s = k_symbol(xi1, xi2, b).sqrt();
                let tau = match br {
                    Branch::Minus => -s,
                    Branch::Rossby => 0.0,
                    Branch::Plus => s,
                };
                Ok(mode_column(xi1, xi2, b, tau))
            }
        }
    }
}

fn lattice_error(value: f64, spacing: f64) -> f64 {
    let r = value / spacing;
    (r - r.round()).abs()
}

/// Sample the WKB datum on the grid and build its Lagrangian cloud.
pub fn wkb_initial(profile: &CoriolisProfile, spec: &WkbSpec, grid: &Grid2D) -> Result<(StateField, LagrangianCloud)> {
    let ph = &spec.phase;
    if lattice_error(ph.xi1, grid.epsilon * TAU / grid.l1) > 1e-9 || lattice_error(ph.xi2, grid.epsilon) > 1e-9 {
        return Err(WaveError::InvalidArgument(format!(
            "phase gradient ({}, {}) is not periodic on the grid; snap it to the lattice",
            ph.xi1, ph.xi2
        )));
    }
    let env = &spec.envelope;
    let mut u = StateField::zeros(*grid);
    let mut columns = Vec::new();
    let peak_x1 = (0..grid.n1).map(|i| env.factor_x1(grid.x1(i), grid.l1)).fold(0.0, f64::max);
    for j in 0..grid.n2 {
        let x2 = grid.x2(j);
        let column_env = env.scale * env.factor_x2(x2) * peak_x1;
        if column_env < env.cutoff * env.scale {
            continue;
        }
        let amp = spec.amplitude(profile, x2)?;
        let xi2 = ph.d_x2(x2);
        let pt = PhasePoint::new(0.0, x2, ph.xi1, xi2);
        Admissibility::default().check(profile, &pt)?;
        let row = mode_matrix(profile, &pt)?.rossby_row();
        let rossby_weight = row.iter().zip(&amp).map(|(p, a)| p * a).sum();
        let norm = |v: &[C64; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let weight_bound = norm(&row) * norm(&amp);
        columns.push(CloudColumn { x2, xi1: ph.xi1, xi2, envelope: column_env, rossby_weight, weight_bound });
        for i in 0..grid.n1 {
            let x1 = grid.x1(i);
            let a = env.value(x1, x2, grid.l1);
            if a == 0.0 {
                continue;
            }
            let w = C64::from_polar(a, ph.value(x1, x2) / grid.epsilon);
            for (c, ac) in amp.iter().enumerate() {
                let idx = u.index(c, i, j);
                u.values[idx] = ac * w;
            }
        }
    }
    if u.values.iter().any(|v| *v != C64::new(0.0, 0.0)) {
        u.check_resolution()?;
    }
    Ok((u, LagrangianCloud { columns }))
}

impl LagrangianCloud {
    /// Largest `|Rossby weight| · envelope`, ignoring rounding noise.
    pub fn max_rossby_weight(&self) -> f64 {
        self.columns
            .iter()
            .filter(|c| c.rossby_weight.norm() > WEIGHT_NOISE * c.weight_bound)
            .map(|c| c.rossby_weight.norm() * c.envelope)
            .fold(0.0, f64::max)
    }

    /// Drift `F` on columns whose weighted envelope exceeds `rel` of the
    /// largest; `None` when no column carries Rossby weight.
    pub fn lambda_contact(&self, profile: &CoriolisProfile, rel: f64) -> Option<LambdaContact> {
        let top = self.max_rossby_weight();
        if top == 0.0 {
            return None;
        }
        let mut drifts = Vec::new();
        for c in &self.columns {
            if c.rossby_weight.norm() <= WEIGHT_NOISE * c.weight_bound || c.rossby_weight.norm() * c.envelope < rel * top {
                continue;
            }
            if let Ok(f) = drift_f_space_signed(profile, c.xi1, c.x2, c.xi2) {
                drifts.push(f);
            }
        }
        if drifts.is_empty() {
            return None;
        }
        let min_abs_drift = drifts.iter().map(|f| f.abs()).fold(f64::INFINITY, f64::min);
        let sign_change = drifts.iter().any(|&f| f > 0.0) && drifts.iter().any(|&f| f < 0.0);
        Some(LambdaContact { weighted_columns: drifts.len(), min_abs_drift, sign_change })
    }
}
