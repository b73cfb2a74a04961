//! Mode decomposition round trip and scalar Rossby reduction on one
//! `x₁`-mode across the `ε`-sequence.

use num_complex::Complex64 as C64;
use rossbytrap_core::CoriolisProfile;
use rossbytrap_wave::modes::{Projector, Reconstruction};
use rossbytrap_wave::propagator::ModeEigen;
use rossbytrap_wave::{Branch, ScalarRossby};
use serde::Serialize;
use std::f64::consts::TAU;

use crate::config::{ModesConfig, RunConfig};
use crate::error::{Context, Result};
use crate::output::{num, OutputDir};

pub const MODES_HEADER: [&str; 3] = ["epsilon", "round_trip", "scalar_vs_full"];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModesRow {
    pub epsilon: f64,
    /// `‖U − Σⱼ𝐐ʲ𝐏ʲU‖ / ‖U‖`.
    pub round_trip: f64,
    /// `‖e^{tA}𝐐⁰u − 𝐐⁰e^{itτ₀}u‖ / ‖𝐐⁰u‖` at `t = time/ε`.
    pub scalar_vs_full: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModesSummary {
    pub xi1: f64,
    pub rows: Vec<ModesRow>,
    /// Consecutive log-log slopes against `ε`.
    pub round_trip_slopes: Vec<f64>,
    pub scalar_slopes: Vec<f64>,
}

type Triple = [Vec<C64>; 3];

fn bump(n: usize, eps: f64, x0: f64, xi2: f64, width: f64) -> Vec<C64> {
    let h = TAU / n as f64;
    (0..n)
        .map(|j| {
            let x = j as f64 * h;
            C64::from_polar((-(1.0 - (x - x0).cos()) / (width * width)).exp(), xi2 * x / eps)
        })
        .collect()
}

fn datum(cfg: &ModesConfig, n: usize, eps: f64, width: f64) -> Triple {
    let a = bump(n, eps, cfg.centre_x2, cfg.xi2, width);
    cfg.amplitude.map(|(re, im)| a.iter().map(|v| v * C64::new(re, im)).collect())
}

fn norm(v: &[Vec<C64>]) -> f64 {
    v.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y)).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
}

fn slopes(eps: &[f64], v: &[f64]) -> Vec<f64> {
    eps.windows(2).zip(v.windows(2)).map(|(e, r)| (r[0] / r[1]).ln() / (e[0] / e[1]).ln()).collect()
}

pub fn measure(profile: &CoriolisProfile, cfg: &ModesConfig, eps: f64) -> Result<ModesRow> {
    let n = ((8.0 / eps).ceil() as usize).next_power_of_two();
    let pr = Projector::new(profile, eps, cfg.xi1, n).context("mode-quantization")?;
    let rc = Reconstruction::new(profile, eps, cfg.xi1, n).context("mode-quantization")?;

    let u = datum(cfg, n, eps, cfg.width);
    let parts = pr.project([&u[0], &u[1], &u[2]]);
    let mut back: Triple = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); n]);
    for b in Branch::ALL {
        for (acc, q) in back.iter_mut().zip(rc.reconstruct(b, &parts[b.index()])) {
            acc.iter_mut().zip(q).for_each(|(x, y)| *x += y);
        }
    }
    let round_trip = distance(&back, &u) / norm(&u);

    let u = datum(cfg, n, eps, cfg.scalar_width);
    let parts = pr.project([&u[0], &u[1], &u[2]]);
    let ur = rc.reconstruct(Branch::Rossby, &parts[Branch::Rossby.index()]);
    let t = cfg.time / eps;
    let full = ModeEigen::at_xi1(profile, eps, cfg.xi1, n).context("spectral-pde")?.evolve_slot([&ur[0], &ur[1], &ur[2]], t);
    let us = ScalarRossby::new(profile, eps, cfg.xi1, n).context("mode-quantization")?.evolve(&parts[Branch::Rossby.index()], t);
    let rs = rc.reconstruct(Branch::Rossby, &us);
    Ok(ModesRow { epsilon: eps, round_trip, scalar_vs_full: distance(&full, &rs) / norm(&ur) })
}

pub fn run(cfg: &RunConfig, out: &mut OutputDir) -> Result<()> {
    let profile = cfg.profile.build()?;
    let mc = &cfg.modes;
    let rows = out.timed("modes", |_| cfg.epsilon.iter().map(|&e| measure(&profile, mc, e)).collect::<Result<Vec<_>>>())?;
    let csv: Vec<Vec<String>> = rows.iter().map(|r| [r.epsilon, r.round_trip, r.scalar_vs_full].map(num).to_vec()).collect();
    out.write_csv("modes.csv", &MODES_HEADER, &csv)?;
    let eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let summary = ModesSummary {
        xi1: mc.xi1,
        round_trip_slopes: slopes(&eps, &rows.iter().map(|r| r.round_trip).collect::<Vec<_>>()),
        scalar_slopes: slopes(&eps, &rows.iter().map(|r| r.scalar_vs_full).collect::<Vec<_>>()),
        rows,
    };
    out.write_json("modes.json", &summary)
}
