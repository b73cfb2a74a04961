//! Poincaré levels of one well: direct against Bohr–Sommerfeld, the fitted
//! level shift, and scalar-symbol residuals on and off the spectrum.

use rossbytrap_core::CoriolisProfile;
use rossbytrap_wave::{bohr_sommerfeld_levels, fit_level_shift, scalar_residual_check, ResidualReport, SpectrumTable};
use serde::Serialize;

use crate::config::{RunConfig, SpectrumConfig};
use crate::error::{Context, Result};
use crate::output::{eps_tag, num, OutputDir};

pub const SPECTRUM_HEADER: [&str; 4] = ["k", "lambda_direct", "lambda_bs", "diff"];

#[derive(Debug, Clone, Serialize)]
pub struct FitFile {
    pub branch: String,
    pub xi1: f64,
    pub epsilon: Vec<f64>,
    pub shift: Vec<f64>,
    pub raw_error: Vec<f64>,
    pub shifted_error: Vec<f64>,
    pub raw_slope: f64,
    pub shifted_slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub epsilon: f64,
    pub shift: f64,
    pub lambda: Vec<f64>,
    pub residual: Vec<f64>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualFile {
    pub xi1: f64,
    pub on_spectrum: Vec<ResidualRow>,
    pub off_spectrum: Vec<ResidualRow>,
    /// Consecutive log-log slopes of the on-spectrum maximum against `ε`.
    pub slopes: Vec<f64>,
}

/// Grid size used for both the direct levels and the residuals.
pub fn points(eps: f64) -> usize {
    ((8.0 / eps).ceil() as usize).next_power_of_two()
}

pub fn tables(profile: &CoriolisProfile, cfg: &SpectrumConfig, eps: &[f64]) -> Result<Vec<SpectrumTable>> {
    eps.iter()
        .map(|&e| bohr_sommerfeld_levels(profile, cfg.xi1, e, points(e), cfg.levels, cfg.branch.to_wave()).context("mode-quantization"))
        .collect()
}

fn residual_row(r: &ResidualReport) -> ResidualRow {
    ResidualRow {
        epsilon: r.epsilon,
        shift: r.shift,
        lambda: r.entries.iter().map(|e| e.lambda).collect(),
        residual: r.entries.iter().map(|e| e.residual).collect(),
        max_residual: r.max_residual,
    }
}

pub fn run(cfg: &RunConfig, out: &mut OutputDir) -> Result<()> {
    let profile = cfg.profile.build()?;
    let sc = &cfg.spectrum;
    let tabs = out.timed("levels", |_| tables(&profile, sc, &cfg.epsilon))?;
    for t in &tabs {
        let rows: Vec<Vec<String>> = t
            .rows
            .iter()
            .map(|r| vec![r.k.to_string(), num(r.lambda_direct), num(r.lambda_bs), num(r.diff)])
            .collect();
        out.write_csv(&format!("spectrum_{}.csv", eps_tag(t.epsilon)), &SPECTRUM_HEADER, &rows)?;
    }
    if tabs.len() >= 2 {
        let fit = fit_level_shift(&tabs);
        out.write_json(
            "spectrum_fit.json",
            &FitFile {
                branch: sc.branch.to_wave().name().to_string(),
                xi1: sc.xi1,
                epsilon: cfg.epsilon.clone(),
                shift: fit.shift,
                raw_error: fit.raw_error,
                shifted_error: fit.shifted_error,
                raw_slope: fit.raw_slope,
                shifted_slope: fit.shifted_slope,
            },
        )?;
    }
    let (on, off) = out.timed("residuals", |_| {
        let mut on = Vec::new();
        let mut off = Vec::new();
        for &e in &cfg.epsilon {
            let n = points(e);
            on.push(residual_row(&scalar_residual_check(&profile, sc.xi1, e, n, sc.levels, 0.0).context("mode-quantization")?));
            off.push(residual_row(&scalar_residual_check(&profile, sc.xi1, e, n, sc.levels, sc.off_shift).context("mode-quantization")?));
        }
        Ok((on, off))
    })?;
    let slopes = on
        .windows(2)
        .map(|w| (w[0].max_residual / w[1].max_residual).ln() / (w[0].epsilon / w[1].epsilon).ln())
        .collect();
    out.write_json("residuals.json", &ResidualFile { xi1: sc.xi1, on_spectrum: on, off_spectrum: off, slopes })
}
