//! Full-system evolution of a WKB datum across an `ε`-sequence, with the
//! local mass on `Ω`, the norm drift, snapshots and Husimi marginals.

use rossbytrap_core::*;
use rossbytrap_wave::omega::RegionOmega;
use rossbytrap_wave::propagator::DEFAULT_SKIP;
use rossbytrap_wave::{husimi_x1, husimi_x2, local_mass, Envelope, Grid2D, HusimiMarginal, Phase, Propagator, StateField, WkbSpec};
use serde::Serialize;

use crate::config::{box_length, EvolveConfig, RunConfig};
use crate::error::{CliError, Context, Result};
use crate::output::{eps_tag, num, GridRecord, OutputDir};

pub const EVOLVE_HEADER: [&str; 3] = ["t", "local_mass", "total_mass"];
pub const HUSIMI_HEADER: [&str; 3] = ["y", "eta", "density"];

/// Envelope widths the wrap-around horizon keeps clear of `Ω`.
const ENVELOPE_WIDTHS: f64 = 6.0;

/// Largest scaled time at which the local mass or a snapshot is taken.
fn last_observed(cfg: &EvolveConfig) -> f64 {
    cfg.snapshots.iter().chain(&cfg.husimi_times).copied().fold(cfg.window.1, f64::max)
}

/// Reject runs in which mass leaving one side of the periodic box could
/// re-enter `Ω` from the other before the last observation; group speeds
/// are at most one.
pub fn check_horizon(cfg: &RunConfig) -> Result<()> {
    let v = &cfg.evolve;
    let l1 = box_length(v);
    let clear = l1 - 2.0 * v.omega_half_width - ENVELOPE_WIDTHS * v.wkb.width.0;
    let eps_min = cfg.epsilon.iter().copied().fold(f64::INFINITY, f64::min);
    let t_raw = last_observed(v) / eps_min;
    if clear <= t_raw {
        return Err(CliError::Config(format!(
            "box too short: {clear:.3} of clearance around Ω but raw time {t_raw:.3} at ε = {eps_min}; raise evolve.box_periods"
        )));
    }
    Ok(())
}

/// Scaled sample times of the window `[T₀, T₁]`.
pub fn window_times(cfg: &EvolveConfig) -> Vec<f64> {
    let (t0, t1) = cfg.window;
    let n = cfg.samples;
    (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect()
}

/// `ξ̄₁`: configured, or the smallest positive root of `F` at the centre.
pub fn phase_xi1(profile: &CoriolisProfile, cfg: &EvolveConfig) -> Result<f64> {
    if let Some(x) = cfg.wkb.xi1 {
        return Ok(x);
    }
    let roots = find_lambda_roots(profile, cfg.wkb.centre_x2, cfg.wkb.xi2, (0.05, 20.0)).context("trapped-set")?;
    Ok(roots.iter().map(|r| r.xi1_root).fold(f64::INFINITY, f64::min))
}

/// The datum of one `ε`, sampled, snapped and optionally projected.
pub fn initial_datum(profile: &CoriolisProfile, cfg: &EvolveConfig, grid: &Grid2D) -> Result<Prepared> {
    let w = &cfg.wkb;
    let xi1 = phase_xi1(profile, cfg)?;
    let centre_x1 = w.centre_x1.unwrap_or(0.5 * grid.l1);
    let mut envelope = Envelope::gaussian((centre_x1, w.centre_x2), w.width);
    envelope.scale = w.scale;
    let spec = WkbSpec { phase: Phase::linear(xi1, w.xi2), envelope, polarization: w.polarization.to_wave() }.snapped(grid);
    let (u, cloud) = rossbytrap_wave::wkb_initial(profile, &spec, grid).context("spectral-pde")?;
    let prop = Propagator::for_field(profile, &u, DEFAULT_SKIP).context("spectral-pde")?;
    let u = match (w.project, w.polarization.branch()) {
        (true, Some(br)) => prop.project_branch(&u, br),
        _ => u,
    };
    let contact = cloud.lambda_contact(profile, 1e-3).map(|c| Contact {
        weighted_columns: c.weighted_columns,
        min_abs_drift: c.min_abs_drift,
        sign_change: c.sign_change,
    });
    Ok(Prepared {
        u,
        prop,
        xi1: spec.phase.xi1,
        xi2: spec.phase.xi2,
        centre_x1,
        contact,
        max_rossby_weight: cloud.max_rossby_weight(),
    })
}

pub struct Prepared {
    pub u: StateField,
    pub prop: Propagator,
    pub xi1: f64,
    pub xi2: f64,
    pub centre_x1: f64,
    pub contact: Option<Contact>,
    pub max_rossby_weight: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Contact {
    pub weighted_columns: usize,
    pub min_abs_drift: f64,
    pub sign_change: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonRun {
    pub epsilon: f64,
    pub n1: usize,
    pub n2: usize,
    pub xi1: f64,
    pub xi2: f64,
    pub initial_mass: f64,
    pub initial_local_mass: f64,
    /// `min` of the local mass over the window.
    pub m: f64,
    /// `max |‖U(t)‖² − ‖U(0)‖²| / ‖U(0)‖²` over every sampled time.
    pub unitarity_drift: f64,
    pub dropped_energy: f64,
    pub max_rossby_weight: f64,
    pub lambda_contact: Option<Contact>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolveSummary {
    pub label: String,
    pub window: (f64, f64),
    pub runs: Vec<EpsilonRun>,
    /// `m(ε)/m(ε₀)` for the first `ε₀` of the sequence.
    pub floor_ratio: Vec<f64>,
    /// Slope of `log m` against `log(1/ε)` over the last two `ε`.
    pub decay_slope: Option<f64>,
    pub max_unitarity_drift: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Window,
    Unitarity,
    Snapshot,
    Husimi,
}

fn husimi_rows(h: &HusimiMarginal) -> Vec<Vec<String>> {
    let ne = h.eta.len();
    let mut rows = Vec::with_capacity(h.density.len());
    for (i, y) in h.y.iter().enumerate() {
        for (k, eta) in h.eta.iter().enumerate() {
            rows.push([*y, *eta, h.density[i * ne + k]].map(num).to_vec());
        }
    }
    rows
}

fn run_one(profile: &CoriolisProfile, cfg: &EvolveConfig, eps: f64, out: &mut OutputDir) -> Result<EpsilonRun> {
    let grid = Grid2D::minimal(box_length(cfg), eps).context("spectral-pde")?;
    out.record_grid(GridRecord { epsilon: eps, l1: grid.l1, n1: grid.n1, n2: grid.n2 });
    let d = initial_datum(profile, cfg, &grid)?;
    let omega = RegionOmega::rectangle(grid, (d.centre_x1 - cfg.omega_half_width, d.centre_x1 + cfg.omega_half_width), cfg.omega_x2)
        .context("spectral-pde")?;

    let mut schedule: Vec<(f64, Role)> = window_times(cfg).into_iter().map(|t| (t, Role::Window)).collect();
    schedule.push((cfg.unitarity_time, Role::Unitarity));
    schedule.extend(cfg.snapshots.iter().map(|&t| (t, Role::Snapshot)));
    schedule.extend(cfg.husimi_times.iter().map(|&t| (t, Role::Husimi)));
    schedule.sort_by(|a, b| a.0.total_cmp(&b.0));
    let raw: Vec<f64> = schedule.iter().map(|s| s.0 / eps).collect();

    let total0 = d.u.norm_sq();
    let local0 = local_mass(&d.u, &omega);
    let mut rows = Vec::with_capacity(schedule.len());
    let mut kept: Vec<(usize, StateField)> = Vec::new();
    let mut step = 0;
    let dropped = d
        .prop
        .evolve_series(&d.u, &raw, |u| {
            rows.push((schedule[step].0, schedule[step].1, local_mass(u, &omega), u.norm_sq()));
            if matches!(schedule[step].1, Role::Snapshot | Role::Husimi) {
                kept.push((step, u.clone()));
            }
            step += 1;
            Ok(())
        })
        .context("spectral-pde")?;

    let tag = eps_tag(eps);
    let label = &cfg.label;
    let csv: Vec<Vec<String>> = rows.iter().map(|r| [r.0, r.2, r.3].map(num).to_vec()).collect();
    out.write_csv(&format!("evolve_{label}_{tag}.csv"), &EVOLVE_HEADER, &csv)?;
    for (i, u) in &kept {
        let (t, role) = (schedule[*i].0, schedule[*i].1);
        let stem = format!("{label}_{tag}_t{t:?}");
        if role == Role::Snapshot {
            let mut bytes = Vec::new();
            u.write_binary(&mut bytes).map_err(|e| CliError::compute("spectral-pde", e))?;
            out.write_bytes(&format!("snapshots/{stem}.bin"), &bytes)?;
        } else {
            out.write_csv(&format!("husimi/{stem}_x1.csv"), &HUSIMI_HEADER, &husimi_rows(&husimi_x1(u, cfg.husimi_stride)))?;
            out.write_csv(&format!("husimi/{stem}_x2.csv"), &HUSIMI_HEADER, &husimi_rows(&husimi_x2(u, cfg.husimi_stride)))?;
        }
    }
    let m = rows.iter().filter(|r| r.1 == Role::Window).map(|r| r.2).fold(f64::INFINITY, f64::min);
    let unitarity_drift = rows.iter().map(|r| (r.3 - total0).abs() / total0).fold(0.0, f64::max);
    Ok(EpsilonRun {
        epsilon: eps,
        n1: grid.n1,
        n2: grid.n2,
        xi1: d.xi1,
        xi2: d.xi2,
        initial_mass: total0,
        initial_local_mass: local0,
        m,
        unitarity_drift,
        dropped_energy: dropped,
        max_rossby_weight: d.max_rossby_weight,
        lambda_contact: d.contact,
    })
}

/// Slope of `log m` against `log(1/ε)` between the last two runs.
pub fn decay_slope(runs: &[EpsilonRun]) -> Option<f64> {
    let [.., a, b] = runs else { return None };
    Some((b.m / a.m).ln() / (a.epsilon / b.epsilon).ln())
}

pub fn run(cfg: &RunConfig, out: &mut OutputDir) -> Result<()> {
    let profile = cfg.profile.build()?;
    let v = &cfg.evolve;
    let mut runs = Vec::with_capacity(cfg.epsilon.len());
    for &eps in &cfg.epsilon {
        let r = out.timed(&format!("evolve {}", eps_tag(eps)), |out| run_one(&profile, v, eps, out))?;
        runs.push(r);
    }
    let m0 = runs[0].m;
    let summary = EvolveSummary {
        label: v.label.clone(),
        window: v.window,
        floor_ratio: runs.iter().map(|r| r.m / m0).collect(),
        decay_slope: decay_slope(&runs),
        max_unitarity_drift: runs.iter().map(|r| r.unitarity_drift).fold(0.0, f64::max),
        runs,
    };
    out.write_json(&format!("evolve_{}_summary.json", v.label), &summary)
}
