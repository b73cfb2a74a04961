//! Ray traces and the drift table `F` by three methods.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rossbytrap_core::orbit::Libration;
use rossbytrap_core::rays::OrbitClass;
use rossbytrap_core::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::config::RunConfig;
use crate::error::{Context, Result};
use crate::output::{num, OutputDir};

pub const RAY_HEADER: [&str; 6] = ["t", "x1", "x2", "xi1", "xi2", "E"];
pub const DRIFT_HEADER: [&str; 7] = ["xi1", "x2", "xi2", "F_time", "F_space", "F_action", "period"];

/// One row of the drift table; failed methods are `NaN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftRow {
    pub xi1: f64,
    pub x2: f64,
    pub xi2: f64,
    pub f_time: f64,
    pub f_space: f64,
    pub f_action: f64,
    pub period: f64,
}

impl DriftRow {
    pub fn compute(profile: &CoriolisProfile, pt: &PhasePoint) -> Self {
        let period = find_period(profile, pt).map(|d| d.period).unwrap_or(f64::NAN);
        DriftRow {
            xi1: pt.xi1,
            x2: pt.x2,
            xi2: pt.xi2,
            f_time: drift_f_time(profile, pt).unwrap_or(f64::NAN),
            f_space: drift_f_space(profile, pt.xi1, pt.x2, pt.xi2).unwrap_or(f64::NAN),
            f_action: drift_f_action(profile, pt).unwrap_or(f64::NAN),
            period,
        }
    }

    fn cells(&self) -> Vec<String> {
        [self.xi1, self.x2, self.xi2, self.f_time, self.f_space, self.f_action, self.period].map(num).to_vec()
    }

    /// `| |F_time| − F_space | / |F_time|`.
    pub fn space_error(&self) -> f64 {
        (self.f_time.abs() - self.f_space).abs() / self.f_time.abs()
    }

    pub fn action_error(&self) -> f64 {
        (self.f_time - self.f_action).abs() / self.f_time.abs()
    }
}

#[derive(Debug, Clone, Serialize)]
struct RaySummary {
    file: String,
    start: [f64; 4],
    samples: usize,
    max_e_drift: f64,
    xi1_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
struct DriftSummary {
    rows: usize,
    complete_rows: usize,
    max_space_error: f64,
    max_action_error: f64,
    sign_agreement: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Summary {
    rays: Vec<RaySummary>,
    failures: Vec<String>,
    drift: DriftSummary,
}

/// Base points whose orbits librate with a period below the cutoff.
pub fn librating_sample(profile: &CoriolisProfile, n: usize, xi1: (f64, f64), xi2_max: f64, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 100 * n.max(1) {
        attempts += 1;
        let k = rng.random_range(xi1.0..xi1.1) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let x2 = rng.random_range(0.0..TAU);
        let q = rng.random_range(-xi2_max..xi2_max);
        let pt = PhasePoint::new(0.0, x2, k, q);
        if Libration::through(profile, k, x2, q).is_err() {
            continue;
        }
        if matches!(find_period(profile, &pt), Ok(d) if d.classification == OrbitClass::Periodic) {
            out.push(pt);
        }
    }
    out
}

pub fn run(cfg: &RunConfig, out: &mut OutputDir) -> Result<()> {
    let profile = cfg.profile.build()?;
    let rc = &cfg.rays;
    let mut rays = Vec::new();
    let mut failures = Vec::new();
    out.timed("rays", |out| {
        for (i, p) in rc.points.iter().enumerate() {
            let pt = PhasePoint::new(p.x1, p.x2, p.xi1, p.xi2);
            let file = format!("rays/ray_{i:03}.csv");
            match integrate_ray(&profile, &pt, rc.t_end, rc.dt) {
                Ok(tr) => {
                    let rows: Vec<Vec<String>> = tr
                        .samples
                        .iter()
                        .map(|s| [s.time, s.point.x1, s.point.x2, s.point.xi1, s.point.xi2, s.energy_e].map(num).to_vec())
                        .collect();
                    out.write_csv(&file, &RAY_HEADER, &rows)?;
                    rays.push(RaySummary {
                        file,
                        start: [p.x1, p.x2, p.xi1, p.xi2],
                        samples: tr.samples.len(),
                        max_e_drift: tr.max_e_drift,
                        xi1_drift: tr.xi1_drift,
                    });
                }
                Err(e) => failures.push(format!("ray {i}: {e}")),
            }
        }
        Ok(())
    })?;
    let drift = out.timed("drift", |out| {
        let mut pts: Vec<PhasePoint> = rc.points.iter().map(|p| PhasePoint::new(0.0, p.x2, p.xi1, p.xi2)).collect();
        let sample = librating_sample(&profile, rc.random_orbits, rc.random_xi1, rc.random_xi2_max, cfg.seed);
        if sample.len() < rc.random_orbits {
            failures.push(format!("only {} of {} random librating orbits found", sample.len(), rc.random_orbits));
        }
        pts.extend(sample);
        let rows: Vec<DriftRow> = pts.par_iter().map(|pt| DriftRow::compute(&profile, pt)).collect();
        out.write_csv("drift.csv", &DRIFT_HEADER, &rows.iter().map(DriftRow::cells).collect::<Vec<_>>())?;
        let complete: Vec<&DriftRow> = rows.iter().filter(|r| r.f_time.is_finite() && r.f_space.is_finite() && r.f_action.is_finite()).collect();
        let agree = complete.iter().filter(|r| r.f_time.signum() == r.f_action.signum()).count();
        Ok(DriftSummary {
            rows: rows.len(),
            complete_rows: complete.len(),
            max_space_error: complete.iter().map(|r| r.space_error()).fold(0.0, f64::max),
            max_action_error: complete.iter().map(|r| r.action_error()).fold(0.0, f64::max),
            sign_agreement: agree as f64 / complete.len().max(1) as f64,
        })
    })?;
    out.write_json("rays_summary.json", &Summary { rays, failures, drift })
}

/// Convenience for callers that only need the `F` value at a point.
pub fn drift_at(profile: &CoriolisProfile, pt: &PhasePoint) -> Result<f64> {
    drift_f_time(profile, pt).context("ray-dynamics")
}
