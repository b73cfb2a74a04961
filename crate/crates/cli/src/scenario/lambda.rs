//! The trapped set `Λ = {F = 0}` on an `(x₂, ξ₂)` grid, small-`ξ₁` scaling
//! and the extremal-area check at sampled roots.

use rayon::prelude::*;
use rossbytrap_core::quad::Quadrature;
use rossbytrap_core::trapped::{lambda_node, LambdaCloud, LambdaGrid, LambdaOptions};
use rossbytrap_core::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::output::{num, OutputDir};

pub const LAMBDA_HEADER: [&str; 4] = ["x2", "xi2", "xi1_root", "F_residual"];

#[derive(Debug, Clone, Serialize)]
pub struct CloudSummary {
    pub nodes: usize,
    pub nodes_with_roots: usize,
    pub coverage: f64,
    pub points: usize,
    pub max_roots_per_node: usize,
    pub max_neighbor_jump: f64,
    pub max_neighbor_slope: f64,
    pub max_abs_residual: f64,
    pub failed_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingEntry {
    pub x2: f64,
    pub xi2: f64,
    pub slope: Option<f64>,
    pub min_f_times_xi1: Option<f64>,
    pub root_free_below: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalEntry {
    pub x2: f64,
    pub xi2: f64,
    pub xi1_root: f64,
    pub slope_left: Option<f64>,
    pub slope_right: Option<f64>,
    pub flat_ratio: Option<f64>,
    pub sign_change: bool,
    pub extremal: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaSummaryFile {
    pub cloud: CloudSummary,
    pub scaling: Vec<ScalingEntry>,
    pub extremal: Vec<ExtremalEntry>,
    pub sign_changes: usize,
}

/// Sample `Λ` on the configured grid; node order is the grid order whatever
/// the thread count.
pub fn sample(profile: &CoriolisProfile, cfg: &RunConfig) -> LambdaCloud {
    let lc = &cfg.lambda;
    let grid = LambdaGrid::uniform(lc.n_x2, lc.n_xi2, lc.xi2_max);
    let (quad, opts) = (Quadrature::default(), LambdaOptions::default());
    let nodes = grid
        .nodes()
        .par_iter()
        .map(|&(x2, xi2)| lambda_node(profile, x2, xi2, lc.xi1_range, 1e-3, &opts, &quad))
        .collect();
    LambdaCloud::from_nodes(grid, nodes)
}

/// Evenly strided cloud points.
fn strided(cloud: &LambdaCloud, count: usize) -> Vec<LambdaPoint> {
    let all: Vec<LambdaPoint> = cloud.points().copied().collect();
    if all.is_empty() || count == 0 {
        return Vec::new();
    }
    let step = (all.len() as f64 / count as f64).max(1.0);
    (0..count.min(all.len())).map(|i| all[((i as f64 + 0.5) * step) as usize % all.len()]).collect()
}

pub fn run(cfg: &RunConfig, out: &mut OutputDir) -> Result<()> {
    let profile = cfg.profile.build()?;
    let lc = &cfg.lambda;
    let cloud = out.timed("lambda", |out| {
        let cloud = sample(&profile, cfg);
        let rows: Vec<Vec<String>> = cloud.points().map(|p| [p.x2, p.xi2, p.xi1_root, p.f_residual].map(num).to_vec()).collect();
        out.write_csv("lambda.csv", &LAMBDA_HEADER, &rows)?;
        Ok(cloud)
    })?;
    let scaling = out.timed("scaling", |_| {
        Ok(lc
            .scaling_points
            .par_iter()
            .map(|&(x2, xi2)| match smallxi_scaling(&profile, x2, xi2, &lc.xi1_sequence) {
                Ok(f) => ScalingEntry {
                    x2,
                    xi2,
                    slope: Some(f.slope),
                    min_f_times_xi1: Some(f.min_f_times_xi1),
                    root_free_below: Some(f.root_free_below),
                    error: None,
                },
                Err(e) => ScalingEntry { x2, xi2, slope: None, min_f_times_xi1: None, root_free_below: None, error: Some(e.to_string()) },
            })
            .collect::<Vec<_>>())
    })?;
    let extremal = out.timed("extremal", |_| {
        Ok(strided(&cloud, lc.extremal_samples)
            .par_iter()
            .map(|lp| match extremal_area_check(&profile, lp) {
                Ok(r) => ExtremalEntry {
                    x2: lp.x2,
                    xi2: lp.xi2,
                    xi1_root: lp.xi1_root,
                    slope_left: Some(r.slope_left),
                    slope_right: Some(r.slope_right),
                    flat_ratio: Some(r.flat_ratio),
                    sign_change: r.sign_change,
                    extremal: r.is_extremal(),
                    error: None,
                },
                Err(e) => ExtremalEntry {
                    x2: lp.x2,
                    xi2: lp.xi2,
                    xi1_root: lp.xi1_root,
                    slope_left: None,
                    slope_right: None,
                    flat_ratio: None,
                    sign_change: false,
                    extremal: false,
                    error: Some(e.to_string()),
                },
            })
            .collect::<Vec<_>>())
    })?;
    let s = &cloud.summary;
    let summary = LambdaSummaryFile {
        cloud: CloudSummary {
            nodes: s.nodes,
            nodes_with_roots: s.nodes_with_roots,
            coverage: s.coverage,
            points: s.points,
            max_roots_per_node: s.max_roots_per_node,
            max_neighbor_jump: s.max_neighbor_jump,
            max_neighbor_slope: s.max_neighbor_slope,
            max_abs_residual: s.max_abs_residual,
            failed_nodes: cloud.nodes.iter().filter(|n| n.error.is_some()).count(),
        },
        sign_changes: extremal.iter().filter(|e| e.sign_change).count(),
        scaling,
        extremal,
    };
    out.write_json("lambda_summary.json", &summary)
}
