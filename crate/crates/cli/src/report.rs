//! Comparison tables and figures assembled from finished run directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{CliError, Result};
use crate::output::{eps_tag, num, read_numeric_csv, sha256_hex, OutputDir, RunManifest};
use crate::scenario::evolve::EVOLVE_HEADER;
use crate::scenario::lambda::LAMBDA_HEADER;
use crate::scenario::rays::DRIFT_HEADER;
use crate::scenario::spectrum::SPECTRUM_HEADER;
use crate::svg::{ramp, Chart, Marker, Series, PALETTE};

struct Run {
    dir: PathBuf,
    manifest: RunManifest,
}

impl Run {
    /// Read an output listed in the manifest, checking its digest.
    fn csv(&self, name: &str, header: &[&str]) -> Result<Vec<Vec<f64>>> {
        let rec = self
            .manifest
            .output(name)
            .ok_or_else(|| CliError::ManifestMismatch(format!("{}: manifest lists no '{name}'", self.dir.display())))?;
        let path = self.dir.join(name);
        let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        if sha256_hex(&bytes) != rec.sha256 {
            return Err(CliError::ManifestMismatch(format!("{}: contents differ from the manifest digest", path.display())));
        }
        read_numeric_csv(&path, header)
    }
}

fn uses_epsilon(scenario: &str) -> bool {
    matches!(scenario, "evolve" | "modes" | "spectrum")
}

/// The common `ε`-sequence of every run that depends on one.
fn common_epsilon(runs: &[Run]) -> Result<Vec<f64>> {
    let mut seq: Option<(&Path, &Vec<f64>)> = None;
    for r in runs.iter().filter(|r| uses_epsilon(&r.manifest.scenario)) {
        match seq {
            None => seq = Some((&r.dir, &r.manifest.epsilon)),
            Some((d, e)) if e != &r.manifest.epsilon => {
                return Err(CliError::ManifestMismatch(format!(
                    "ε-sequence {:?} of {} differs from {:?} of {}",
                    r.manifest.epsilon,
                    r.dir.display(),
                    e,
                    d.display()
                )))
            }
            _ => {}
        }
    }
    Ok(seq.map(|s| s.1.clone()).unwrap_or_default())
}

fn dichotomy(runs: &[Run], out: &mut OutputDir) -> Result<()> {
    let mut rows = Vec::new();
    let mut chart = Chart::new("Local mass in Ω", "t (scaled)", "local mass");
    chart.log_y = true;
    let mut colour = 0;
    for r in runs.iter().filter(|r| r.manifest.scenario == "evolve") {
        let label = r.manifest.label.clone().unwrap_or_else(|| "run".into());
        let trapped = label.contains("trapped") && !label.contains("untrapped");
        // later samples only check the norm; their local mass is past the wrap horizon
        let t_end = r.manifest.config["evolve"]["window"][1].as_f64().unwrap_or(f64::INFINITY);
        for &eps in &r.manifest.epsilon {
            let mut data = r.csv(&format!("evolve_{label}_{}.csv", eps_tag(eps)), &EVOLVE_HEADER)?;
            data.retain(|d| d[0] <= t_end);
            for d in &data {
                rows.push(vec![label.clone(), num(eps), num(d[0]), num(d[1])]);
            }
            chart.series.push(Series {
                name: format!("{label} ε={eps}"),
                points: data.iter().map(|d| (d[0], d[1])).collect(),
                color: PALETTE[colour % PALETTE.len()].into(),
                dashed: !trapped,
            });
            colour += 1;
        }
    }
    if chart.series.is_empty() {
        return Ok(());
    }
    out.write_csv("dichotomy.csv", &["label", "epsilon", "t", "local_mass"], &rows)?;
    out.write_bytes("dichotomy.svg", chart.render().as_bytes())
}

fn f_table(runs: &[Run], out: &mut OutputDir) -> Result<()> {
    let mut rows = Vec::new();
    for r in runs.iter().filter(|r| r.manifest.scenario == "rays") {
        for d in r.csv("drift.csv", &DRIFT_HEADER)? {
            let (ft, fs, fa) = (d[3], d[4], d[5]);
            let mut row: Vec<String> = d[..6].iter().map(|v| num(*v)).collect();
            row.push(num((ft.abs() - fs).abs() / ft.abs()));
            row.push(num((ft - fa).abs() / ft.abs()));
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(());
    }
    out.write_csv("f_table.csv", &["xi1", "x2", "xi2", "F_time", "F_space", "F_action", "rel_space", "rel_action"], &rows)
}

fn bs_table(runs: &[Run], out: &mut OutputDir) -> Result<()> {
    let mut rows = Vec::new();
    for r in runs.iter().filter(|r| r.manifest.scenario == "spectrum") {
        for &eps in &r.manifest.epsilon {
            for d in r.csv(&format!("spectrum_{}.csv", eps_tag(eps)), &SPECTRUM_HEADER)? {
                rows.push(vec![num(eps), (d[0] as usize).to_string(), num(d[1]), num(d[2]), num(d[3])]);
            }
        }
    }
    if rows.is_empty() {
        return Ok(());
    }
    out.write_csv("bs_table.csv", &["epsilon", "k", "lambda_direct", "lambda_bs", "diff"], &rows)
}

fn lambda_cloud(runs: &[Run], out: &mut OutputDir) -> Result<()> {
    let mut pts = Vec::new();
    for r in runs.iter().filter(|r| r.manifest.scenario == "lambda") {
        pts.extend(r.csv("lambda.csv", &LAMBDA_HEADER)?);
    }
    if pts.is_empty() {
        return Ok(());
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p[2]), a.1.max(p[2])));
    let mut chart = Chart::new("Trapped set Λ", "x2", "xi2");
    chart.markers = pts
        .iter()
        .map(|p| Marker { x: p[0], y: p[1], color: ramp(if hi > lo { (p[2] - lo) / (hi - lo) } else { 0.5 }) })
        .collect();
    chart.notes = vec![format!("{} roots", pts.len()), format!("xi1 from {lo:.3}"), format!("(blue) to {hi:.3} (red)")];
    let rows: Vec<Vec<String>> = pts.iter().map(|p| p[..3].iter().map(|v| num(*v)).collect()).collect();
    out.write_csv("lambda_cloud.csv", &["x2", "xi2", "xi1_root"], &rows)?;
    out.write_bytes("lambda_cloud.svg", chart.render().as_bytes())
}

/// Build every table and figure the inputs support into `dest`.
pub fn report(inputs: &[PathBuf], dest: &Path) -> Result<RunManifest> {
    if inputs.is_empty() {
        return Err(CliError::Usage("report needs at least one run directory".into()));
    }
    let mut runs = Vec::with_capacity(inputs.len());
    for dir in inputs {
        let manifest = RunManifest::load(dir)?;
        if manifest.scenario == "report" {
            return Err(CliError::Usage(format!("{} is a report, not a run", dir.display())));
        }
        runs.push(Run { dir: dir.clone(), manifest });
    }
    let epsilon = common_epsilon(&runs)?;
    let mut out = OutputDir::create(dest)?;
    dichotomy(&runs, &mut out)?;
    f_table(&runs, &mut out)?;
    bs_table(&runs, &mut out)?;
    lambda_cloud(&runs, &mut out)?;
    let mut scenarios: BTreeMap<String, usize> = BTreeMap::new();
    for r in &runs {
        *scenarios.entry(r.manifest.scenario.clone()).or_default() += 1;
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: "report".into(),
        label: None,
        profile: runs[0].manifest.profile.clone(),
        epsilon,
        seed: 0,
        config: json!({
            "inputs": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "scenarios": scenarios,
        }),
        grids: Vec::new(),
        outputs: Vec::new(),
        timings: Vec::new(),
    };
    out.finish(manifest)
}
