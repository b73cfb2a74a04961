//! Command-line orchestration of the rotating shallow-water studies: config
//! validation, scenario runs, atomic manifests and cross-run reports.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod scenario;
pub mod svg;

use std::path::{Path, PathBuf};

pub use config::{RunConfig, Scenario};
pub use error::{CliError, Result};
pub use output::RunManifest;

/// Command-line overrides of a scenario run.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub epsilon_list: Option<String>,
}

/// Load, override and validate a configuration; nothing is written.
pub fn prepare(scenario: Scenario, ov: &Overrides) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = match &ov.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(list) = &ov.epsilon_list {
        cfg.epsilon = config::parse_epsilon_list(list)?;
    }
    if let Some(o) = &ov.out {
        cfg.output = Some(o.clone());
    }
    cfg.validate(scenario)?;
    if scenario == Scenario::Evolve {
        scenario::evolve::check_horizon(&cfg)?;
    }
    let out = cfg.output.clone().ok_or_else(|| CliError::Config("no output directory: pass --out or set \"output\"".into()))?;
    Ok((cfg, out))
}

/// Run a validated configuration into `dest` and write its manifest last.
pub fn run_scenario(scenario: Scenario, cfg: &RunConfig, dest: &Path) -> Result<RunManifest> {
    let profile = cfg.profile.build()?;
    let mut out = output::OutputDir::create(dest)?;
    match scenario {
        Scenario::Rays => scenario::rays::run(cfg, &mut out)?,
        Scenario::Lambda => scenario::lambda::run(cfg, &mut out)?,
        Scenario::Evolve => scenario::evolve::run(cfg, &mut out)?,
        Scenario::Modes => scenario::modes::run(cfg, &mut out)?,
        Scenario::Spectrum => scenario::spectrum::run(cfg, &mut out)?,
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: scenario.name().into(),
        label: (scenario == Scenario::Evolve).then(|| cfg.evolve.label.clone()),
        profile: profile.name().into(),
        epsilon: cfg.epsilon.clone(),
        seed: cfg.seed,
        config: serde_json::to_value(cfg).map_err(|e| CliError::compute("serialization", e))?,
        grids: Vec::new(),
        outputs: Vec::new(),
        timings: Vec::new(),
    };
    out.finish(manifest)
}
