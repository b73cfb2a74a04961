//! Run configuration: JSON with unknown keys rejected, validated before any
//! computation or output.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rossbytrap_core::CoriolisProfile;
use rossbytrap_wave::Branch;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Rays,
    Lambda,
    Evolve,
    Modes,
    Spectrum,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Rays => "rays",
            Scenario::Lambda => "lambda",
            Scenario::Evolve => "evolve",
            Scenario::Modes => "modes",
            Scenario::Spectrum => "spectrum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must match the subcommand when present.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default = "default_profile")]
    pub profile: ProfileSpec,
    #[serde(default = "default_epsilon")]
    pub epsilon: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub rays: RaysConfig,
    #[serde(default)]
    pub lambda: LambdaConfig,
    #[serde(default)]
    pub evolve: EvolveConfig,
    #[serde(default)]
    pub modes: ModesConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: None,
            profile: default_profile(),
            epsilon: default_epsilon(),
            seed: 0,
            output: None,
            rays: RaysConfig::default(),
            lambda: LambdaConfig::default(),
            evolve: EvolveConfig::default(),
            modes: ModesConfig::default(),
            spectrum: SpectrumConfig::default(),
        }
    }
}

fn default_profile() -> ProfileSpec {
    ProfileSpec::Builtin { name: "2+sin".into() }
}

fn default_epsilon() -> Vec<f64> {
    vec![0.125, 0.0625, 0.03125]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    Builtin {
        name: String,
    },
    /// `b = constant + Σ cos[k−1] cos(kx₂) + sin[k−1] sin(kx₂)`.
    Fourier {
        #[serde(default)]
        name: Option<String>,
        constant: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<CoriolisProfile> {
        match self {
            ProfileSpec::Builtin { name } => CoriolisProfile::builtin(name)
                .ok_or_else(|| CliError::Config(format!("unknown built-in profile '{name}' (expected sin, 2+sin, 1+0.5cos)"))),
            ProfileSpec::Fourier { name, constant, cos, sin } => {
                CoriolisProfile::fourier(name.clone().unwrap_or_else(|| "fourier".into()), *constant, cos, sin)
                    .map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub x1: f64,
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RaysConfig {
    /// Initial points traced and written one file each.
    pub points: Vec<PointSpec>,
    pub t_end: f64,
    pub dt: f64,
    /// Random librating orbits added to the drift table.
    pub random_orbits: usize,
    pub random_xi1: (f64, f64),
    pub random_xi2_max: f64,
}

impl Default for RaysConfig {
    fn default() -> Self {
        RaysConfig {
            points: vec![PointSpec { x1: 0.0, x2: FRAC_PI_2 + 0.3, xi1: 2.0, xi2: 0.3 }],
            t_end: 50.0,
            dt: 0.01,
            random_orbits: 100,
            random_xi1: (0.3, 3.0),
            random_xi2_max: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambdaConfig {
    pub n_x2: usize,
    pub n_xi2: usize,
    pub xi2_max: f64,
    pub xi1_range: (f64, f64),
    /// Base points `(x₂, ξ₂)` of the small-`ξ₁` fits.
    pub scaling_points: Vec<(f64, f64)>,
    pub xi1_sequence: Vec<f64>,
    /// Number of cloud points checked for an extremal area.
    pub extremal_samples: usize,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            n_x2: 32,
            n_xi2: 32,
            xi2_max: 1.0,
            xi1_range: (0.05, 10.0),
            scaling_points: vec![(FRAC_PI_2 + 0.3, 0.2), (0.4, 0.3), (4.0, -0.2)],
            xi1_sequence: vec![0.4, 0.2, 0.1, 0.05],
            extremal_samples: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PolarizationSpec {
    Rossby,
    Plus,
    Minus,
    /// Constant `(R⁰, U₁⁰, U₂⁰)` as `[re, im]` pairs.
    Fixed([(f64, f64); 3]),
}

impl PolarizationSpec {
    pub fn to_wave(self) -> rossbytrap_wave::Polarization {
        use rossbytrap_wave::Polarization;
        match self {
            PolarizationSpec::Rossby => Polarization::Branch(Branch::Rossby),
            PolarizationSpec::Plus => Polarization::Branch(Branch::Plus),
            PolarizationSpec::Minus => Polarization::Branch(Branch::Minus),
            PolarizationSpec::Fixed(a) => Polarization::Fixed(a.map(|(re, im)| C64::new(re, im))),
        }
    }

    pub fn branch(self) -> Option<Branch> {
        match self {
            PolarizationSpec::Rossby => Some(Branch::Rossby),
            PolarizationSpec::Plus => Some(Branch::Plus),
            PolarizationSpec::Minus => Some(Branch::Minus),
            PolarizationSpec::Fixed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WkbConfig {
    /// `∂₁S`; absent means the first positive root of `F` at the centre.
    pub xi1: Option<f64>,
    /// `∂₂S`.
    pub xi2: f64,
    /// `x₁` centre; absent means the middle of the box.
    pub centre_x1: Option<f64>,
    pub centre_x2: f64,
    pub width: (f64, f64),
    pub scale: f64,
    pub polarization: PolarizationSpec,
    /// Keep only the exact branch content of the sampled datum.
    pub project: bool,
}

impl Default for WkbConfig {
    fn default() -> Self {
        WkbConfig {
            xi1: None,
            xi2: 0.25,
            centre_x1: None,
            centre_x2: 0.3,
            width: (1.5, 0.5),
            scale: 1.0,
            polarization: PolarizationSpec::Rossby,
            project: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    pub label: String,
    /// `L1 = 2π·box_periods`.
    pub box_periods: f64,
    pub wkb: WkbConfig,
    /// `Ω = {|x₁ − centre| ≤ half_width}`, optionally on a latitude arc.
    pub omega_half_width: f64,
    pub omega_x2: Option<(f64, f64)>,
    /// Scaled window `[T, 2T]`; the field is sampled at raw times `t/ε`.
    pub window: (f64, f64),
    pub samples: usize,
    /// Scaled time of the final norm check.
    pub unitarity_time: f64,
    /// Scaled times of binary snapshots.
    pub snapshots: Vec<f64>,
    /// Scaled times of Husimi marginals.
    pub husimi_times: Vec<f64>,
    pub husimi_stride: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            label: "trapped".into(),
            box_periods: 6.0,
            wkb: WkbConfig::default(),
            omega_half_width: 1.0,
            omega_x2: None,
            window: (0.4, 0.8),
            samples: 9,
            unitarity_time: 10.0,
            snapshots: Vec::new(),
            husimi_times: Vec::new(),
            husimi_stride: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesConfig {
    pub xi1: f64,
    pub centre_x2: f64,
    pub xi2: f64,
    /// Bump width of the round-trip datum and of the scalar-reduction datum.
    pub width: f64,
    pub scalar_width: f64,
    pub amplitude: [(f64, f64); 3],
    /// Scaled time of the scalar-reduction comparison.
    pub time: f64,
}

impl Default for ModesConfig {
    fn default() -> Self {
        ModesConfig {
            xi1: 2.5,
            centre_x2: 0.3,
            xi2: 0.25,
            width: 0.3,
            scalar_width: 0.5,
            amplitude: [(1.0, 0.0), (0.0, 0.5), (0.3, 0.0)],
            time: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub xi1: f64,
    pub levels: usize,
    /// Offset of the off-spectrum residual control.
    pub off_shift: f64,
    pub branch: BranchSpec,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { xi1: 2.5, levels: 5, off_shift: 0.1, branch: BranchSpec::Plus }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSpec {
    Plus,
    Minus,
}

impl BranchSpec {
    pub fn to_wave(self) -> Branch {
        match self {
            BranchSpec::Plus => Branch::Plus,
            BranchSpec::Minus => Branch::Minus,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Schema checks that serde cannot express.
    pub fn validate(&self, scenario: Scenario) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if let Some(s) = self.scenario {
            if s != scenario {
                return bad(format!("config is for '{}' but the '{}' subcommand was run", s.name(), scenario.name()));
            }
        }
        self.profile.build()?;
        if self.epsilon.is_empty() {
            return bad("epsilon list is empty".into());
        }
        for &e in &self.epsilon {
            if !(e.is_finite() && e > 0.0 && e <= 0.5) {
                return bad(format!("epsilon {e} must lie in (0, 0.5]"));
            }
        }
        let positive = |name: &str, v: f64| if v.is_finite() && v > 0.0 { Ok(()) } else { bad(format!("{name} = {v} must be positive")) };
        match scenario {
            Scenario::Rays => {
                let r = &self.rays;
                positive("rays.dt", r.dt)?;
                if !r.t_end.is_finite() {
                    return bad("rays.t_end must be finite".into());
                }
                if !(r.random_xi1.0 > 0.0 && r.random_xi1.1 > r.random_xi1.0) {
                    return bad("rays.random_xi1 must be an increasing positive range".into());
                }
                positive("rays.random_xi2_max", r.random_xi2_max)?;
            }
            Scenario::Lambda => {
                let l = &self.lambda;
                if l.n_x2 == 0 || l.n_xi2 == 0 {
                    return bad("lambda grid sizes must be positive".into());
                }
                positive("lambda.xi2_max", l.xi2_max)?;
                let (a, b) = l.xi1_range;
                if !(a.is_finite() && b.is_finite() && a * b > 0.0 && a.abs() < b.abs()) {
                    return bad(format!("lambda.xi1_range ({a}, {b}) must be one-signed and increasing in size"));
                }
                if l.xi1_sequence.len() < 2 || l.xi1_sequence.iter().any(|x| !(*x > 0.0)) {
                    return bad("lambda.xi1_sequence needs at least two positive values".into());
                }
            }
            Scenario::Evolve => {
                let v = &self.evolve;
                positive("evolve.box_periods", v.box_periods)?;
                positive("evolve.omega_half_width", v.omega_half_width)?;
                positive("evolve.wkb.width[0]", v.wkb.width.0)?;
                positive("evolve.wkb.width[1]", v.wkb.width.1)?;
                positive("evolve.unitarity_time", v.unitarity_time)?;
                let (t0, t1) = v.window;
                if !(t0 > 0.0 && t1 > t0 && t1.is_finite()) {
                    return bad(format!("evolve.window ({t0}, {t1}) must be increasing and positive"));
                }
                if v.samples < 2 {
                    return bad("evolve.samples must be at least 2".into());
                }
                if v.husimi_stride == 0 || !v.husimi_stride.is_power_of_two() {
                    return bad("evolve.husimi_stride must be a power of two".into());
                }
                if v.label.is_empty() || !v.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                    return bad("evolve.label must be a non-empty [A-Za-z0-9_-] string".into());
                }
                if v.snapshots.iter().chain(&v.husimi_times).any(|t| !(t.is_finite() && *t >= 0.0)) {
                    return bad("snapshot and Husimi times must be non-negative".into());
                }
            }
            Scenario::Modes => {
                let m = &self.modes;
                positive("modes.width", m.width)?;
                positive("modes.scalar_width", m.scalar_width)?;
                positive("modes.time", m.time)?;
                if !(m.xi1.abs() > 1e-3 && m.xi1.is_finite()) {
                    return bad("modes.xi1 must be nonzero".into());
                }
            }
            Scenario::Spectrum => {
                let s = &self.spectrum;
                if s.levels == 0 {
                    return bad("spectrum.levels must be positive".into());
                }
                if !s.xi1.is_finite() || !s.off_shift.is_finite() {
                    return bad("spectrum parameters must be finite".into());
                }
            }
        }
        Ok(())
    }
}

/// `L1` of an evolve run.
pub fn box_length(cfg: &EvolveConfig) -> f64 {
    TAU * cfg.box_periods
}

/// Parse `a,b,c` into a list of positive values.
pub fn parse_epsilon_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| parse_fraction(t).ok_or_else(|| CliError::Config(format!("cannot parse epsilon '{t}'"))))
        .collect()
}

/// `0.125` or `1/8`.
fn parse_fraction(t: &str) -> Option<f64> {
    match t.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => t.parse().ok(),
    }
}
