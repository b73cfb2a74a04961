//! End-to-end acceptance run: every study goes through the same scenario
//! runners as the command line, and each criterion prints one verdict line.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rossbytrap::config::PolarizationSpec;
use rossbytrap::output::read_numeric_csv;
use rossbytrap::scenario::rays::DRIFT_HEADER;
use rossbytrap::{run_scenario, RunConfig, Scenario};
use rossbytrap_core::mat3;
use rossbytrap_core::symbols::{jacobian_closed_form, k_symbol};
use rossbytrap_core::*;
use serde_json::Value;
use std::f64::consts::TAU;
use tempfile::TempDir;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().map(|a| a.iter().map(f).collect()).unwrap_or_default()
}

fn study(root: &Path, name: &str, scenario: Scenario, edit: impl FnOnce(&mut RunConfig)) -> std::path::PathBuf {
    let mut cfg = RunConfig::default();
    edit(&mut cfg);
    let dir = root.join(name);
    cfg.output = Some(dir.clone());
    cfg.validate(scenario).unwrap();
    if scenario == Scenario::Evolve {
        rossbytrap::scenario::evolve::check_horizon(&cfg).unwrap();
    }
    run_scenario(scenario, &cfg, &dir).unwrap();
    dir
}

/// Norm conservation of both evolve studies up to `t = 10/ε`.
fn unitarity(trapped: &Value, untrapped: &Value) -> Verdict {
    let d = f(&trapped["max_unitarity_drift"]).max(f(&untrapped["max_unitarity_drift"]));
    verdict(d <= 1e-10, format!("max relative norm drift {d:.2e} ≤ 1e-10 up to t = 10/ε"))
}

/// Symbol identities on 10⁴ random admissible points.
fn symbols() -> Verdict {
    let profiles = [
        CoriolisProfile::two_plus_sin(),
        CoriolisProfile::sin(),
        CoriolisProfile::one_plus_half_cos(),
        CoriolisProfile::fourier("mixed", 0.3, &[0.5, 0.0, 0.2], &[1.0, -0.4]).unwrap(),
    ];
    let adm = Admissibility::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut n, mut cubic, mut jac, mut pq) = (0, 0.0f64, 0.0f64, 0.0f64);
    while n < 10_000 {
        let p = &profiles[n % profiles.len()];
        let x2 = rng.random_range(0.0..TAU);
        let xi1 = rng.random_range(0.01..4.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let xi2 = rng.random_range(-4.0..4.0);
        if !adm.admits_xi(p, x2, xi1, xi2) {
            continue;
        }
        let pt = PhasePoint::new(0.0, x2, xi1, xi2);
        let v = p.eval(x2);
        let k = k_symbol(xi1, xi2, v.b);
        for eps in [0.0, 1e-3, 1e-2] {
            let r = dispersion_roots(p, &pt, eps).unwrap();
            for t in r.as_array() {
                cubic = cubic.max((t * t * t - k * t + eps * v.db * xi1).abs() / t.abs().powi(3).max(1.0));
            }
        }
        let m = mode_matrix(p, &pt).unwrap();
        let closed = jacobian_closed_form(xi1, xi2, v.b);
        jac = jac.max((mat3::det(&m.q).norm() - closed).abs() / closed);
        pq = pq.max(mat3::max_abs_diff(&mat3::mul(&m.p, &m.q), &mat3::identity()));
        n += 1;
    }
    verdict(
        cubic <= 1e-12 && jac <= 1e-10 && pq <= 1e-12,
        format!("{n} points: cubic residual {cubic:.1e} ≤ 1e-12, |det q| vs closed form {jac:.1e} ≤ 1e-10, |p·q − I| {pq:.1e} ≤ 1e-12"),
    )
}

/// Agreement of the three `F` evaluations and flow invariance.
fn drift(rays: &Path, profile: &CoriolisProfile, listed: usize) -> Verdict {
    let rows = read_numeric_csv(&rays.join("drift.csv"), &DRIFT_HEADER).unwrap();
    let random = &rows[listed..];
    let (mut space, mut action, mut flow) = (0.0f64, 0.0f64, 0.0f64);
    let mut complete = 0;
    for r in random {
        let (xi1, x2, xi2, ft, fs, fa, period) = (r[0], r[1], r[2], r[3], r[4], r[5], r[6]);
        if !(ft.is_finite() && fs.is_finite() && fa.is_finite()) {
            continue;
        }
        complete += 1;
        space = space.max((ft.abs() - fs).abs() / ft.abs());
        action = action.max((ft - fa).abs() / ft.abs());
        // F at a point a third of a period down the same orbit
        let tr = integrate_ray(profile, &PhasePoint::new(0.0, x2, xi1, xi2), period / 3.0, period / 600.0).unwrap();
        let later = drift_f_time(profile, &tr.last().point).unwrap();
        flow = flow.max((later - ft).abs() / ft.abs());
    }
    verdict(
        complete == 100 && space <= 1e-5 && action <= 1e-3 && flow <= 1e-7,
        format!("{complete} librating orbits: time vs space {space:.1e} ≤ 1e-5, action {action:.1e} ≤ 1e-3, flow invariance {flow:.1e} ≤ 1e-7"),
    )
}

/// Non-empty `Λ` and the small-`ξ₁` slope at three base points.
fn lambda_scaling(summary: &Value) -> Verdict {
    let points = summary["cloud"]["points"].as_u64().unwrap_or(0);
    let slopes: Vec<f64> = summary["scaling"].as_array().unwrap().iter().map(|s| f(&s["slope"])).collect();
    let ok = points > 0 && slopes.len() == 3 && slopes.iter().all(|s| (s + 1.0).abs() <= 0.1);
    verdict(ok, format!("32×32 grid: {points} roots; small-ξ₁ slopes {slopes:.3?} within −1 ± 0.1"))
}

/// Sign change of the area derivative at sampled roots.
fn extremal(summary: &Value) -> Verdict {
    let n = summary["sign_changes"].as_u64().unwrap_or(0);
    let tried = summary["extremal"].as_array().map_or(0, |a| a.len());
    verdict(n >= 20, format!("{n} of {tried} sampled Λ points show an area-derivative sign change (need ≥ 20)"))
}

/// Positive floor for trapped data, super-linear decay for Poincaré data.
fn dichotomy(trapped: &Value, untrapped: &Value) -> Verdict {
    let ratio = floats(&trapped["floor_ratio"]);
    let slope = f(&untrapped["decay_slope"]);
    let contact = trapped["runs"].as_array().unwrap().iter().all(|r| r["lambda_contact"]["sign_change"] == Value::Bool(true));
    let avoids = untrapped["runs"].as_array().unwrap().iter().all(|r| r["lambda_contact"].is_null());
    let m_t: Vec<f64> = trapped["runs"].as_array().unwrap().iter().map(|r| f(&r["m"])).collect();
    let m_u: Vec<String> = untrapped["runs"].as_array().unwrap().iter().map(|r| format!("{:.1e}", f(&r["m"]))).collect();
    let floor = ratio.iter().all(|r| *r >= 0.5);
    verdict(
        contact && avoids && floor && slope <= -2.0,
        format!(
            "(a) trapped m = {m_t:.3?}, m/m(1/8) = {ratio:.3?} ≥ 0.5; (b) untrapped m = {m_u:?}, slope of log m vs log(1/ε) {slope:.1} ≤ −2"
        ),
    )
}

/// Mode round trip and scalar reduction.
fn modes(summary: &Value) -> Verdict {
    let rt = floats(&summary["round_trip_slopes"]);
    let sc = floats(&summary["scalar_slopes"]);
    verdict(
        !rt.is_empty() && rt.iter().all(|s| (s - 1.0).abs() <= 0.2) && !sc.is_empty() && sc.iter().all(|s| *s >= 0.8),
        format!("round-trip slopes {rt:.3?} within 1 ± 0.2; scalar-vs-full slopes at t = 1/ε {sc:.3?} ≥ 0.8"),
    )
}

/// Bohr–Sommerfeld levels after the fitted shift, and scalar residuals.
fn bohr_sommerfeld(fit: &Value, residuals: &Value) -> Verdict {
    let shifted = f(&fit["shifted_slope"]);
    let raw = f(&fit["raw_slope"]);
    let res = floats(&residuals["slopes"]);
    verdict(
        (shifted - 2.0).abs() <= 0.3 && !res.is_empty() && res.iter().all(|s| *s >= 1.0),
        format!("shifted level error slope {shifted:.3} within 2 ± 0.3 (unshifted {raw:.3}); residual slopes {res:.3?} ≥ 1"),
    )
}

fn main() -> ExitCode {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path();
    let t0 = Instant::now();
    let profile = CoriolisProfile::two_plus_sin();

    let rays = study(root, "rays", Scenario::Rays, |_| {});
    let listed = RunConfig::default().rays.points.len();
    let lambda = json(&study(root, "lambda", Scenario::Lambda, |_| {}).join("lambda_summary.json"));
    let modes_dir = study(root, "modes", Scenario::Modes, |_| {});
    let spectrum = study(root, "spectrum", Scenario::Spectrum, |_| {});
    let trapped = json(&study(root, "trapped", Scenario::Evolve, |_| {}).join("evolve_trapped_summary.json"));
    let untrapped = json(
        &study(root, "untrapped", Scenario::Evolve, |c| {
            c.evolve.label = "untrapped".into();
            c.evolve.wkb.polarization = PolarizationSpec::Plus;
        })
        .join("evolve_untrapped_summary.json"),
    );

    let verdicts = [
        ("unitarity", unitarity(&trapped, &untrapped)),
        ("symbol identities", symbols()),
        ("drift F triple agreement", drift(&rays, &profile, listed)),
        ("trapped set and small-ξ₁ scaling", lambda_scaling(&lambda)),
        ("extremal area", extremal(&lambda)),
        ("trapping dichotomy", dichotomy(&trapped, &untrapped)),
        ("decomposition and scalar reduction", modes(&json(&modes_dir.join("modes.json")))),
        ("Bohr–Sommerfeld", bohr_sommerfeld(&json(&spectrum.join("spectrum_fit.json")), &json(&spectrum.join("residuals.json")))),
    ];
    let mut failed = 0;
    for (i, (name, v)) in verdicts.iter().enumerate() {
        println!("criterion {} {name}: {} ({})", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {} criteria pass in {:.0} s", verdicts.len() - failed, verdicts.len(), t0.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
