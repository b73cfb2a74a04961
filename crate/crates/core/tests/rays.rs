use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rossbytrap_core::action::{hamiltonian_slopes, OrbitFamily};
use rossbytrap_core::orbit::{elliptic_points, Libration};
use rossbytrap_core::quad::Quadrature;
use rossbytrap_core::rays::{find_period_with, linearized_frequency, OrbitClass};
use rossbytrap_core::symbols::rossby_gradient;
use rossbytrap_core::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

fn e_of(p: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64) -> f64 {
    let b = p.eval(x2);
    b.db * xi1 / (xi1 * xi1 + xi2 * xi2 + b.b * b.b)
}

/// Random base points whose orbits librate and return with a moderate period.
fn librating_sample(p: &CoriolisProfile, n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let xi1 = rng.random_range(0.3..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let x2 = rng.random_range(0.0..TAU);
        let xi2 = rng.random_range(-1.0..1.0);
        let pt = PhasePoint::new(0.0, x2, xi1, xi2);
        if Libration::through(p, xi1, x2, xi2).is_err() {
            continue;
        }
        if let Ok(d) = find_period(p, &pt) {
            if d.classification == OrbitClass::Periodic {
                out.push(pt);
            }
        }
    }
    out
}

#[test]
fn rhs_matches_finite_differences() {
    let p = CoriolisProfile::sin();
    let pt = PhasePoint::new(0.0, FRAC_PI_4, 1.0, 0.0);
    let v = ray_rhs(&p, &pt).unwrap();
    let h = 1e-6;
    let fd = (e_of(&p, 1.0 + h, FRAC_PI_4, 0.0) - e_of(&p, 1.0 - h, FRAC_PI_4, 0.0)) / (2.0 * h);
    assert!((v[0] - fd).abs() < 1e-8, "{} {fd}", v[0]);
    assert!((v[0] + 0.157_134_840_263_677_2).abs() < 1e-12);
    assert_eq!(v[2], 0.0);
    assert_eq!(v[1], 0.0);
}

#[test]
fn rhs_components_are_gradients_of_e() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = CoriolisProfile::fourier("mixed", 0.3, &[0.5, 0.0, 0.2], &[1.0, -0.4]).unwrap();
    let h = 1e-6;
    for _ in 0..500 {
        let (x2, xi1, xi2) = (rng.random_range(0.0..TAU), rng.random_range(0.2..3.0), rng.random_range(-2.0..2.0));
        let Ok(v) = ray_rhs(&p, &PhasePoint::new(0.0, x2, xi1, xi2)) else { continue };
        let d_xi1 = (e_of(&p, xi1 + h, x2, xi2) - e_of(&p, xi1 - h, x2, xi2)) / (2.0 * h);
        let d_x2 = (e_of(&p, xi1, x2 + h, xi2) - e_of(&p, xi1, x2 - h, xi2)) / (2.0 * h);
        let d_xi2 = (e_of(&p, xi1, x2, xi2 + h) - e_of(&p, xi1, x2, xi2 - h)) / (2.0 * h);
        assert!((v[0] - d_xi1).abs() < 1e-8);
        assert!((v[1] - d_xi2).abs() < 1e-8);
        assert!((v[3] + d_x2).abs() < 1e-8);
        let b = p.eval(x2);
        let k = xi1 * xi1 + xi2 * xi2 + b.b * b.b;
        let closed = b.db * (xi2 * xi2 - xi1 * xi1 + b.b * b.b) / (k * k);
        assert!((v[0] - closed).abs() <= 1e-12 * closed.abs().max(1.0));
    }
}

#[test]
fn equilibrium_stays_put() {
    let p = CoriolisProfile::two_plus_sin();
    let ep = elliptic_points(&p, 1.2)[0];
    let tr = integrate_ray(&p, &PhasePoint::new(0.0, ep.x2, 1.2, 0.0), 50.0, 0.05).unwrap();
    for s in &tr.samples {
        assert!((s.point.x2 - ep.x2).abs() < 1e-9 && s.point.xi2.abs() < 1e-9);
    }
}

#[test]
fn backward_integration_returns_and_momentum_flip_is_a_symmetry() {
    let p = CoriolisProfile::two_plus_sin();
    for pt in librating_sample(&p, 10, 5) {
        let fwd = integrate_ray(&p, &pt, 17.0, 0.01).unwrap();
        let end = fwd.last().point;
        let back = integrate_ray(&p, &end, -17.0, 0.01).unwrap().last().point;
        assert!((back.x1 - pt.x1).abs() < 1e-8 && (back.x2 - pt.x2).abs() < 1e-8 && (back.xi2 - pt.xi2).abs() < 1e-8);
        // (x, ξ) ↦ (x, −ξ) sends E to −E and maps orbits onto orbits
        let flipped = integrate_ray(&p, &PhasePoint::new(pt.x1, pt.x2, -pt.xi1, -pt.xi2), 17.0, 0.01).unwrap();
        let f = flipped.last().point;
        assert!((f.x1 - end.x1).abs() < 1e-8 && (f.x2 - end.x2).abs() < 1e-8 && (f.xi2 + end.xi2).abs() < 1e-8);
    }
}

#[test]
fn conservation_and_periodicity() {
    let p = CoriolisProfile::two_plus_sin();
    for pt in librating_sample(&p, 20, 9) {
        let d = find_period(&p, &pt).unwrap();
        assert!(d.max_e_drift <= 1e-9);
        let tr = integrate_ray(&p, &pt, d.period, d.dt).unwrap();
        assert!(tr.samples.iter().all(|s| s.point.xi1 == pt.xi1));
        assert!(tr.max_e_drift <= 1e-9);
        let last = tr.last().point;
        let err = (last.x2 - pt.x2).hypot(last.xi2 - pt.xi2);
        assert!(err <= 1e-7, "return error {err} for {pt:?}");
    }
}

#[test]
fn closed_orbit_area_matches_action() {
    // the orbit through x₂ = π/2 itself has E = 0; move off the critical latitude
    let p = CoriolisProfile::two_plus_sin();
    let pt = PhasePoint::new(0.0, FRAC_PI_2 + 0.3, 2.0, 0.3);
    let d = find_period(&p, &pt).unwrap();
    let n = 20000;
    let tr = integrate_ray(&p, &pt, d.period, d.period / n as f64).unwrap();
    // ∮ ξ₂ dx₂ by the trapezoidal rule along the periodic samples
    let mut loop_integral = 0.0;
    for w in tr.samples.windows(2) {
        loop_integral += 0.5 * (w[0].point.xi2 + w[1].point.xi2) * (w[1].point.x2 - w[0].point.x2);
    }
    let e = e_of(&p, 2.0, pt.x2, 0.3);
    let a = action_a(&p, 2.0, e).unwrap();
    assert!((loop_integral / TAU - a).abs() < 1e-6, "{} vs {a}", loop_integral / TAU);
}

#[test]
fn small_orbit_period_matches_linearization() {
    let p = CoriolisProfile::two_plus_sin();
    for xi1 in [0.5, 1.3, -2.0] {
        for ep in elliptic_points(&p, xi1) {
            // linearized frequency from a 2×2 finite-difference Jacobian
            let h = 1e-5;
            let f = |a: f64, b: f64| {
                let g = rossby_gradient(&p, xi1, a, b);
                [g.d_xi2, -g.d_x2]
            };
            let (fp, fm, gp, gm) = (f(ep.x2 + h, 0.0), f(ep.x2 - h, 0.0), f(ep.x2, h), f(ep.x2, -h));
            let j = [[(fp[0] - fm[0]) / (2.0 * h), (gp[0] - gm[0]) / (2.0 * h)], [(fp[1] - fm[1]) / (2.0 * h), (gp[1] - gm[1]) / (2.0 * h)]];
            let omega = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).sqrt();
            let d = find_period(&p, &PhasePoint::new(0.0, ep.x2, xi1, 1e-3)).unwrap();
            assert!((d.period - TAU / omega).abs() < 0.01 * TAU / omega, "{} vs {}", d.period, TAU / omega);
            assert!((linearized_frequency(&p, xi1, ep.x2, 0.0).unwrap() - omega).abs() < 1e-6 * omega);
        }
    }
}

#[test]
fn period_is_converged() {
    let p = CoriolisProfile::two_plus_sin();
    for pt in librating_sample(&p, 5, 21) {
        let base = find_period(&p, &pt).unwrap();
        let fine = find_period_with(&p, &pt, &PeriodOptions { dt: Some(0.5 * base.dt), rel_tol: 5e-11, ..PeriodOptions::default() }).unwrap();
        assert!((base.period - fine.period).abs() <= 1e-8 * base.period);
    }
}

#[test]
fn fixed_point_is_near_degenerate() {
    let p = CoriolisProfile::two_plus_sin();
    let ep = elliptic_points(&p, 0.8)[1];
    let d = find_period(&p, &PhasePoint::new(0.0, ep.x2, 0.8, 0.0)).unwrap();
    assert_eq!(d.classification, OrbitClass::NearDegenerate);
    assert!(matches!(drift_f_time(&p, &PhasePoint::new(0.0, ep.x2, 0.8, 0.0)), Err(Error::NearDegenerate { .. })));
}

#[test]
fn drift_methods_agree() {
    let p = CoriolisProfile::two_plus_sin();
    let q = Quadrature::default();
    for pt in librating_sample(&p, 30, 3) {
        let ft = drift_f_time(&p, &pt).unwrap();
        let fs = drift_f_space_signed(&p, pt.xi1, pt.x2, pt.xi2).unwrap();
        let fa = drift_f_action(&p, &pt).unwrap();
        assert!((ft - fs).abs() <= 1e-5 * ft.abs(), "{ft} {fs}");
        assert!((ft - fa).abs() <= 1e-3 * ft.abs(), "{ft} {fa}");
        assert_eq!(ft.signum(), fa.signum());
        assert_eq!(drift_f_space(&p, pt.xi1, pt.x2, pt.xi2).unwrap(), fs.abs());
        assert!(hamiltonian_slopes(&p, &pt, &q).unwrap().d_action > 0.0);
    }
}

#[test]
fn drift_is_invariant_under_the_flow() {
    let p = CoriolisProfile::two_plus_sin();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for pt in librating_sample(&p, 15, 13) {
        let f0 = drift_f_time(&p, &pt).unwrap();
        let t = rng.random_range(0.0..30.0);
        let moved = integrate_ray(&p, &pt, t, 0.01).unwrap().last().point;
        let f1 = drift_f_time(&p, &moved).unwrap();
        assert!((f0 - f1).abs() <= 1e-7 * f0.abs().max(1.0), "{f0} {f1}");
    }
}

#[test]
fn turning_points_vanish_and_base_point_is_inside() {
    let p = CoriolisProfile::one_plus_half_cos();
    for pt in librating_sample(&p, 20, 8) {
        let o = Libration::through(&p, pt.xi1, pt.x2, pt.xi2).unwrap();
        assert!(o.g(&p, o.x_minus).abs() <= 1e-9 && o.g(&p, o.x_plus).abs() <= 1e-9);
        assert!(o.g(&p, pt.x2) >= 0.0);
        assert!((o.g(&p, pt.x2) - pt.xi2 * pt.xi2).abs() < 1e-12);
    }
}

#[test]
fn zero_energy_has_no_orbit() {
    let p = CoriolisProfile::one_plus_half_cos();
    assert!(matches!(drift_f_space(&p, 1.0, 0.0, 0.4), Err(Error::NoClosedOrbit { .. })));
}

/// Sign structure of the drift along `b′`-definite orbits.
///
/// The time integral of `ẋ₁ = ∂ξ₁E` has `b′F < 0` for large `|ξ₁|` and
/// `b′F > 0` for small `|ξ₁|`: this is the flow of `E`. A Rossby packet of the
/// wave equation moves along the flow of `−E` (phase `e^{+iτ₀t/ε}`), so the
/// physical drift `−F` satisfies `b′·(−F) > 0` at large and `< 0` at small `|ξ₁|`.
#[test]
fn drift_sign_dichotomy() {
    let p = CoriolisProfile::two_plus_sin();
    for &(x2, xi2) in &[(0.4, 0.3), (2.6, -0.2), (4.0, 0.5), (5.5, 0.1)] {
        let db = p.eval(x2).db;
        for s in [1.0, -1.0] {
            let large = PhasePoint::new(0.0, x2, 6.0 * s, xi2);
            let small = PhasePoint::new(0.0, x2, 0.2 * s, xi2);
            let fl = drift_f_time(&p, &large).unwrap();
            let fs = drift_f_time(&p, &small).unwrap();
            assert!(db * fl < 0.0 && db * fs > 0.0, "{x2} {xi2} {s}: {fl} {fs}");
            assert!(db * -fl > 0.0 && db * -fs < 0.0);
        }
    }
}

#[test]
fn action_is_monotone_and_inverts() {
    let p = CoriolisProfile::two_plus_sin();
    let q = Quadrature::default();
    for xi1 in [0.7, 1.5] {
        for sign in [1.0, -1.0] {
            let fam = OrbitFamily::principal(&p, xi1, sign).unwrap();
            let ec = fam.centre.energy;
            let energies: Vec<f64> = (1..10).map(|k| ec * (1.0 - 0.09 * k as f64)).collect();
            let actions: Vec<f64> = energies.iter().map(|&e| action_a(&p, xi1, e).unwrap()).collect();
            for w in energies.windows(2).zip(actions.windows(2)) {
                let (de, da) = (w.0[1] - w.0[0], w.1[1] - w.1[0]);
                assert!(de * da > 0.0, "A must increase with E");
            }
            let table = ActionTable::build(&p, fam, 96, 0.05, &q).unwrap();
            for (&e, &a) in energies.iter().zip(&actions) {
                assert!((table.energy(a).unwrap() - e).abs() <= 1e-7, "{} vs {e}", table.energy(a).unwrap());
                assert!((fam.energy_for_action(&p, a, &q).unwrap() - e).abs() <= 1e-10 * ec.abs());
            }
            // zero-amplitude limit
            let a0 = action_a(&p, xi1, ec).unwrap();
            assert_eq!(a0, 0.0);
            let near = action_a(&p, xi1, ec * (1.0 - 1e-6)).unwrap();
            assert!(near.abs() < 1e-4);
        }
    }
}
