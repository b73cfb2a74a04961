use num_complex::Complex64 as C64;
use rossbytrap_core::rays::integrate_ray;
use rossbytrap_core::{CoriolisProfile, PhasePoint};
use rossbytrap_wave::*;
use std::f64::consts::TAU;

fn circ(a: f64, b: f64, period: f64) -> f64 {
    ((a - b + 0.5 * period).rem_euclid(period) - 0.5 * period).abs()
}

fn blob(eps: f64, l1: f64, width: f64, pol: Polarization) -> (StateField, WkbSpec) {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(l1, eps).unwrap();
    let spec = WkbSpec {
        phase: Phase::linear(2.0, 0.25),
        envelope: Envelope::gaussian((0.5 * l1, 0.3), (width, 0.5)),
        polarization: pol,
    }
    .snapped(&g);
    (wkb_initial(&p, &spec, &g).unwrap().0, spec)
}

fn fixed() -> Polarization {
    Polarization::Fixed([C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)])
}

#[test]
fn densities_integrate_to_the_squared_norm() {
    let (u, _) = blob(0.125, 2.0 * TAU, 1.0, fixed());
    let n2 = u.norm_sq();
    for s in [1, 2] {
        let a = husimi_x2(&u, s).total();
        let b = husimi_x1(&u, s).total();
        assert!((a - n2).abs() <= 1e-6 * n2, "{a} {n2}");
        assert!((b - n2).abs() <= 1e-6 * n2, "{b} {n2}");
    }
    let full = husimi(&u, 4, 2);
    assert!((full.total() - n2).abs() <= 1e-6 * n2, "{} {n2}", full.total());
}

#[test]
fn zero_field_has_zero_density() {
    let g = Grid2D::minimal(TAU, 0.125).unwrap();
    let u = StateField::zeros(g);
    assert!(husimi_x2(&u, 1).density.iter().all(|d| *d == 0.0));
    assert!(husimi(&u, 2, 2).density.iter().all(|d| *d == 0.0));
}

#[test]
fn wave_packets_are_located_within_the_window_width() {
    for eps in [0.125, 0.0625] {
        let (u, spec) = blob(eps, 2.0 * TAU, 1.0, fixed());
        let tol = eps.sqrt();
        let (y2, eta2) = husimi_x2(&u, 1).centroid();
        assert!(circ(y2, 0.3, TAU) <= tol && (eta2 - spec.phase.xi2).abs() <= tol, "{y2} {eta2}");
        let (y1, eta1) = husimi_x1(&u, 1).centroid();
        assert!(circ(y1, 2.0 * 0.5 * TAU, 2.0 * TAU) <= tol && (eta1 - spec.phase.xi1).abs() <= tol, "{y1} {eta1}");
        let full = husimi(&u, 4, 2);
        let (a, b, c, d) = full.argmax();
        assert!(circ(full.y1[a], TAU, 2.0 * TAU) <= tol + 4.0 * u.grid.h1());
        assert!((full.eta1[b] - spec.phase.xi1).abs() <= tol);
        assert!(circ(full.y2[c], 0.3, TAU) <= tol + 2.0 * u.grid.h2());
        assert!((full.eta2[d] - spec.phase.xi2).abs() <= tol);
    }
}

#[test]
fn poincare_packets_spread_in_x1() {
    let p = CoriolisProfile::two_plus_sin();
    let (u0, _) = blob(0.125, 8.0 * TAU, 1.0, Polarization::Branch(Branch::Plus));
    let prop = Propagator::for_field(&p, &u0, 1e-28).unwrap();
    let u0 = prop.project_branch(&u0, Branch::Plus);
    let mut spreads = Vec::new();
    for t in [0.0, 3.0, 6.0, 9.0] {
        let u = prop.evolve(&u0, t).unwrap();
        spreads.push(husimi_x1(&u, 2).position_spread());
    }
    assert!(spreads.windows(2).all(|w| w[1] > w[0]), "{spreads:?}");
}

/// Distance between the Husimi centroid of a Rossby packet and the ray of
/// `−E` through the packet centre; raw time `s/ε` is ray time `s`.
fn rossby_ray_error(eps: f64, s: f64) -> f64 {
    let p = CoriolisProfile::two_plus_sin();
    let l1 = 2.0 * TAU;
    let (u0, spec) = blob(eps, l1, 1.0, Polarization::Branch(Branch::Rossby));
    let prop = Propagator::for_field(&p, &u0, 1e-28).unwrap();
    let u0 = prop.project_branch(&u0, Branch::Rossby);
    let t = s / eps;
    let u = prop.evolve(&u0, t).unwrap();
    let ray = integrate_ray(&p, &PhasePoint::new(0.5 * l1, 0.3, spec.phase.xi1, spec.phase.xi2), -s, 0.01).unwrap();
    let end = ray.last().point;
    let (y1, eta1) = husimi_x1(&u, 2).centroid();
    let (y2, eta2) = husimi_x2(&u, 1).centroid();
    let errs = [circ(y1, end.x1, l1), circ(y2, end.x2, TAU), (eta1 - end.xi1).abs(), (eta2 - end.xi2).abs()];
    errs.into_iter().fold(0.0, f64::max)
}

#[test]
fn rossby_packets_follow_the_drift_rays() {
    let errs: Vec<(f64, f64)> = [0.125, 0.0625].iter().map(|&e| (e, rossby_ray_error(e, 1.0))).collect();
    let c = errs.iter().map(|(e, d)| d / e.sqrt()).fold(0.0, f64::max);
    eprintln!("ray tracking errors {errs:?}, fitted C = {c:.3}");
    assert!(c <= 0.5, "{errs:?}");
}
