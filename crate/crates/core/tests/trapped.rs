use rossbytrap_core::orbit::Libration;
use rossbytrap_core::quad::Quadrature;
use rossbytrap_core::rays::drift_f_time_with;
use rossbytrap_core::trapped::*;
use rossbytrap_core::*;
use std::f64::consts::FRAC_PI_2;

fn profile() -> CoriolisProfile {
    CoriolisProfile::two_plus_sin()
}

/// Roots over a box where `b′ > 0` and the root graph is single-valued.
fn smooth_patch(n: usize) -> LambdaCloud {
    sample_lambda(&profile(), &LambdaGrid::rectangle((0.2, 1.0), (-1.0, 1.0), n, n), (0.05, 10.0))
}

/// Bilinear interpolation of the root graph of a complete cloud.
fn interpolate(c: &LambdaCloud, x: f64, y: f64) -> f64 {
    let g = &c.grid;
    let (nx, nk) = (g.x2.len(), g.xi2.len());
    let (hx, hk) = (g.x2[1] - g.x2[0], g.xi2[1] - g.xi2[0]);
    let i = (((x - g.x2[0]) / hx).floor() as isize).clamp(0, nx as isize - 2) as usize;
    let j = (((y - g.xi2[0]) / hk).floor() as isize).clamp(0, nk as isize - 2) as usize;
    let (tx, ty) = ((x - g.x2[i]) / hx, (y - g.xi2[j]) / hk);
    let r = |a: usize, b: usize| c.nodes[a * nk + b].roots[0].xi1_root;
    (1.0 - tx) * (1.0 - ty) * r(i, j) + tx * (1.0 - ty) * r(i + 1, j) + (1.0 - tx) * ty * r(i, j + 1) + tx * ty * r(i + 1, j + 1)
}

#[test]
fn lemma_signs_bracket_a_root() {
    let p = profile();
    for &(x2, xi2) in &[(0.4, 0.3), (2.6, -0.2), (4.0, 0.5), (5.5, 0.1)] {
        for range in [(0.05, 20.0), (-0.05, -20.0)] {
            let scan = find_lambda_roots_with(&p, x2, xi2, range, &LambdaOptions::default(), &Quadrature::default()).unwrap();
            // drift of the E-flow: b′F > 0 at small |ξ₁|, < 0 at large |ξ₁|
            assert!(scan.bf_small > 0.0 && scan.bf_large < 0.0);
            assert!(!scan.points.is_empty());
            for lp in &scan.points {
                assert!(lp.bracket.0 <= lp.xi1_root && lp.xi1_root <= lp.bracket.1);
                assert!(lp.bracket.1 - lp.bracket.0 <= 1e-10);
                assert!(lp.f_residual.abs() <= 1e-8);
                let fs = drift_f_space_signed(&p, lp.xi1_root, x2, xi2).unwrap();
                assert!(fs.abs() <= 1e-6);
                let ft = drift_f_time(&p, &PhasePoint::new(0.0, x2, lp.xi1_root, xi2)).unwrap();
                assert!(ft.abs() <= 1e-8, "time drift {ft} at root");
                let f_lo = drift_f_space_signed(&p, lp.bracket.0, x2, xi2).unwrap();
                let f_hi = drift_f_space_signed(&p, lp.bracket.1, x2, xi2).unwrap();
                assert!(f_lo * f_hi <= 0.0);
            }
        }
    }
}

#[test]
fn roots_come_in_symmetric_pairs() {
    let p = profile();
    let pos = find_lambda_roots(&p, 0.7, 0.4, (0.05, 20.0)).unwrap();
    let neg = find_lambda_roots(&p, 0.7, 0.4, (-0.05, -20.0)).unwrap();
    assert_eq!(pos.len(), neg.len());
    for (a, b) in pos.iter().zip(&neg) {
        assert!((a.xi1_root + b.xi1_root).abs() < 1e-9);
    }
}

#[test]
fn bad_ranges_are_rejected() {
    let p = profile();
    assert!(matches!(find_lambda_roots(&p, 0.7, 0.4, (-1.0, 1.0)), Err(Error::InvalidArgument(_))));
    assert!(matches!(find_lambda_roots(&p, FRAC_PI_2, 0.4, (0.1, 1.0)), Err(Error::InvalidArgument(_))));
    assert!(matches!(find_lambda_roots(&p, 0.7, 0.4, (0.1, 0.5)), Err(Error::NoSignChange { .. })));
}

#[test]
fn cloud_is_a_continuous_graph() {
    let coarse = smooth_patch(8);
    let mid = smooth_patch(16);
    let fine = smooth_patch(32);
    for c in [&coarse, &mid, &fine] {
        assert_eq!(c.summary.coverage, 1.0);
        assert_eq!(c.summary.max_roots_per_node, 1);
        assert!(c.summary.max_abs_residual <= 1e-8);
    }
    // neighbouring roots approach each other linearly in the spacing
    let (s1, s2) = (mid.summary.max_neighbor_slope, fine.summary.max_neighbor_slope);
    assert!(s2 < 1.5 * s1, "{s1} {s2}");
    assert!(fine.summary.max_neighbor_jump < mid.summary.max_neighbor_jump);
    let interp_error = |c: &LambdaCloud, f: &LambdaCloud| {
        f.nodes
            .iter()
            .map(|n| (interpolate(c, n.x2, n.xi2) - n.roots[0].xi1_root).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (interp_error(&coarse, &mid), interp_error(&mid, &fine));
    assert!(e2 < 0.4 * e1, "{e1} {e2}");
    assert!(e2 < 2e-2, "{e2}");
}

#[test]
fn full_circle_cloud_is_nonempty_and_x1_free() {
    let p = profile();
    let c = sample_lambda(&p, &LambdaGrid::uniform(8, 8, 1.0), (0.01, 10.0));
    assert!(c.summary.points > 0);
    // F and hence the cloud carry no x₁ dependence
    let lp = *c.points().next().unwrap();
    for x1 in [0.0, 3.0, -17.5] {
        let f = drift_f_time(&p, &PhasePoint::new(x1, lp.x2, lp.xi1_root, lp.xi2)).unwrap();
        assert!(f.abs() <= 1e-8);
    }
}

#[test]
fn small_xi1_scaling_is_inverse() {
    let p = profile();
    let seq = [0.4, 0.2, 0.1, 0.05];
    for &(x2, xi2) in &[(FRAC_PI_2 + 0.3, 0.2), (0.4, 0.3), (4.0, -0.2)] {
        let fit = smallxi_scaling(&p, x2, xi2, &seq).unwrap();
        assert!((fit.slope + 1.0).abs() <= 0.1, "slope {}", fit.slope);
        assert!(fit.min_f_times_xi1 > 1.0);
        assert!(fit.root_free_below);
        // the time-integrated drift is an independent oracle for the samples
        for &(xi1, f) in &fit.samples {
            let pt = PhasePoint::new(0.0, x2, xi1, xi2);
            let ft = drift_f_time_with(&p, &pt, &PeriodOptions { period_max: 1e5, t_max: 1e5, ..PeriodOptions::default() }).unwrap();
            assert!((ft - f).abs() <= 1e-5 * ft.abs());
        }
        let tighter = smallxi_scaling_with(&p, x2, xi2, &seq, &Quadrature::new(32, 1024, 1e-13)).unwrap();
        assert!((tighter.slope - fit.slope).abs() < 0.01);
    }
}

#[test]
fn area_is_extremal_at_roots() {
    let p = profile();
    let c = smooth_patch(6);
    let mut count = 0;
    for lp in c.points() {
        let r = extremal_area_check(&p, lp).unwrap();
        assert!(r.is_extremal(), "{r:?}");
        assert!(r.curvature != 0.0);
        count += 1;
    }
    assert!(count >= 20);
}

#[test]
fn area_slope_is_bounded_away_from_zero_off_the_root() {
    let p = profile();
    let q = Quadrature::default();
    let root = find_lambda_roots(&p, 0.6, 0.3, (0.05, 20.0)).unwrap()[0].xi1_root;
    for xi1 in [0.5 * root, 1.5 * root] {
        let f = drift_f_time(&p, &PhasePoint::new(0.0, 0.6, xi1, 0.3)).unwrap();
        assert!(f.abs() >= 0.1);
        let (slope, _) = area_slope_relation(&p, xi1, 0.6, 0.3, &q).unwrap();
        assert!(slope.abs() >= 0.05, "{slope}");
    }
}

#[test]
fn area_slope_equals_signed_drift() {
    let p = profile();
    let q = Quadrature::default();
    for &(xi1, x2, xi2) in &[(1.0, 0.6, 0.3), (-2.5, 4.2, 0.1), (0.7, 2.8, -0.4), (3.0, 5.6, 0.6)] {
        let orbit = Libration::through(&p, xi1, x2, xi2).unwrap();
        let (slope, _) = area_slope_relation(&p, xi1, x2, xi2, &q).unwrap();
        let ft = drift_f_time(&p, &PhasePoint::new(0.0, x2, xi1, xi2)).unwrap();
        let expect = orbit.energy.signum() * ft;
        assert!((slope - expect).abs() <= 0.05 * expect.abs(), "{slope} vs {expect}");
        assert!((slope - expect).abs() <= 1e-5 * expect.abs().max(1.0), "{slope} vs {expect}");
    }
}
