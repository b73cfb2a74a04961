use rossbytrap_core::bohr::Well;
use rossbytrap_core::quad::Quadrature;
use rossbytrap_core::*;

#[test]
fn low_levels_follow_the_harmonic_ladder() {
    let p = CoriolisProfile::one_plus_half_cos();
    let w = Well::locate(&p).unwrap();
    let q = Quadrature::default();
    // quadratic model of V = b² from finite differences at the minimum
    let v = |x: f64| p.eval(x).b.powi(2);
    let h = 1e-4;
    let v2 = (v(w.x_min + h) - 2.0 * v(w.x_min) + v(w.x_min - h)) / (h * h);
    assert!((v2 - w.curvature).abs() < 1e-6);
    for eps in [0.02, 0.01, 0.005] {
        for k in 0..3 {
            let oracle = v(w.x_min) + (2 * k + 1) as f64 * eps * (v2 / 2.0).sqrt();
            let bs = w.level(&p, k, eps, &q).unwrap();
            // anharmonic corrections enter at O(ε²)
            assert!((bs - oracle).abs() < 2.0 * ((k + 1) as f64 * eps).powi(2), "k={k} eps={eps}: {bs} {oracle}");
        }
    }
}

#[test]
fn levels_increase_and_stay_in_the_window() {
    let p = CoriolisProfile::two_plus_sin();
    let w = Well::locate(&p).unwrap();
    let q = Quadrature::default();
    let mut prev = w.v_min;
    for k in 0..8 {
        let l = w.level(&p, k, 1.0 / 16.0, &q).unwrap();
        assert!(l > prev && l < w.barrier);
        let a = w.action(&p, l, &q).unwrap();
        assert!((a - (k as f64 + 0.5) / 16.0).abs() < 1e-12);
        prev = l;
    }
}

#[test]
fn levels_above_the_barrier_are_rejected() {
    let p = CoriolisProfile::two_plus_sin();
    let w = Well::locate(&p).unwrap();
    let q = Quadrature::default();
    assert!(matches!(w.level(&p, 400, 0.25, &q), Err(Error::WindowError { .. })));
    assert!(matches!(w.turning_points(&p, 9.5), Err(Error::WindowError { .. })));
}
