use num_complex::Complex64 as C64;
use rossbytrap_core::symbols::{k_symbol, mode_column};
use rossbytrap_core::trapped::find_lambda_roots;
use rossbytrap_core::CoriolisProfile;
use rossbytrap_wave::*;
use std::f64::consts::TAU;

fn spec(xi1: f64, pol: Polarization, l1: f64) -> WkbSpec {
    WkbSpec { phase: Phase::linear(xi1, 0.25), envelope: Envelope::gaussian((0.5 * l1, 0.3), (1.2, 0.5)), polarization: pol }
}

/// Row 1 of the inverse of `[q⁻ q⁰ q⁺]`, by cofactors.
fn rossby_row(xi1: f64, xi2: f64, b: f64) -> [C64; 3] {
    let s = k_symbol(xi1, xi2, b).sqrt();
    let q = [mode_column(xi1, xi2, b, -s), mode_column(xi1, xi2, b, 0.0), mode_column(xi1, xi2, b, s)];
    // q[j][c] is entry (c, j) of the matrix with columns q[j]
    let m = |r: usize, c: usize| q[c][r];
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let minor = m(rs[0], cs[0]) * m(rs[1], cs[1]) - m(rs[0], cs[1]) * m(rs[1], cs[0]);
        if (r + c) % 2 == 0 { minor } else { -minor }
    };
    // (M⁻¹)[1][c] = cof(c, 1)/det
    [cof(0, 1) / det, cof(1, 1) / det, cof(2, 1) / det]
}

#[test]
fn rossby_weights_match_the_inverse_mode_matrix() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(3.0 * TAU, 0.125).unwrap();
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)];
    let sp = spec(2.0, Polarization::Fixed(a), g.l1).snapped(&g);
    let (_, cloud) = wkb_initial(&p, &sp, &g).unwrap();
    assert!(!cloud.columns.is_empty());
    for c in &cloud.columns {
        let row = rossby_row(c.xi1, c.xi2, p.eval(c.x2).b);
        let want: C64 = row.iter().zip(&a).map(|(r, v)| r * v).sum();
        assert!((c.rossby_weight - want).norm() < 1e-12 * want.norm().max(1.0));
        assert!(c.rossby_weight.norm() <= c.weight_bound * (1.0 + 1e-12));
    }
    for (pol, w) in [(Branch::Rossby, 1.0), (Branch::Plus, 0.0), (Branch::Minus, 0.0)] {
        let (_, cloud) = wkb_initial(&p, &spec(2.0, Polarization::Branch(pol), g.l1).snapped(&g), &g).unwrap();
        for c in &cloud.columns {
            assert!((c.rossby_weight - w).norm() < 1e-12, "{pol:?}: {}", c.rossby_weight);
        }
    }
}

#[test]
fn samples_carry_the_envelope_phase_and_polarization() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(3.0 * TAU, 0.125).unwrap();
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)];
    let sp = spec(2.0, Polarization::Fixed(a), g.l1).snapped(&g);
    let (u, _) = wkb_initial(&p, &sp, &g).unwrap();
    for (i, j) in [(g.n1 / 2, 5), (g.n1 / 2 + 3, 0), (g.n1 / 3, 7)] {
        let (x1, x2) = (g.x1(i), g.x2(j));
        let w = C64::from_polar(sp.envelope.value(x1, x2, g.l1), (sp.phase.xi1 * x1 + sp.phase.xi2 * x2) / g.epsilon);
        for (c, ac) in a.iter().enumerate() {
            assert!((u.get(c, i, j) - ac * w).norm() < 1e-13);
        }
    }
}

#[test]
fn zero_scale_gives_the_zero_field() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(3.0 * TAU, 0.125).unwrap();
    let mut sp = spec(2.0, Polarization::Branch(Branch::Rossby), g.l1).snapped(&g);
    sp.envelope.scale = 0.0;
    let (u, cloud) = wkb_initial(&p, &sp, &g).unwrap();
    assert_eq!(u.norm(), 0.0);
    assert!(cloud.lambda_contact(&p, 0.1).is_none());
}

#[test]
fn off_lattice_phases_are_rejected_until_snapped() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(3.0 * TAU, 0.125).unwrap();
    let sp = spec(2.01, Polarization::Branch(Branch::Rossby), g.l1);
    assert!(matches!(wkb_initial(&p, &sp, &g), Err(WaveError::InvalidArgument(_))));
    let s = sp.snapped(&g);
    assert!((s.phase.xi1 - 2.0).abs() <= g.epsilon / 6.0 + 1e-12 && s.phase.xi2 == 0.25);
    assert!(wkb_initial(&p, &s, &g).is_ok());
}

#[test]
fn zero_zonal_wavenumber_is_inadmissible() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(3.0 * TAU, 0.125).unwrap();
    let sp = spec(0.0, Polarization::Branch(Branch::Rossby), g.l1);
    assert!(wkb_initial(&p, &sp, &g).is_err());
}

#[test]
fn rossby_data_on_the_trapped_set_enclose_a_drift_root() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(6.0 * TAU, 0.0625).unwrap();
    let root = find_lambda_roots(&p, 0.3, 0.25, (0.05, 20.0)).unwrap()[0].xi1_root;
    let sp = spec(root, Polarization::Branch(Branch::Rossby), g.l1).snapped(&g);
    let (_, cloud) = wkb_initial(&p, &sp, &g).unwrap();
    let c = cloud.lambda_contact(&p, 0.1).unwrap();
    assert!(c.sign_change && c.weighted_columns > 1, "{c:?}");
    assert!(c.min_abs_drift < 0.05);
    // pure Poincaré data carry no Rossby weight
    let sp = spec(root, Polarization::Branch(Branch::Plus), g.l1).snapped(&g);
    let (_, cloud) = wkb_initial(&p, &sp, &g).unwrap();
    assert_eq!(cloud.max_rossby_weight(), 0.0);
    assert!(cloud.lambda_contact(&p, 0.1).is_none());
}
