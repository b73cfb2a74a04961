use num_complex::Complex64 as C64;
use rossbytrap_core::symbols::{k_symbol, mode_column};
use rossbytrap_core::CoriolisProfile;
use rossbytrap_wave::generator::{build_generator, symmetric_generator};
use rossbytrap_wave::grid::signed_frequency;
use rossbytrap_wave::linalg::sym_eigen;
use rossbytrap_wave::propagator::{Branch, ModeEigen};
use rossbytrap_wave::spectral::{derivative_matrix, tail_fraction, Fft1};
use rossbytrap_wave::Grid2D;
use std::f64::consts::TAU;

#[test]
fn generator_is_skew_hermitian() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(TAU * 2.0, 0.125).unwrap();
    for k1 in [-7, 0, 3, 40] {
        let a = build_generator(&p, &g, k1);
        assert_eq!(a.size, 3 * g.n2);
        assert!(a.skew_defect() <= 1e-13, "k1={k1}: {}", a.skew_defect());
    }
}

#[test]
fn derivative_matrix_differentiates_trigonometric_polynomials() {
    let n = 32;
    let d = derivative_matrix(n);
    let h = TAU / n as f64;
    for m in [1.0, 5.0, 15.0] {
        for j in 0..n {
            let dj: f64 = (0..n).map(|k| d[j * n + k] * (m * k as f64 * h).sin()).sum();
            assert!((dj - m * (m * j as f64 * h).cos()).abs() < 1e-11);
        }
    }
    // the Nyquist mode is annihilated
    for j in 0..n {
        let dj: f64 = (0..n).map(|k| d[j * n + k] * if k % 2 == 0 { 1.0 } else { -1.0 }).sum();
        assert!(dj.abs() < 1e-12);
    }
}

/// With constant `b` every `x₂`-Fourier mode decouples; the three branches
/// are the roots `0, ±√(ξ₁²+ξ₂²+b²)` of the cubic with `b′ = 0`, and the
/// Nyquist mode sees `ξ₂ = 0` because it is differentiated to zero.
#[test]
fn constant_b_matches_exact_branches() {
    let (eps, n) = (0.125, 32);
    let b = vec![1.7; n];
    let d = derivative_matrix(n);
    for xi1 in [0.4, -2.5, 3.0] {
        let s = symmetric_generator(&b, &d, eps, xi1 / eps);
        let e = sym_eigen(3 * n, &s).unwrap();
        let mut expect: Vec<f64> = Vec::new();
        for k in 0..n {
            let m = signed_frequency(k, n);
            let xi2 = if 2 * m.unsigned_abs() as usize == n { 0.0 } else { eps * m as f64 };
            let r = k_symbol(xi1, xi2, 1.7).sqrt();
            expect.extend([-r, 0.0, r]);
        }
        expect.sort_by(f64::total_cmp);
        for (got, want) in e.values.iter().zip(&expect) {
            assert!((eps * got - want).abs() <= 1e-10, "{} vs {want}", eps * got);
        }
    }
}

#[test]
fn zero_mode_decouples_the_zonal_velocity() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(TAU, 0.25).unwrap();
    let a = build_generator(&p, &g, 0);
    let n = g.n2;
    let m = 3 * n;
    let d = derivative_matrix(n);
    for j in 0..n {
        for k in 0..n {
            // no ∂₁ coupling between ρ and u₁
            assert_eq!(a.values[j * m + n + k], C64::new(0.0, 0.0));
            assert_eq!(a.values[(n + j) * m + k], C64::new(0.0, 0.0));
            // ρ–u₂ block is −∂₂ in both directions
            assert!((a.values[j * m + 2 * n + k] - C64::new(-d[j * n + k], 0.0)).norm() < 1e-15);
            assert!((a.values[(2 * n + j) * m + k] - C64::new(-d[j * n + k], 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn branches_are_separated_by_size() {
    let p = CoriolisProfile::two_plus_sin();
    let g = Grid2D::minimal(TAU * 2.0, 0.125).unwrap();
    let b: Vec<f64> = (0..g.n2).map(|j| p.eval(g.x2(j)).b).collect();
    let d = derivative_matrix(g.n2);
    let slot = g.slot_of_k1(5);
    let m = ModeEigen::compute(&b, &d, &g, slot).unwrap();
    let n = g.n2;
    let v = &m.eigen.values;
    // Poincaré frequencies exceed min b/ε; Rossby ones are bounded by max|E|
    let e_max = m.xi1.abs() / (m.xi1 * m.xi1 + 1.0);
    for &l in &v[Branch::Plus.eigen_range(n)] {
        assert!(l <= -1.0 / g.epsilon + 1e-9);
    }
    for &l in &v[Branch::Minus.eigen_range(n)] {
        assert!(l >= 1.0 / g.epsilon - 1e-9);
    }
    // the bound holds for resolved eigenvectors; the grid-scale ones sit at Nyquist
    let fft = Fft1::new(n);
    let mut resolved = 0;
    for r in Branch::Rossby.eigen_range(n) {
        let tail: f64 = (0..3)
            .map(|c| {
                let mut col: Vec<C64> = (0..n).map(|j| C64::new(m.eigen.vectors[(c * n + j) * 3 * n + r], 0.0)).collect();
                fft.forward(&mut col);
                tail_fraction(&col)
            })
            .fold(0.0, f64::max);
        if tail < 1e-3 {
            resolved += 1;
            assert!(v[r].abs() <= e_max * 1.01, "{}", v[r]);
        }
    }
    assert!(8 * resolved >= n, "{resolved} of {n}");
}

#[test]
fn constant_b_polarization_is_the_symbol_column() {
    // the reconstruction column for τ₊ is an exact eigenvector of the mode
    let (eps, n, bc, xi1) = (0.125, 16, 1.3, 2.0);
    let d = derivative_matrix(n);
    let s = symmetric_generator(&vec![bc; n], &d, eps, xi1 / eps);
    let nn = 3 * n;
    let h = TAU / n as f64;
    let m = 3;
    let xi2 = eps * m as f64;
    let col = mode_column(xi1, xi2, bc, k_symbol(xi1, xi2, bc).sqrt());
    let w = [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
    // v = W* U for U = col · e^{imx₂}
    let v: Vec<C64> = (0..nn).map(|r| w[r / n].conj() * col[r / n] * C64::from_polar(1.0, m as f64 * (r % n) as f64 * h)).collect();
    let sv: Vec<C64> = (0..nn).map(|r| (0..nn).map(|c| v[c] * s[r * nn + c]).sum()).collect();
    let lambda = -k_symbol(xi1, xi2, bc).sqrt() / eps;
    for (a, b) in sv.iter().zip(&v) {
        assert!((a - b * lambda).norm() < 1e-11);
    }
}
