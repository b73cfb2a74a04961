//! Per-mode generator of the linear system.
//!
//! For the `x₁`-Fourier mode `κ = 2πk₁/L1` the system reads `∂ₜV = A V` with
//! `A = −[[0, iκ, ∂₂], [iκ, 0, −b/ε], [∂₂, b/ε, 0]]`. With
//! `W = diag(1, 1, i)` the Hermitian matrix `iA = W S W*` has the real
//! symmetric core `S = [[0, κ, D], [κ, 0, −B/ε], [−D, −B/ε, 0]]`.

use num_complex::Complex64 as C64;
use rossbytrap_core::CoriolisProfile;

use crate::grid::Grid2D;
use crate::spectral::derivative_matrix;

/// Phase of block `c` in `W`.
pub fn block_phase(c: usize) -> C64 {
    if c == 2 {
        C64::new(0.0, 1.0)
    } else {
        C64::new(1.0, 0.0)
    }
}

/// `b(x₂ⱼ)` on the `x₂` grid.
pub fn sample_b(profile: &CoriolisProfile, n2: usize) -> Vec<f64> {
    let h = std::f64::consts::TAU / n2 as f64;
    (0..n2).map(|j| profile.eval(j as f64 * h).b).collect()
}

/// The real symmetric core `S` (row-major, size `3N2`).
pub fn symmetric_generator(b: &[f64], d: &[f64], epsilon: f64, kappa: f64) -> Vec<f64> {
    let n = b.len();
    let m = 3 * n;
    let mut s = vec![0.0; m * m];
    for j in 0..n {
        s[j * m + n + j] = kappa;
        s[(n + j) * m + j] = kappa;
        s[(n + j) * m + 2 * n + j] = -b[j] / epsilon;
        s[(2 * n + j) * m + n + j] = -b[j] / epsilon;
        for k in 0..n {
            s[j * m + 2 * n + k] = d[j * n + k];
            s[(2 * n + j) * m + k] = -d[j * n + k];
        }
    }
    s
}

/// Dense skew-Hermitian generator of one Fourier mode.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub k1: i64,
    pub size: usize,
    /// Row-major `A`.
    pub values: Vec<C64>,
}

impl GeneratorMatrix {
    /// `max |A + A*|` over all entries.
    pub fn skew_defect(&self) -> f64 {
        let n = self.size;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.values[i * n + j] + self.values[j * n + i].conj()).norm());
            }
        }
        worst
    }
}

pub fn build_generator(profile: &CoriolisProfile, grid: &Grid2D, k1: i64) -> GeneratorMatrix {
    let b = sample_b(profile, grid.n2);
    let d = derivative_matrix(grid.n2);
    let s = symmetric_generator(&b, &d, grid.epsilon, grid.kappa(k1));
    let n = 3 * grid.n2;
    let minus_i = C64::new(0.0, -1.0);
    let mut values = vec![C64::new(0.0, 0.0); n * n];
    for r in 0..n {
        let wr = block_phase(r / grid.n2);
        for c in 0..n {
            let v = s[r * n + c];
            if v != 0.0 {
                values[r * n + c] = minus_i * wr * v * block_phase(c / grid.n2).conj();
            }
        }
    }
    GeneratorMatrix { k1, size: n, values }
}
