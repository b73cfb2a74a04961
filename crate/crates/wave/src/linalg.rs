//! Dense real symmetric eigensolvers on row-major storage.

use faer::{Mat, Side};

use crate::error::{Result, WaveError};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub n: usize,
    pub values: Vec<f64>,
    /// Row-major `n × n`; column `m` is the eigenvector of `values[m]`.
    pub vectors: Vec<f64>,
}

pub fn sym_eigen(n: usize, a: &[f64]) -> Result<SymEigen> {
    assert_eq!(a.len(), n * n);
    let m = Mat::<f64>::from_fn(n, n, |i, j| a[i * n + j]);
    let e = m.self_adjoint_eigen(Side::Lower).map_err(|_| WaveError::Linalg("symmetric eigensolver did not converge"))?;
    let s = e.S().column_vector();
    let u = e.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| s[p].total_cmp(&s[q]));
    let values = order.iter().map(|&p| s[p]).collect();
    let mut vectors = vec![0.0; n * n];
    for i in 0..n {
        for (m, &p) in order.iter().enumerate() {
            vectors[i * n + m] = u[(i, p)];
        }
    }
    Ok(SymEigen { n, values, vectors })
}

/// Lower Cholesky factor `L` with `A = LLᵀ`, row-major.
pub fn cholesky(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    let m = Mat::<f64>::from_fn(n, n, |i, j| a[i * n + j]);
    let llt = m.llt(Side::Lower).map_err(|_| WaveError::Linalg("matrix is not positive definite"))?;
    let l = llt.L();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            out[i * n + j] = l[(i, j)];
        }
    }
    Ok(out)
}

/// `L⁻¹` for a lower-triangular row-major `L`.
pub fn lower_inverse(n: usize, l: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n * n];
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                s -= l[i * n + k] * x[k * n + col];
            }
            x[i * n + col] = s / l[i * n + i];
        }
    }
    x
}

/// Generalized problem `A c = τ B c` with `A` diagonal and `B` symmetric
/// positive definite. Returns `τ` ascending and `W` (row-major, columns are
/// `B`-orthonormal eigenvectors).
pub fn generalized_diag_eigen(n: usize, a_diag: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = cholesky(n, b)?;
    let x = lower_inverse(n, &l);
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = 0.0;
            for k in 0..=j {
                s += x[i * n + k] * a_diag[k] * x[j * n + k];
            }
            c[i * n + j] = s;
            c[j * n + i] = s;
        }
    }
    let e = sym_eigen(n, &c)?;
    // W = Xᵀ Y
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for k in i..n {
            let xki = x[k * n + i];
            if xki == 0.0 {
                continue;
            }
            let row = &e.vectors[k * n..(k + 1) * n];
            for (wm, ym) in w[i * n..(i + 1) * n].iter_mut().zip(row) {
                *wm += xki * ym;
            }
        }
    }
    Ok((e.values, w))
}
