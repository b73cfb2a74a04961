//! Left quantization of symbols on the `x₂` circle.
//!
//! `(Op(a)u)(xⱼ) = Σₙ a(xⱼ, εn) ûₙ e^{inxⱼ}` with `ûₙ` the normalized DFT.
//! The Nyquist frequency carries the average of the symbol at `±εN/2`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Result, WaveError};
use crate::grid::{signed_frequency, Grid2D};
use crate::spectral::{tail_fraction, Fft1};

/// Largest `x₂`-spectral tail of a sampled symbol column.
pub const SYMBOL_TAIL_LIMIT: f64 = 1e-6;

/// Dense matrix of a quantized symbol on one `x₁`-mode.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedSymbol {
    pub k1: i64,
    pub xi1: f64,
    pub epsilon: f64,
    pub symbol_id: String,
    pub n: usize,
    /// Row-major `n × n`.
    pub matrix: Vec<C64>,
}

impl QuantizedSymbol {
    pub fn apply(&self, u: &[C64]) -> Vec<C64> {
        matvec(self.n, &self.matrix, u)
    }
}

/// `y = M u` for a row-major complex matrix.
pub fn matvec(n: usize, m: &[C64], u: &[C64]) -> Vec<C64> {
    (0..n).map(|j| m[j * n..(j + 1) * n].iter().zip(u).map(|(a, b)| a * b).sum()).collect()
}

/// `y += M u`.
pub fn matvec_add(n: usize, m: &[C64], u: &[C64], y: &mut [C64]) {
    for (j, yj) in y.iter_mut().enumerate() {
        *yj += m[j * n..(j + 1) * n].iter().zip(u).map(|(a, b)| a * b).sum::<C64>();
    }
}

/// Quantize `symbol(x₂, ξ₂, ξ₁)` on mode `k1` of `grid`.
pub fn quantize_symbol(
    symbol: impl Fn(f64, f64, f64) -> C64,
    k1: i64,
    grid: &Grid2D,
    symbol_id: &str,
) -> Result<QuantizedSymbol> {
    let xi1 = grid.xi1(k1);
    let [matrix] = quantize_many(grid.n2, grid.epsilon, |x2, xi2| Ok([symbol(x2, xi2, xi1)]))?;
    Ok(QuantizedSymbol { k1, xi1, epsilon: grid.epsilon, symbol_id: symbol_id.to_string(), n: grid.n2, matrix })
}

/// Quantize `M` symbols sharing one evaluation per `(xⱼ, εn)`.
pub fn quantize_many<const M: usize>(
    n: usize,
    epsilon: f64,
    symbol: impl Fn(f64, f64) -> Result<[C64; M]>,
) -> Result<[Vec<C64>; M]> {
    let h = TAU / n as f64;
    let nyq = n / 2;
    // table[m][j][k]
    let mut table = vec![vec![C64::new(0.0, 0.0); n * n]; M];
    for j in 0..n {
        let x = j as f64 * h;
        for k in 0..n {
            let v = if k == nyq {
                let a = symbol(x, epsilon * nyq as f64)?;
                let b = symbol(x, -epsilon * nyq as f64)?;
                core::array::from_fn(|m| 0.5 * (a[m] + b[m]))
            } else {
                symbol(x, epsilon * signed_frequency(k, n) as f64)?
            };
            for m in 0..M {
                if !(v[m].re.is_finite() && v[m].im.is_finite()) {
                    return Err(WaveError::NonFiniteSymbol { x2: x, xi2: epsilon * signed_frequency(k, n) as f64 });
                }
                table[m][j * n + k] = v[m];
            }
        }
    }
    let fft = Fft1::new(n);
    let mut col = vec![C64::new(0.0, 0.0); n];
    for t in &table {
        for k in 0..n {
            for (j, c) in col.iter_mut().enumerate() {
                *c = t[j * n + k];
            }
            fft.forward(&mut col);
            let tail = tail_fraction(&col);
            if tail > SYMBOL_TAIL_LIMIT {
                return Err(WaveError::Resolution { tail, limit: SYMBOL_TAIL_LIMIT });
            }
        }
    }
    let mut out: [Vec<C64>; M] = core::array::from_fn(|_| vec![C64::new(0.0, 0.0); n * n]);
    let mut row = vec![C64::new(0.0, 0.0); n];
    for (t, o) in table.iter().zip(out.iter_mut()) {
        for j in 0..n {
            let x = j as f64 * h;
            for (k, r) in row.iter_mut().enumerate() {
                let nk = signed_frequency(k, n) as f64;
                *r = t[j * n + k] * C64::from_polar(1.0 / n as f64, nk * x);
            }
            fft.forward_raw(&mut row);
            o[j * n..(j + 1) * n].copy_from_slice(&row);
        }
    }
    Ok(out)
}
