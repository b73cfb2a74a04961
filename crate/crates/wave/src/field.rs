//! Three-component fields `(ρ, u₁, u₂)` on the grid and their `x₁`-Fourier
//! representation.

use std::io::{self, Read, Write};

use num_complex::Complex64 as C64;

use crate::error::{Result, WaveError};
use crate::grid::Grid2D;
use crate::spectral::{tail_fraction, Fft1};

/// Largest spectral tail accepted by evolution and WKB sampling.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Values stored as `[3][N1][N2]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub grid: Grid2D,
    pub values: Vec<C64>,
    pub time: f64,
}

/// One scalar function on the grid, `[N1][N2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid2D,
    pub values: Vec<C64>,
}

/// `x₁`-Fourier coefficients `Û[k][c][j] = (1/N1) Σᵢ U[c][i][j] e^{−2πiki/N1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub grid: Grid2D,
    pub coeffs: Vec<C64>,
}

impl StateField {
    pub fn zeros(grid: Grid2D) -> Self {
        StateField { grid, values: vec![C64::new(0.0, 0.0); grid.len()], time: 0.0 }
    }

    /// Sample `f(x₁, x₂) → (ρ, u₁, u₂)`.
    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> [C64; 3]) -> Self {
        let mut u = StateField::zeros(grid);
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                let v = f(grid.x1(i), grid.x2(j));
                for (c, vc) in v.into_iter().enumerate() {
                    let idx = u.index(c, i, j);
                    u.values[idx] = vc;
                }
            }
        }
        u
    }

    #[inline]
    pub fn index(&self, c: usize, i: usize, j: usize) -> usize {
        (c * self.grid.n1 + i) * self.grid.n2 + j
    }

    pub fn get(&self, c: usize, i: usize, j: usize) -> C64 {
        self.values[self.index(c, i, j)]
    }

    pub fn component(&self, c: usize) -> &[C64] {
        let m = self.grid.n1 * self.grid.n2;
        &self.values[c * m..(c + 1) * m]
    }

    /// `‖U‖²` by the trapezoidal rule (spectrally accurate on the torus).
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h1() * self.grid.h2()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `‖U − V‖ / ‖V‖`.
    pub fn relative_distance(&self, other: &StateField) -> f64 {
        let d: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        let n: f64 = other.values.iter().map(|v| v.norm_sqr()).sum();
        (d / n).sqrt()
    }

    pub fn to_modes(&self) -> ModeSpectrum {
        let g = self.grid;
        let fft = Fft1::new(g.n1);
        let mut coeffs = vec![C64::new(0.0, 0.0); g.len()];
        let mut buf = vec![C64::new(0.0, 0.0); g.n1];
        for c in 0..3 {
            for j in 0..g.n2 {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = self.get(c, i, j);
                }
                fft.forward(&mut buf);
                for (k, b) in buf.iter().enumerate() {
                    coeffs[(k * 3 + c) * g.n2 + j] = *b;
                }
            }
        }
        ModeSpectrum { grid: g, coeffs }
    }

    /// Largest tail fraction over the `x₁` and `x₂` transforms of all
    /// components, measured on the total spectral energy per direction.
    pub fn spectral_tail(&self) -> f64 {
        let g = self.grid;
        let modes = self.to_modes();
        let mut e1 = vec![C64::new(0.0, 0.0); g.n1];
        for (k, e) in e1.iter_mut().enumerate() {
            *e = C64::new(modes.slot(k).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(), 0.0);
        }
        let fft = Fft1::new(g.n2);
        let mut e2 = vec![0.0; g.n2];
        let mut row = vec![C64::new(0.0, 0.0); g.n2];
        for c in 0..3 {
            for i in 0..g.n1 {
                row.copy_from_slice(&self.component(c)[i * g.n2..(i + 1) * g.n2]);
                fft.forward(&mut row);
                for (e, r) in e2.iter_mut().zip(&row) {
                    *e += r.norm_sqr();
                }
            }
        }
        let e2: Vec<C64> = e2.into_iter().map(|e| C64::new(e.sqrt(), 0.0)).collect();
        tail_fraction(&e1).max(tail_fraction(&e2))
    }

    /// Error unless the spectral tail is below [`TAIL_LIMIT`].
    pub fn check_resolution(&self) -> Result<()> {
        let tail = self.spectral_tail();
        if tail > TAIL_LIMIT {
            return Err(WaveError::Resolution { tail, limit: TAIL_LIMIT });
        }
        Ok(())
    }

    /// Flat little-endian snapshot: magic, `[3, N1, N2]` as `u64`, `ε`,
    /// time and `L1` as `f64`, then row-major `(re, im)` pairs.
    pub fn write_binary(&self, mut w: impl Write) -> io::Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        for d in [3u64, self.grid.n1 as u64, self.grid.n2 as u64] {
            w.write_all(&d.to_le_bytes())?;
        }
        for v in [self.grid.epsilon, self.time, self.grid.l1] {
            w.write_all(&v.to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(16 * self.values.len());
        for v in &self.values {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn read_binary(mut r: impl Read) -> io::Result<Self> {
        let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(bad("not a field snapshot"));
        }
        let mut u = [0u8; 8];
        let mut dims = [0usize; 3];
        for d in &mut dims {
            r.read_exact(&mut u)?;
            *d = u64::from_le_bytes(u) as usize;
        }
        let mut f = [0.0; 3];
        for v in &mut f {
            r.read_exact(&mut u)?;
            *v = f64::from_le_bytes(u);
        }
        if dims[0] != 3 {
            return Err(bad("expected three components"));
        }
        let grid = Grid2D::unchecked(f[2], dims[1], dims[2], f[0]).map_err(|e| bad(&e.to_string()))?;
        let mut bytes = vec![0u8; 16 * grid.len()];
        r.read_exact(&mut bytes)?;
        let values = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                C64::new(re, im)
            })
            .collect();
        Ok(StateField { grid, values, time: f[1] })
    }
}

const SNAPSHOT_MAGIC: &[u8; 8] = b"RBTFLD01";

impl ModeSpectrum {
    pub fn zeros(grid: Grid2D) -> Self {
        ModeSpectrum { grid, coeffs: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    /// The `3·N2` coefficients of slot `k`, ordered `[c][j]`.
    pub fn slot(&self, k: usize) -> &[C64] {
        let m = 3 * self.grid.n2;
        &self.coeffs[k * m..(k + 1) * m]
    }

    pub fn slot_mut(&mut self, k: usize) -> &mut [C64] {
        let m = 3 * self.grid.n2;
        &mut self.coeffs[k * m..(k + 1) * m]
    }

    /// Contribution of slot `k` to `‖U‖²`.
    pub fn slot_energy(&self, k: usize) -> f64 {
        self.slot(k).iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.l1 * self.grid.h2()
    }

    /// Slots whose energy exceeds `rel` times the total.
    pub fn active_slots(&self, rel: f64) -> Vec<usize> {
        let e: Vec<f64> = (0..self.grid.n1).map(|k| self.slot_energy(k)).collect();
        let total: f64 = e.iter().sum();
        (0..self.grid.n1).filter(|&k| total > 0.0 && e[k] > rel * total).collect()
    }

    pub fn to_field(&self, time: f64) -> StateField {
        let g = self.grid;
        let fft = Fft1::new(g.n1);
        let mut u = StateField::zeros(g);
        u.time = time;
        let mut buf = vec![C64::new(0.0, 0.0); g.n1];
        for c in 0..3 {
            for j in 0..g.n2 {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = self.coeffs[(k * 3 + c) * g.n2 + j];
                }
                fft.inverse(&mut buf);
                for (i, b) in buf.iter().enumerate() {
                    let idx = u.index(c, i, j);
                    u.values[idx] = *b;
                }
            }
        }
        u
    }
}

impl ScalarField {
    pub fn zeros(grid: Grid2D) -> Self {
        ScalarField { grid, values: vec![C64::new(0.0, 0.0); grid.n1 * grid.n2] }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h1() * self.grid.h2()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `x₁`-Fourier coefficients `[k][j]`.
    pub fn to_modes(&self) -> Vec<C64> {
        let g = self.grid;
        let fft = Fft1::new(g.n1);
        let mut out = vec![C64::new(0.0, 0.0); g.n1 * g.n2];
        let mut buf = vec![C64::new(0.0, 0.0); g.n1];
        for j in 0..g.n2 {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = self.values[i * g.n2 + j];
            }
            fft.forward(&mut buf);
            for (k, b) in buf.iter().enumerate() {
                out[k * g.n2 + j] = *b;
            }
        }
        out
    }

    pub fn from_modes(grid: Grid2D, coeffs: &[C64]) -> Self {
        let fft = Fft1::new(grid.n1);
        let mut f = ScalarField::zeros(grid);
        let mut buf = vec![C64::new(0.0, 0.0); grid.n1];
        for j in 0..grid.n2 {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = coeffs[k * grid.n2 + j];
            }
            fft.inverse(&mut buf);
            for (i, b) in buf.iter().enumerate() {
                f.values[i * grid.n2 + j] = *b;
            }
        }
        f
    }
}
