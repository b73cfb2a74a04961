//! Smoothed indicator of a compact observation region and the local mass.

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::field::StateField;
use crate::grid::Grid2D;

/// Width of the cosine collar in grid cells.
pub const COLLAR_CELLS: f64 = 4.0;

/// Separable weights `w₁(x₁)·w₂(x₂)` sampled on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionOmega {
    pub grid: Grid2D,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub collar: f64,
}

fn taper(dist_outside: f64, collar: f64) -> f64 {
    if dist_outside <= 0.0 {
        1.0
    } else if dist_outside >= collar {
        0.0
    } else {
        0.5 * (1.0 + (PI * dist_outside / collar).cos())
    }
}

impl RegionOmega {
    /// The whole box.
    pub fn whole(grid: Grid2D) -> Self {
        RegionOmega { grid, w1: vec![1.0; grid.n1], w2: vec![1.0; grid.n2], collar: 0.0 }
    }

    /// `x₁ ∈ [lo, hi]` (all latitudes), kept `L1/8` away from the seam
    /// including its collar.
    pub fn band(grid: Grid2D, lo: f64, hi: f64) -> Result<Self> {
        RegionOmega::rectangle(grid, (lo, hi), None)
    }

    /// `x₁ ∈ [lo, hi]`, optionally `x₂` within an arc `[a, b]` of the circle.
    pub fn rectangle(grid: Grid2D, x1: (f64, f64), x2: Option<(f64, f64)>) -> Result<Self> {
        let (lo, hi) = x1;
        let collar = COLLAR_CELLS * grid.h1();
        let margin = grid.l1 / 8.0;
        if !(lo < hi) || lo - collar < margin || hi + collar > grid.l1 - margin {
            return Err(WaveError::InvalidArgument(format!(
                "region [{lo}, {hi}] with collar {collar} must stay {margin} inside the box [0, {}]",
                grid.l1
            )));
        }
        let w1 = (0..grid.n1)
            .map(|i| {
                let x = grid.x1(i);
                taper((lo - x).max(x - hi), collar)
            })
            .collect();
        let w2 = match x2 {
            None => vec![1.0; grid.n2],
            Some((a, b)) => {
                let c2 = COLLAR_CELLS * grid.h2();
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                if !(half > 0.0 && half + c2 < PI) {
                    return Err(WaveError::InvalidArgument(format!("latitude arc [{a}, {b}] is not a proper arc")));
                }
                (0..grid.n2)
                    .map(|j| {
                        let d = (grid.x2(j) - mid + PI).rem_euclid(2.0 * PI) - PI;
                        taper(d.abs() - half, c2)
                    })
                    .collect()
            }
        };
        Ok(RegionOmega { grid, w1, w2, collar })
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w1[i] * self.w2[j]
    }
}

/// `∫ w |U|²` over the grid.
pub fn local_mass(u: &StateField, omega: &RegionOmega) -> f64 {
    let g = u.grid;
    let mut s = 0.0;
    for c in 0..3 {
        let comp = u.component(c);
        for i in 0..g.n1 {
            let wi = omega.w1[i];
            if wi == 0.0 {
                continue;
            }
            let row = &comp[i * g.n2..(i + 1) * g.n2];
            s += wi * row.iter().zip(&omega.w2).map(|(v, w)| w * v.norm_sqr()).sum::<f64>();
        }
    }
    s * g.h1() * g.h2()
}
