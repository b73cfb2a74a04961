//! Dense complex 3×3 helpers, row-major `m[row][col]`.

use num_complex::Complex64 as C64;

pub type Mat3 = [[C64; 3]; 3];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn identity() -> Mat3 {
    let mut m = [[ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn det(m: &Mat3) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse by adjugate; `None` for an exactly singular matrix.
#[allow(clippy::needless_range_loop)]
pub fn inverse(m: &Mat3) -> Option<Mat3> {
    let d = det(m);
    if d == ZERO {
        return None;
    }
    let inv_d = d.inv();
    let mut r = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (i1, i2) = ((j + 1) % 3, (j + 2) % 3);
            let (j1, j2) = ((i + 1) % 3, (i + 2) % 3);
            r[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) * inv_d;
        }
    }
    Some(r)
}

pub fn apply(m: &Mat3, v: &[C64; 3]) -> [C64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut e: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            e = e.max((a[i][j] - b[i][j]).norm());
        }
    }
    e
}
