//! The trapped set `Λ = {F = 0}`: bracketing in `ξ₁`, grid sampling, the
//! small-`ξ₁` scaling of `F` and the fixed-energy area test.

use alloc::vec::Vec;

use crate::action::OrbitFamily;
use crate::error::{Error, Result};
use crate::math::{self};
use crate::orbit::Libration;
use crate::profile::CoriolisProfile;
use crate::quad::Quadrature;
use crate::symbols::rossby_gradient;

/// A point of `Λ` above the grid node `(x₂, ξ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPoint {
    pub x2: f64,
    pub xi2: f64,
    pub xi1_root: f64,
    /// `F` re-evaluated at the root.
    pub f_residual: f64,
    pub bracket: (f64, f64),
}

/// Bracketing controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOptions {
    pub nodes_per_decade: usize,
    /// Bisection stops once the bracket is shorter than this.
    pub tol: f64,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        LambdaOptions { nodes_per_decade: 64, tol: 1e-10 }
    }
}

/// All roots in one `ξ₁` range, with the endpoint values of `b′F`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootScan {
    pub points: Vec<LambdaPoint>,
    /// `sign(b′(x₂))·F` at the smallest `|ξ₁|` node that evaluated.
    pub bf_small: f64,
    /// `sign(b′(x₂))·F` at the largest `|ξ₁|` node that evaluated.
    pub bf_large: f64,
    /// Nodes where `F` could not be evaluated.
    pub failed_nodes: usize,
}

/// Log-spaced nodes from `lo` to `hi` (same sign, `|lo| < |hi|` not required).
pub fn log_nodes(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let s = math::signum0(lo);
    let (a, b) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
    let decades = math::log10(b / a);
    let n = (math::ceil(decades * per_decade as f64) as usize).max(1);
    (0..=n)
        .map(|i| s * a * math::pow(10.0, decades * i as f64 / n as f64))
        .collect()
}

/// Roots of `ξ₁ ↦ F(ξ₁, x₂, ξ₂)` in `range`.
pub fn find_lambda_roots(profile: &CoriolisProfile, x2: f64, xi2: f64, range: (f64, f64)) -> Result<Vec<LambdaPoint>> {
    find_lambda_roots_with(profile, x2, xi2, range, &LambdaOptions::default(), &Quadrature::default()).map(|s| s.points)
}

pub fn find_lambda_roots_with(
    profile: &CoriolisProfile,
    x2: f64,
    xi2: f64,
    range: (f64, f64),
    opts: &LambdaOptions,
    quad: &Quadrature,
) -> Result<RootScan> {
    let (lo, hi) = range;
    if lo * hi <= 0.0 || lo.abs() < 1e-3 || hi.abs() < 1e-3 {
        return Err(Error::InvalidArgument("xi1 range must exclude a neighbourhood of 0"));
    }
    let db = profile.eval(x2).db;
    if db.abs() < 1e-12 {
        return Err(Error::InvalidArgument("b'(x2) vanishes: E is identically zero there"));
    }
    let f = |xi1: f64| Libration::through(profile, xi1, x2, xi2).and_then(|o| o.drift(profile, quad));
    let nodes = log_nodes(lo, hi, opts.nodes_per_decade);
    let values: Vec<Option<f64>> = nodes.iter().map(|&x| f(x).ok()).collect();
    let failed_nodes = values.iter().filter(|v| v.is_none()).count();
    let evaluated: Vec<(f64, f64)> = nodes
        .iter()
        .zip(&values)
        .filter_map(|(&x, v)| v.map(|v| (x, v)))
        .collect();
    let sb = math::signum0(db);
    let bf_small = evaluated.first().map(|p| sb * p.1).unwrap_or(f64::NAN);
    let bf_large = evaluated.last().map(|p| sb * p.1).unwrap_or(f64::NAN);
    let mut points = Vec::new();
    for w in evaluated.windows(2) {
        let ((xa, fa), (xb, fb)) = (w[0], w[1]);
        if fa * fb > 0.0 {
            continue;
        }
        let (mut a, mut b, mut fa) = (xa, xb, fa);
        if fa == 0.0 {
            b = a;
        }
        let mut ok = true;
        while (b - a).abs() > opts.tol {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            match f(m) {
                Ok(fm) => {
                    if (fm < 0.0) == (fa < 0.0) && fm != 0.0 {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let root = 0.5 * (a + b);
        if let Ok(res) = f(root) {
            let bracket = if a < b { (a, b) } else { (b, a) };
            points.push(LambdaPoint { x2, xi2, xi1_root: root, f_residual: res, bracket });
        }
    }
    if points.is_empty() {
        return Err(Error::NoSignChange { f_lo: bf_small * sb, f_hi: bf_large * sb });
    }
    Ok(RootScan { points, bf_small, bf_large, failed_nodes })
}

/// Tensor grid over `(x₂, ξ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub x2: Vec<f64>,
    pub xi2: Vec<f64>,
}

impl LambdaGrid {
    /// Cell-centred nodes: `n_x2` over the circle, `n_xi2` over `[−xi2_max, xi2_max]`.
    pub fn uniform(n_x2: usize, n_xi2: usize, xi2_max: f64) -> Self {
        let hx = math::TAU / n_x2 as f64;
        let hk = 2.0 * xi2_max / n_xi2 as f64;
        LambdaGrid {
            x2: (0..n_x2).map(|i| (i as f64 + 0.5) * hx).collect(),
            xi2: (0..n_xi2).map(|j| -xi2_max + (j as f64 + 0.5) * hk).collect(),
        }
    }

    /// Cell-centred nodes on the box `x2 × xi2`.
    pub fn rectangle(x2: (f64, f64), xi2: (f64, f64), n_x2: usize, n_xi2: usize) -> Self {
        let hx = (x2.1 - x2.0) / n_x2 as f64;
        let hk = (xi2.1 - xi2.0) / n_xi2 as f64;
        LambdaGrid {
            x2: (0..n_x2).map(|i| x2.0 + (i as f64 + 0.5) * hx).collect(),
            xi2: (0..n_xi2).map(|j| xi2.0 + (j as f64 + 0.5) * hk).collect(),
        }
    }

    /// Nodes in row-major order (`x₂` slow, `ξ₂` fast).
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut v = Vec::with_capacity(self.x2.len() * self.xi2.len());
        for &a in &self.x2 {
            for &b in &self.xi2 {
                v.push((a, b));
            }
        }
        v
    }
}

/// Result at one grid node; failures are recorded, not propagated.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeOutcome {
    pub x2: f64,
    pub xi2: f64,
    pub roots: Vec<LambdaPoint>,
    pub error: Option<Error>,
}

/// Roots at one node; nodes with `|b′(x₂)|` below `min_bprime` are skipped.
pub fn lambda_node(
    profile: &CoriolisProfile,
    x2: f64,
    xi2: f64,
    range: (f64, f64),
    min_bprime: f64,
    opts: &LambdaOptions,
    quad: &Quadrature,
) -> NodeOutcome {
    if profile.eval(x2).db.abs() < min_bprime {
        return NodeOutcome { x2, xi2, roots: Vec::new(), error: Some(Error::InvalidArgument("node too close to b' = 0")) };
    }
    match find_lambda_roots_with(profile, x2, xi2, range, opts, quad) {
        Ok(s) => NodeOutcome { x2, xi2, roots: s.points, error: None },
        Err(e) => NodeOutcome { x2, xi2, roots: Vec::new(), error: Some(e) },
    }
}

/// Summary statistics of a sampled cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSummary {
    pub nodes: usize,
    pub nodes_with_roots: usize,
    pub coverage: f64,
    pub points: usize,
    pub max_roots_per_node: usize,
    /// Largest `|Δξ₁_root|` between matched roots at adjacent nodes.
    pub max_neighbor_jump: f64,
    /// Largest `|Δξ₁_root|/Δ` over adjacent nodes: a finite value means the
    /// roots form a Lipschitz graph over the sampled nodes.
    pub max_neighbor_slope: f64,
    pub max_abs_residual: f64,
}

/// The sampled cloud in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaCloud {
    pub grid: LambdaGrid,
    pub nodes: Vec<NodeOutcome>,
    pub summary: LambdaSummary,
}

impl LambdaCloud {
    /// Assemble from per-node outcomes listed in [`LambdaGrid::nodes`] order.
    pub fn from_nodes(grid: LambdaGrid, nodes: Vec<NodeOutcome>) -> Self {
        let (nx, nk) = (grid.x2.len(), grid.xi2.len());
        assert_eq!(nodes.len(), nx * nk);
        let with = nodes.iter().filter(|n| !n.roots.is_empty()).count();
        let points: usize = nodes.iter().map(|n| n.roots.len()).sum();
        let max_roots = nodes.iter().map(|n| n.roots.len()).max().unwrap_or(0);
        let max_res = nodes
            .iter()
            .flat_map(|n| n.roots.iter())
            .map(|p| p.f_residual.abs())
            .fold(0.0, f64::max);
        let mut jump: f64 = 0.0;
        let mut slope: f64 = 0.0;
        let mut compare = |a: &NodeOutcome, b: &NodeOutcome, spacing: f64| {
            for p in &a.roots {
                if let Some(d) = b.roots.iter().map(|q| (q.xi1_root - p.xi1_root).abs()).reduce(f64::min) {
                    jump = jump.max(d);
                    slope = slope.max(d / spacing);
                }
            }
        };
        let hx = if nx > 1 { grid.x2[1] - grid.x2[0] } else { 1.0 };
        let hk = if nk > 1 { grid.xi2[1] - grid.xi2[0] } else { 1.0 };
        for i in 0..nx {
            for j in 0..nk {
                let here = &nodes[i * nk + j];
                if i + 1 < nx {
                    compare(here, &nodes[(i + 1) * nk + j], hx);
                }
                if j + 1 < nk {
                    compare(here, &nodes[i * nk + j + 1], hk);
                }
            }
        }
        let summary = LambdaSummary {
            nodes: nodes.len(),
            nodes_with_roots: with,
            coverage: with as f64 / nodes.len().max(1) as f64,
            points,
            max_roots_per_node: max_roots,
            max_neighbor_jump: jump,
            max_neighbor_slope: slope,
            max_abs_residual: max_res,
        };
        LambdaCloud { grid, nodes, summary }
    }

    pub fn points(&self) -> impl Iterator<Item = &LambdaPoint> {
        self.nodes.iter().flat_map(|n| n.roots.iter())
    }
}

/// Sequential sampling of `Λ` over `grid`.
pub fn sample_lambda(profile: &CoriolisProfile, grid: &LambdaGrid, range: (f64, f64)) -> LambdaCloud {
    let quad = Quadrature::default();
    let opts = LambdaOptions::default();
    let nodes = grid
        .nodes()
        .into_iter()
        .map(|(x2, xi2)| lambda_node(profile, x2, xi2, range, 1e-3, &opts, &quad))
        .collect();
    LambdaCloud::from_nodes(grid.clone(), nodes)
}

/// Least-squares `(slope, intercept)` of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 || points.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (math::ln(x), math::ln(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let den = n * sxx - sx * sx;
    if den == 0.0 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / den;
    Some((slope, (sy - slope * sx) / n))
}

/// Fitted small-`ξ₁` behaviour of `|F|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(ξ₁, F)` samples.
    pub samples: Vec<(f64, f64)>,
    /// `min |F|·|ξ₁|` over the samples.
    pub min_f_times_xi1: f64,
    /// No sign change of `F` between `δ_ξ1` and the smallest sample.
    pub root_free_below: bool,
}

/// Fit `log|F|` against `log|ξ₁|` along `xi1_sequence`.
pub fn smallxi_scaling(profile: &CoriolisProfile, x2: f64, xi2: f64, xi1_sequence: &[f64]) -> Result<ScalingFit> {
    smallxi_scaling_with(profile, x2, xi2, xi1_sequence, &Quadrature::default())
}

pub fn smallxi_scaling_with(
    profile: &CoriolisProfile,
    x2: f64,
    xi2: f64,
    xi1_sequence: &[f64],
    quad: &Quadrature,
) -> Result<ScalingFit> {
    if profile.eval(x2).db.abs() < 1e-12 || xi1_sequence.len() < 2 {
        return Err(Error::FitFailure);
    }
    let f = |xi1: f64| Libration::through(profile, xi1, x2, xi2).and_then(|o| o.drift(profile, quad));
    let mut samples = Vec::with_capacity(xi1_sequence.len());
    for &x in xi1_sequence {
        samples.push((x, f(x)?));
    }
    let s0 = math::signum0(samples[0].1);
    if s0 == 0.0 || samples.iter().any(|p| math::signum0(p.1) != s0) {
        return Err(Error::FitFailure);
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|p| (p.0.abs(), p.1.abs())).collect();
    let (slope, intercept) = loglog_slope(&logs).ok_or(Error::FitFailure)?;
    let min_f_times_xi1 = logs.iter().map(|p| p.0 * p.1).fold(f64::INFINITY, f64::min);
    let smallest = xi1_sequence.iter().copied().min_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
    let below = log_nodes(1e-3 * math::signum0(smallest), smallest, 16);
    let root_free_below = below
        .iter()
        .all(|&x| f(x).map(|v| math::signum0(v) == s0).unwrap_or(true));
    Ok(ScalingFit { slope, intercept, samples, min_f_times_xi1, root_free_below })
}

/// Fixed-energy area `a(ξ₁)` around a point of `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    pub xi1_root: f64,
    pub energy: f64,
    pub step: f64,
    /// `(ξ₁, a)` at `root + k·step`, `k = −3..=3`.
    pub areas: Vec<(f64, f64)>,
    /// Central differences of `a` at the root and at `root ∓ 2·step`.
    pub slope_root: f64,
    pub slope_left: f64,
    pub slope_right: f64,
    /// `a″` at the root; its sign tells minimum from maximum.
    pub curvature: f64,
    pub sign_change: bool,
    /// `|a′(root)| / max(|a′(left)|, |a′(right)|)`.
    pub flat_ratio: f64,
}

impl AreaReport {
    /// Derivative changes sign across the root and is small there.
    pub fn is_extremal(&self) -> bool {
        self.sign_change && self.flat_ratio <= 0.1
    }
}

/// Fixed-energy area of the orbit family through `(x₂, ξ₂)`, continued in `ξ₁`.
pub fn area_at_fixed_energy(
    profile: &CoriolisProfile,
    family: &OrbitFamily,
    energy: f64,
    xi1: f64,
    quad: &Quadrature,
) -> Result<f64> {
    let fam = if xi1 == family.xi1 { *family } else { family.at_xi1(profile, xi1)? };
    fam.orbit(profile, energy)?.area(profile, quad)
}

/// Area derivative test at a point of `Λ`.
pub fn extremal_area_check(profile: &CoriolisProfile, lp: &LambdaPoint) -> Result<AreaReport> {
    extremal_area_check_with(profile, lp, &Quadrature::default())
}

pub fn extremal_area_check_with(profile: &CoriolisProfile, lp: &LambdaPoint, quad: &Quadrature) -> Result<AreaReport> {
    let root = lp.xi1_root;
    let energy = rossby_gradient(profile, root, lp.x2, lp.xi2).e;
    let orbit = Libration::through(profile, root, lp.x2, lp.xi2)?;
    let family = OrbitFamily::containing(profile, &orbit)?;
    let h = 2e-3 * root.abs();
    let mut areas = Vec::with_capacity(7);
    for k in -3..=3 {
        let x = root + k as f64 * h;
        areas.push((x, area_at_fixed_energy(profile, &family, energy, x, quad)?));
    }
    let a = |k: i32| areas[(k + 3) as usize].1;
    let slope_root = (a(1) - a(-1)) / (2.0 * h);
    let slope_left = (a(-1) - a(-3)) / (2.0 * h);
    let slope_right = (a(3) - a(1)) / (2.0 * h);
    let curvature = (a(1) - 2.0 * a(0) + a(-1)) / (h * h);
    Ok(AreaReport {
        xi1_root: root,
        energy,
        step: h,
        sign_change: slope_left * slope_right < 0.0,
        flat_ratio: slope_root.abs() / slope_left.abs().max(slope_right.abs()),
        areas,
        slope_root,
        slope_left,
        slope_right,
        curvature,
    })
}

/// `(a′(ξ₁) at fixed E, sign(E)·F)` for the orbit through a point; the two agree.
pub fn area_slope_relation(profile: &CoriolisProfile, xi1: f64, x2: f64, xi2: f64, quad: &Quadrature) -> Result<(f64, f64)> {
    let orbit = Libration::through(profile, xi1, x2, xi2)?;
    let family = OrbitFamily::containing(profile, &orbit)?;
    let e = orbit.energy;
    let h = 1e-3 * xi1.abs();
    let d1 = |h: f64| -> Result<f64> {
        Ok((area_at_fixed_energy(profile, &family, e, xi1 + h, quad)?
            - area_at_fixed_energy(profile, &family, e, xi1 - h, quad)?)
            / (2.0 * h))
    };
    let slope = (4.0 * d1(0.5 * h)? - d1(h)?) / 3.0;
    Ok((slope, math::signum0(e) * orbit.drift(profile, quad)?))
}
