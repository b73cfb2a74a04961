//! Pointwise symbols, Rossby ray dynamics and the trapped set for the linear
//! rotating shallow-water system on a latitude band `ℝ × 𝕋`.
//!
//! Everything here is a pure function of its inputs and allocation is the only
//! requirement beyond `core`, so the crate builds without `std`.
//!
//! The scaled system is `∂ₜU + M U = 0` for `U = (ρ, u₁, u₂)` with a Coriolis
//! factor `b(x₂)/ε`. Its principal symbol splits into two Poincaré branches
//! `τ± ≈ ±√(ξ₁²+ξ₂²+b²)` and a slow Rossby branch `τ₀ ≈ ε E` with
//! `E = b′ξ₁ / (ξ₁²+ξ₂²+b²)`.

#![no_std]
// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod action;
pub mod bohr;
pub mod error;
pub mod mat3;
pub mod math;
pub mod orbit;
pub mod phase;
pub mod profile;
pub mod quad;
pub mod rays;
pub mod roots;
pub mod symbols;
pub mod trapped;

pub use action::{action_a, drift_f_action, ActionTable};
pub use error::{Error, Result};
pub use orbit::{drift_f_space, drift_f_space_signed, Libration};
pub use phase::{Admissibility, PhasePoint};
pub use profile::{CoriolisProfile, ProfileValues};
pub use rays::{drift_f_time, find_period, integrate_ray, ray_rhs, PeriodData, PeriodOptions, Trajectory};
pub use symbols::{dispersion_roots, mode_matrix, mode_matrix_at, rossby_symbol_e, DispersionRoots, ModeMatrix};
pub use trapped::{extremal_area_check, find_lambda_roots, sample_lambda, smallxi_scaling, LambdaPoint};

pub use num_complex::Complex64;
