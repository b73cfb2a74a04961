//! Discretized evolution of the linear rotating shallow-water system on
//! `[0, L1) × 𝕋`: Fourier in `x₁`, pseudospectral in `x₂`, exact unitary
//! propagation per `x₁`-mode, WKB data, quantized mode projectors, scalar
//! Rossby propagation, Poincaré spectra and phase-space diagnostics.

#![forbid(unsafe_code)]
// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod generator;
pub mod grid;
pub mod husimi;
pub mod linalg;
pub mod modes;
pub mod omega;
pub mod propagator;
pub mod quant;
pub mod scalar;
pub mod spectral;
pub mod spectrum;
pub mod wkb;

pub use error::{Result, WaveError};
pub use field::{ModeSpectrum, ScalarField, StateField};
pub use generator::{build_generator, GeneratorMatrix};
pub use grid::Grid2D;
pub use husimi::{husimi, husimi_x1, husimi_x2, HusimiDensity, HusimiMarginal};
pub use modes::{project_modes, reconstruct_mode, Projector, Reconstruction};
pub use omega::{local_mass, RegionOmega};
pub use propagator::{evolve, Branch, Propagator};
pub use quant::{quantize_symbol, QuantizedSymbol};
pub use scalar::ScalarRossby;
pub use spectrum::{bohr_sommerfeld_levels, fit_level_shift, scalar_residual_check, ResidualReport, SpectrumTable};
pub use wkb::{wkb_initial, Envelope, LagrangianCloud, Phase, Polarization, WkbSpec};
