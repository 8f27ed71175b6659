//! Numerical laboratory for the one-soliton solution of the nonlinear
//! Schrödinger equation in a dispersive Kerr waveguide.
//!
//! The crate covers four linked pieces:
//!
//! * [`field`] — periodic grids, complex envelope fields, FFTs, norms;
//! * [`soliton`] — the closed-form `A e^{iKA²t/2} sech(z/ξ)` pulse, its
//!   amplitude/width constraint, photon number, and sech spectrum;
//! * [`propagate`] — Strang split-step integration of
//!   `∂a/∂t = i(C/2)∂²a/∂z² + iK|a|²a` with conserved-quantity tracking
//!   and envelope/lab frame transforms;
//! * [`photon`] — coherent-state photon statistics and Kerr number-state
//!   phases of the pulse;
//! * [`lax`] — the 2×2 connection matrices whose zero-curvature condition
//!   reproduces the cubic equation, with analytic and finite-difference
//!   residual paths and parallel transport.
//!
//! All numerics are generic over the scalar type via the [`float::Real`]
//! trait (`f32` or `f64`); the `*32`/`*64` aliases below pick a width.

pub mod error;
pub mod field;
pub mod float;
pub mod lax;
pub mod photon;
pub mod propagate;
pub mod soliton;

pub use error::{Error, Result};
pub use field::{
    continuum_spectrum, fft_forward, fft_inverse, l2_norm_sq, l2_rel_error, max_abs_diff,
    wavenumbers, ComplexField, Grid, WaveguideParams,
};
pub use float::Real;
pub use lax::{
    check_zeta_independence, compatibility_residual, h_matrix, lax_frame, m_matrix, nls_residual,
    parallel_transport, rectangle_holonomy, residual_diagonals_vanish, residual_lattice,
    LaxField, LaxFrameMap, LaxSample, LaxSoliton, Matrix2c, PathSegment, ResidualField,
    SampleLattice, ZetaIndependenceReport,
};
pub use photon::{
    alpha0, alpha_t, default_n_max, number_state_phase, photon_pmf, pmf_moments,
    CoherentAmplitude, PhotonPmf,
};
pub use propagate::{
    conserved_quantities, dispersion_omega, evolve, from_envelope_frame, linear_step,
    nonlinear_step, strang_step, to_envelope_frame, Invariants, SplitScheme, StepperConfig,
    Trajectory,
};
pub use soliton::{
    constraint_residual, from_photon_number, photon_number, reduce_zs, sech, sech_spectrum,
    soliton_field, zs_soliton_field, SolitonParams, ZsParams,
};

/// Complex scalar re-exports.
pub use num_complex::Complex;
pub type Complex32 = num_complex::Complex<f32>;
pub type Complex64 = num_complex::Complex<f64>;

// Double-precision aliases (the usual working set).
pub type Grid64 = Grid<f64>;
pub type Field64 = ComplexField<f64>;
pub type Waveguide64 = WaveguideParams<f64>;
pub type Soliton64 = SolitonParams<f64>;
pub type Zs64 = ZsParams<f64>;
pub type Stepper64 = StepperConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;

// Single-precision variants.
pub type Grid32 = Grid<f32>;
pub type Field32 = ComplexField<f32>;
pub type Waveguide32 = WaveguideParams<f32>;
pub type Soliton32 = SolitonParams<f32>;
