//! Spontaneous emission of a two-level atom coupled to finitely many field
//! modes, treated as a finite Hermitian eigenproblem.
//!
//! * [`hermitian`]: dense Hermitian matrices and a Jacobi eigensolver.
//! * [`model`]: star Hamiltonians and closed-form survival probabilities.
//! * [`evolution`]: exact spectral time evolution plus an RK4 cross-check.
//! * [`inverse`]: star models realizing a prescribed spectrum and overlap profile.
//! * [`analysis`]: cosine-series structure, revival period and emission metrics.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` / `*32` aliases below fix the precision.
//! Energies and times are dimensionless with hbar = 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod csv;
pub mod error;
pub mod evolution;
pub mod hermitian;
pub mod inverse;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub use analysis::{
    aggregate_levels, dirichlet_survival, emission_metrics, fourier_coefficients,
    fourier_from_decomposition, revival_peak_time, revival_period, sqrt_survival_from_fourier,
    EmissionMetrics, FourierExpansion,
};
pub use evolution::{
    evolve_oracle, evolve_state, recommended_step, survival_probability, survival_series,
    StateVector, SurvivalSeries, TimeGrid,
};
pub use hermitian::{
    check_hermitian, eigh, reconstruct, ComplexMatrix, HermitianMatrix, SpectralDecomposition,
};
pub use inverse::{
    construct_hamiltonian, equally_spaced_spectrum, flat_profile, verify_round_trip,
    RoundTripReport, SpectralProfile,
};
pub use model::{
    build_hamiltonian, detuned_two_level_survival, identical_modes_spectrum,
    identical_modes_survival, two_level_survival, IdenticalModesSpectrum, StarModel,
};

pub type Complex64 = Complex<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type StarModel64 = StarModel<f64>;
pub type StateVector64 = StateVector<f64>;
pub type TimeGrid64 = TimeGrid<f64>;
pub type SurvivalSeries64 = SurvivalSeries<f64>;
pub type SpectralProfile64 = SpectralProfile<f64>;
pub type FourierExpansion64 = FourierExpansion<f64>;
pub type EmissionMetrics64 = EmissionMetrics<f64>;
pub type RoundTripReport64 = RoundTripReport<f64>;

pub type Complex32 = Complex<f32>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type SpectralDecomposition32 = SpectralDecomposition<f32>;
pub type StarModel32 = StarModel<f32>;
pub type StateVector32 = StateVector<f32>;
pub type TimeGrid32 = TimeGrid<f32>;
pub type SurvivalSeries32 = SurvivalSeries<f32>;
pub type SpectralProfile32 = SpectralProfile<f32>;
pub type FourierExpansion32 = FourierExpansion<f32>;
pub type EmissionMetrics32 = EmissionMetrics<f32>;
pub type RoundTripReport32 = RoundTripReport<f32>;
