//! Reduced density matrix of a probe electron after a single elastic
//! scattering event on a finite-mass rigid lattice.
//!
//! Because the lattice recoils as a whole, each diffracted beam leaves the
//! scatterer in a differently boosted centre-of-mass state. Tracing out the
//! scatterer turns the electron into a mixed state whose coherences are
//! damped by the overlaps of those boosted states. This crate computes that
//! density matrix, its purity, entropy, real-space intensity and fringe
//! contrast, the decoherence time under free dispersion of the scatterer, and
//! a quadrature oracle for the general product-state expressions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod decoherence;
pub mod density_matrix;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod sample;
pub mod units;
pub mod vectors;

pub use amplitudes::{electron_wavelength, AmplitudeModel, ScatteringAmplitude};
pub use decoherence::{decoherence_time, dispersed_sigma0, sweep_tau, DispersionScenario, TauRow};
pub use density_matrix::{
    build_rho_asymptotic, build_rho_factorized, build_rho_from_amplitudes, overlap_gaussian, BeamSet, DensityMatrix,
    EntropyBase,
};
pub use error::{Error, Result};
pub use oracle::{build_rho_gaussian_product, build_rho_oracle, clt_convergence, CltRow, OracleResult, OracleSettings, ProductState};
pub use sample::{cm_state_from_lattice, AtomWavefunction, Lattice, SampleState, TabulatedWavefunction};
pub use units::{InverseLength, Length, Mass, Time};
pub use vectors::{Position, WaveVector};
