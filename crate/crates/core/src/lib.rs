//! Bloch-vector dynamics of a two-level atom coupled to a thermal single-mode
//! field in the Jaynes-Cummings model.
//!
//! * [`evolution`] evaluates the truncated photon-number series of the affine
//!   Bloch map, resonant and detuned.
//! * [`averages`] gives long-time averages in closed form and numerically.
//! * [`sampling`] samples `S_z`, bins it and fits the arcsine and normal
//!   densities and the variance power law.
//! * [`entanglement`] bounds the atom-field entanglement of formation from
//!   below and hosts an exact truncated-Fock reference.
//! * [`cli`] drives the `jcm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averages;
pub mod bloch;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod params;
pub mod sampling;
mod summation;

pub use averages::{
    average_bloch, time_average_closed_general, time_average_closed_resonant, time_average_limits,
    time_average_numeric, TimeAverages,
};
pub use bloch::{evolve_bloch, trajectory, BlochVector, Trajectory};
pub use entanglement::{
    concurrence, entanglement_lower_bound, eof_from_concurrence, normalize, oracle_reduced_state,
    projected_state, projection_weight, spin_flip, ComplexMatrix4, EntanglementResult,
    ProjectedState,
};
pub use error::{JcmError, Result};
pub use evolution::{
    evolution_matrix, evolution_matrix_general, evolution_matrix_resonant, EvolutionMatrix,
};
pub use params::{dtilde, truncation_order, ModelParams, TruncationPolicy};
pub use sampling::{
    arcsine_density, build_histogram, fit_arcsine_amplitude, fit_arcsine_amplitude_interior,
    fit_normal, power_law_fit, sample_moments, sample_series, variance_scan, Histogram,
    MomentStats, PowerLawFit, SampleSeries,
};
pub use summation::pairwise_sum;
