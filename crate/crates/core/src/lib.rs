//! Detuned three-state Landau-Zener model.
//!
//! Three bare states `|1⟩, |2⟩, |3⟩` with energies `−κt`, `Δ` and `κt` are
//! coupled pairwise by static couplings `Ω_ij e^{−iφ_ij}`. The crate provides
//!
//! - the Hamiltonian and its dissipative (non-Hermitian) variant ([`model`]),
//! - instantaneous spectra and the minimum adiabatic gap ([`spectrum`]),
//! - numerically exact propagation: Schrödinger, non-Hermitian and Lindblad
//!   with an aggregated sink level ([`propagate`]),
//! - the independent crossing approximation ([`ica`]),
//! - deterministic parameter sweeps and figure presets ([`sweep`]),
//! - key=value run configuration and the command layer of the `lz3` binary
//!   ([`config`], [`cli`]).
//!
//! Units are dimensionless with `ħ = 1`; the presets use `Ω₂₃ = 1` as the
//! energy scale.

pub mod cli;
pub mod config;
pub mod error;
pub mod ica;
pub mod model;
pub mod ode;
pub mod propagate;
pub mod spectrum;
pub mod sweep;

pub use error::{ConfigError, Error, ParamError, SolverError};
pub use ica::{crossing_schedule, ica_predict, lz_probability, CrossingEvent, IcaPrediction, Regime};
pub use model::{char_poly_coeffs, dissipative_hamiltonian_at, hamiltonian_at, ComplexMatrix3, SystemParams};
pub use propagate::{
    propagate_lindblad, propagate_nonhermitian, propagate_schrodinger, transfer_efficiency,
    DensityMatrix4, PropagationResult, Sample, SolverOptions, StateVector,
};
pub use spectrum::{eigenvalues_sorted, gap_top, min_gap, min_gap_reverse, GapOptions, GapResult, SpectrumPoint};
pub use sweep::{figure_preset, run_sweep, Axis, AxisParam, AxisValues, Observable, SweepSpec, SweepTable};
