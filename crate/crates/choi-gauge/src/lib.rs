//! Simulation and analysis of single-qubit process tomography under
//! statistical and systematic errors.
//!
//! The crate bundles:
//!
//! - [`linalg`]: dense complex matrix algebra sized for qubit work,
//!   including a deterministic Hermitian eigensolver;
//! - [`bases`]: the projective measurement basis, its dual operators, and a
//!   generic Gram-matrix dual constructor;
//! - [`channels`]: physical process models with exact outcome probabilities
//!   (ideal rotation, detuned pulses, correlated system–environment
//!   evolution, a pulse-level dynamical-decoupling sequence) plus readout
//!   and stray-light layers;
//! - [`tomography`]: shot sampling, frequency tables, linear-inversion
//!   reconstruction of process (Choi) matrices and per-preparation states;
//! - [`witness`]: rank-1 witness observables, their expansion coefficients,
//!   frequency-based expectation values and the Hoeffding consistency test;
//! - [`campaign`]: the two-round test protocol, seeded Monte Carlo sweeps
//!   and analysis of the bundled experimental data set;
//! - [`cli`]: the `choi-gauge` command-line front end and its file formats.
//!
//! Reconstruction keeps negative eigenvalues: a significantly negative
//! witness expectation on fresh data certifies that statistical noise alone
//! cannot explain the data, flagging a systematic error.

pub mod bases;
pub mod campaign;
pub mod channels;
pub mod cli;
pub mod linalg;
pub mod tomography;
pub mod witness;

pub use linalg::{CMatrix, C64};
