//! Pure-state tomography by iterated amplitude imposition.
//!
//! A state is reconstructed from the outcome distributions of a set of
//! orthonormal measurement bases by iterating an operator that keeps the
//! phases of the current guess and overwrites its amplitudes with the
//! measured ones, one basis at a time. Every state reproducing all the data
//! is an attractive fixed point of the composite map, so running the
//! iteration from many seeds and clustering the limits enumerates the
//! solutions (the "Pauli partners" of the state that generated the data).
//!
//! Modules:
//!
//! - [`hilbert`]: states, bases, Born probabilities, Haar sampling.
//! - [`metrics`]: Hellinger, distributional and Bures distances.
//! - [`imposition`]: single, composite and relaxed imposition steps.
//! - [`solver`]: multi-seed search, completeness probes, bifurcation sweeps.
//! - [`catalog`]: named bases (Pauli, spin, Fourier) and diagnostics.
//! - [`cli`]: spec/result file formats and the command implementations.

#![forbid(unsafe_code)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod imposition;
pub mod metrics;
pub mod solver;
pub mod tolerances;

pub use error::{Error, Result};
pub use hilbert::{ObservableBasis, ProbDist, PureState, C64};
pub use imposition::{CompositionOrder, TomographyProblem};
pub use solver::{SolutionSet, SolverConfig};
