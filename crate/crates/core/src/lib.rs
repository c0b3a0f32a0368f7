//! Estimation of the ear-canal transfer impedance from input-impedance
//! spectra.
//!
//! The canal is modeled as a one-dimensional horn: a Fourier-parameterized
//! area function terminated by a two-resonator eardrum impedance in
//! parallel with a cone compliance. The horn equation is solved per
//! frequency with linear finite elements, and the model parameters are
//! fitted to measured (or synthetic) input-impedance data by penalty-
//! augmented bounded Nelder-Mead multistart optimization. The fitted model
//! then predicts the transfer impedance at the eardrum.
//!
//! Modules:
//!
//! * [`medium`], [`spectrum`] — constants, frequency grids, complex spectra
//! * [`geometry`] — the area function S(x)
//! * [`eardrum`] — terminating impedance models
//! * [`horn`] — the per-frequency finite-element solver
//! * [`analytic`] — closed-form references for validation
//! * [`neldermead`] — bounded simplex minimizer
//! * [`fit`] — cost assembly, length estimation, multistart pipeline

pub mod analytic;
pub mod eardrum;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod horn;
pub mod medium;
pub mod neldermead;
pub mod spectrum;

pub use error::{Error, Result};
pub use medium::MediumProperties;
pub use spectrum::{ImpedanceSpectrum, LevelPhaseDiff, SpectrumKind};
