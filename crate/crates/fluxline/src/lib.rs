//! Normal-mode spectrum, qubit–mode couplings, high-frequency decoupling and
//! multimode Lamb shift of a flux qubit inductively coupled to a
//! quarter-wavelength transmission-line resonator, cross-checked by an
//! independent discrete LC-ladder eigensolver.
//!
//! Pipeline:
//!
//! 1. [`params`] validates the raw circuit inputs and derives the invariant
//!    constants (boundary inductance L_c2, impedance, ω₀, ω_cutoff, …).
//! 2. [`modes`] solves the transcendental boundary condition
//!    `kX·tan(kX) = Xl/L_c2` exactly (bracketed, one root per branch) and
//!    provides the low/high-frequency closed forms and current profiles.
//! 3. [`coupling`] turns modes into zero-point currents and coupling rates
//!    `ħg_n = L_c·I_qubit·I_zp(n)`, with the 1/√(1+(ω/ω_cutoff)²)
//!    suppression that decouples the high-frequency modes.
//! 4. [`lamb`] evaluates the cutoff-regularized mode sums (digamma closed
//!    form, brute-force partial sums with certified tails, asymptotics) and
//!    the renormalized gap Δ = Δ₀·exp(−2Σ(g_n/ω_n)²).
//! 5. [`ladder`] rebuilds the same physics as a finite LC ladder plus qubit,
//!    solves the generalized eigenproblem, and quantifies the convergence to
//!    the continuum answers.
//!
//! All value types are plain data and every operation is a pure function,
//! safe to call concurrently.

pub mod config;
pub mod coupling;
pub mod digamma;
pub mod error;
pub mod kahan;
pub mod ladder;
pub mod lamb;
pub mod modes;
pub mod params;
pub mod richardson;
pub mod roots;
pub mod scalar;
pub mod tridiag;
pub mod units;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type used by the CLI and the reference test suite.
pub type Real = f64;

pub type CircuitParams = params::CircuitParams<Real>;
pub type DerivedParams = params::DerivedParams<Real>;
pub type Mode = modes::Mode<Real>;
pub type ModeProfile = modes::ModeProfile<Real>;
pub type CouplingResult = coupling::CouplingResult<Real>;
pub type LambSum = lamb::LambSum<Real>;
pub type RenormalizedGap = lamb::RenormalizedGap<Real>;
pub type StationaryState = ladder::StationaryState<Real>;
pub type LadderSystem = ladder::LadderSystem<Real>;
pub type LadderSpectrum = ladder::LadderSpectrum<Real>;
