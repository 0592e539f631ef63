//! Numerical toolkit for testing macrorealism with two- and three-time
//! Leggett-Garg inequalities.
//!
//! The crate evaluates the four three-time inequalities together with the
//! twelve two-time inequalities, and simulates the measurement protocols used
//! to obtain their inputs: projective two-time measurements, ideal negative
//! measurement (INM) through an ancilla CNOT circuit, and the continuous in
//! time velocity measurement (CTVM) with a weakly coupled waiting detector.
//!
//! All numerical code is generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix it to `f64`, which is what the tolerances in
//! the test-suite are calibrated for.
//!
//! Modules:
//! - [`qcore`]: dense 2×2 / 4×4 complex algebra, qubit states, propagators.
//! - [`protocols`]: two-time probabilities, INM, CTVM, shot sampling.
//! - [`noise`]: relaxation channels and damping calibration.
//! - [`lgi`]: inequality evaluation, NSIT diagnostics, joint feasibility.
//! - [`regimes`]: initial-state scans, CTVM error budget, bound shifts.
//! - [`pulses`]: gate-level component sequences and decomposition checks.

pub mod error;
pub mod lgi;
pub mod noise;
pub mod protocols;
pub mod pulses;
pub mod qcore;
pub mod regimes;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = qcore::Matrix<f64>;
pub type QubitState = qcore::QubitState<f64>;
pub type TwoQubitState = qcore::TwoQubitState<f64>;
pub type BlochVector = qcore::BlochVector<f64>;
pub type SpinModel = protocols::SpinModel<f64>;
pub type DetectorModel = protocols::DetectorModel<f64>;
pub type TwoTimeProbabilities = protocols::TwoTimeProbabilities<f64>;
pub type ShotEstimate = protocols::ShotEstimate<f64>;
pub type RelaxationParams = noise::RelaxationParams<f64>;
pub type CalibratedDamping = noise::CalibratedDamping<f64>;
pub type MomentSet = lgi::MomentSet<f64>;
pub type InequalityReport = lgi::InequalityReport<f64>;
pub type JointFeasibility = lgi::JointFeasibility<f64>;
pub type ErrorBudget = regimes::ErrorBudget<f64>;
pub type RegionMap = regimes::RegionMap<f64>;
pub type PulseSequence = pulses::PulseSequence<f64>;
pub type CosineFit = pulses::CosineFit<f64>;
