//! Dense qubit linear algebra: matrices, density states, rotations and
//! linear maps on the system qubit.

mod maps;
mod matrix;
mod state;

pub use maps::{Composed, QubitMap, UnitaryMap};
pub use matrix::{Matrix, Pauli};
pub use state::{
    bloch_from_density, density_from_bloch, detector_hamiltonian, detector_propagator,
    diagonal_probabilities, evolve, partial_trace, rotation_unitary, tensor, BlochVector,
    DensityState, QubitState, RotationAxis, Subsystem, TwoQubitState,
};
