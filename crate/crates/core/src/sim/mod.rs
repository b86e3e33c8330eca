//! Exact statevector simulation of reference states and product ansätze.

pub mod generator;
pub mod gradient;
pub mod reference;
pub mod statevector;

pub use generator::{anti_hermitian_part, apply_pool_exponential, complementary_part, Generator};
pub use gradient::{commutator_expectation, energy_and_gradient, energy_gradient, prepare_state};
pub use reference::{
    determinant_energy, fock_diagonal, hartree_fock_occupation, hartree_fock_spatial,
    occupation_index, prepare_hartree_fock,
};
pub use statevector::{apply_operator, expectation, Statevector, MAX_STATEVECTOR_QUBITS};
