//! Fermionic and Pauli operator algebra.

pub mod fermion;
pub mod jw;
pub mod pauli;

pub use fermion::{factor_label, FermionOperator, FermionTerm, Ladder};
pub use jw::jordan_wigner;
pub use pauli::{Pauli, PauliString, PauliTerm, QubitOperator, MAX_QUBITS, PRUNE_TOL};
