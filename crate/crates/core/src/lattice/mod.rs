//! k-point meshes, integral tables, model generators, and Hamiltonian assembly.

pub mod hamiltonian;
pub mod hubbard;
pub mod integrals;
pub mod kfcidump;
pub mod kmesh;

pub use hamiltonian::{
    build_hamiltonian, conjugate_by_phases, fermion_hamiltonian, number_operator, sz_operator,
    translation_deviation, translation_phases,
};
pub use hubbard::{hubbard_integrals, HubbardSpec};
pub use integrals::{IntegralTable, Orbital, Spin, SpinOrbitalIndex};
pub use kfcidump::{parse_kfcidump, parse_kfcidump_str, to_kfcidump_string, write_kfcidump};
pub use kmesh::{momentum_allowed, KMesh, KPoint};
