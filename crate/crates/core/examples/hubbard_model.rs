//! Builds Hubbard rings in the band basis, applies orbital phase gauges and
//! writes k-FCIDUMP files.
//!
//! `cargo run --example hubbard_model -- [OUT_DIR]`

use std::path::PathBuf;

use eom_adapt::lattice::{
    build_hamiltonian, hubbard_integrals, translation_deviation, write_kfcidump, HubbardSpec,
};

fn main() -> eom_adapt::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);

    // two-site cell at a single k-point: 4 qubits
    let cell = HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2);
    let table = hubbard_integrals(&cell)?;
    write_kfcidump(&table, out.join("hubbard_nk1.kfcidump"))?;
    println!(
        "two-site cell: {} qubits, {} two-body entries",
        table.num_modes(),
        table.two_body.len()
    );

    // three-cell ring with complex orbital gauges, so every τ has complex coefficients
    let ring = HubbardSpec::ring(3, 1.0, 4.0, 2);
    let complex = hubbard_integrals(&ring)?.with_orbital_phases(&[0.0, 0.7, 0.3])?;
    let h = build_hamiltonian(&complex)?;
    println!(
        "three-cell ring: {} Pauli terms, translation deviation {:.1e}",
        h.len(),
        translation_deviation(&h, &complex)
    );
    write_kfcidump(&complex, out.join("hubbard_nk3_complex.kfcidump"))?;
    println!("wrote fixtures to {}", out.display());
    Ok(())
}
