//! Exact ground, removal and attachment energies for every bundled fixture.

use eom_adapt::fci::{exact_ip_ea, fci_sector};
use eom_adapt::lattice::{build_hamiltonian, parse_kfcidump};

fn main() -> eom_adapt::Result<()> {
    for name in [
        "hchain_111",
        "hchain_112",
        "hubbard_nk1",
        "hubbard_nk3_complex",
    ] {
        let path = format!("{}/fixtures/{name}.kfcidump", env!("CARGO_MANIFEST_DIR"));
        let table = parse_kfcidump(&path)?;
        let h = build_hamiltonian(&table)?;
        let ground = fci_sector(&h, table.n_electrons, 0)?;
        let ex = exact_ip_ea(&h, table.n_electrons, 0)?;
        println!(
            "{name:<20} {} qubits  sector dim {:>3}  E0 {:+.10}  IP {:.6}  EA {:.6}  gap {:.6} Ha",
            table.num_modes(),
            ground.basis.len(),
            ex.ground_energy,
            ex.ip[0],
            ex.ea[0],
            ex.gap()
        );
    }
    Ok(())
}
