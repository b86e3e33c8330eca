//! Reads a periodic integral file, summarizes it and writes it back.
//!
//! Usage: `cargo run --example kfcidump_io [PATH]`

use eom_adapt::lattice::{parse_kfcidump, parse_kfcidump_str, to_kfcidump_string};

fn main() -> eom_adapt::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hchain_112.kfcidump").into()
    });
    let table = parse_kfcidump(&path)?;
    println!("{path}");
    println!(
        "mesh {:?}, {} orbitals per k, {} electrons, {} qubits",
        table.mesh.dims(),
        table.n_orb,
        table.n_electrons,
        table.num_modes()
    );
    println!(
        "{} one-body and {} two-body elements",
        table.one_body.len(),
        table.two_body.len()
    );
    println!(
        "constant {:.10}, recorded mean-field energy {:?}",
        table.constant, table.ehf
    );
    for (m, k) in table.mode_momenta().iter().enumerate() {
        println!("  mode {m}: k index {k}, {:?}", table.spin_orbital(m).spin);
    }

    let text = to_kfcidump_string(&table);
    let again = parse_kfcidump_str(&text)?;
    println!("round trip identical: {}", again == table);
    Ok(())
}
