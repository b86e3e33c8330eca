//! IP and EA roots at every k of the two-point H-chain, next to the exact
//! sector energies.

use eom_adapt::adapt::{solve_ground_state, GroundStateConfig};
use eom_adapt::eom::{eom_spectrum, EomConfig, Sector};
use eom_adapt::fci::exact_ip_ea;
use eom_adapt::lattice::parse_kfcidump;

fn main() -> eom_adapt::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hchain_112.kfcidump");
    let table = parse_kfcidump(path)?;
    let gs = solve_ground_state(&table, &GroundStateConfig::default())?;
    println!(
        "ground energy {:.10} with {} operators",
        gs.result.energy,
        gs.result.ansatz.len()
    );

    let exact = exact_ip_ea(&gs.hamiltonian, table.n_electrons, 0)?;
    println!("exact lowest IP {:.6}, EA {:.6}", exact.ip[0], exact.ea[0]);

    for k in table.mesh.points() {
        for sector in [Sector::Ip, Sector::Ea] {
            let s = eom_spectrum(
                &table,
                &gs.state,
                &gs.hamiltonian,
                sector,
                k,
                &EomConfig::default(),
            )?;
            let sol = &s.solution;
            println!(
                "k {k} {sector}: {} operators, {} retained",
                s.problem.dim(),
                sol.retained_dim
            );
            for (e, w) in sol.excitation_energies.iter().zip(&sol.qpwt).take(4) {
                println!("    {e:+.6} Ha  qpwt {w:.3}");
            }
        }
    }
    Ok(())
}
