//! ADAPT with and without complementary pool operators on the complex-orbital
//! Hubbard ring, printing the selection history.

use eom_adapt::adapt::{solve_ground_state, GroundStateConfig};
use eom_adapt::fci::fci_sector;
use eom_adapt::lattice::parse_kfcidump;

fn main() -> eom_adapt::Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/hubbard_nk3_complex.kfcidump"
    );
    let table = parse_kfcidump(path)?;
    for complemented in [true, false] {
        let cfg = GroundStateConfig {
            complemented,
            ..GroundStateConfig::default()
        };
        let gs = solve_ground_state(&table, &cfg)?;
        let exact = fci_sector(&gs.hamiltonian, table.n_electrons, 0)?.ground_energy();
        println!(
            "complemented pool: {complemented} ({} entries)",
            gs.pool.len()
        );
        for rec in &gs.result.history {
            println!(
                "  iter {:>2}  |R| {:.3e}  E {:+.10}  picked {}",
                rec.iteration,
                rec.gradient_norm,
                rec.energy,
                rec.label.as_deref().unwrap_or("-")
            );
        }
        println!(
            "  converged {}, error vs exact {:.3e} Ha\n",
            gs.result.converged,
            (gs.result.energy - exact).abs()
        );
    }
    Ok(())
}
