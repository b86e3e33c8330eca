//! The projected EOM functionals against the working equation, on a converged
//! and on an early-stopped ground state.

use eom_adapt::adapt::{solve_ground_state, GroundStateConfig};
use eom_adapt::eom::{
    build_basis, eom_spectrum, verify_functional_equivalence, EomConfig, IndexSpace, Sector,
    SpinChannel,
};
use eom_adapt::lattice::{parse_kfcidump, KPoint};
use num_complex::Complex64;

fn main() -> eom_adapt::Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/hubbard_nk3_complex.kfcidump"
    );
    let table = parse_kfcidump(path)?;
    let gamma = KPoint([0, 0, 0]);
    for max_iter in [1, 200] {
        let mut cfg = GroundStateConfig::default();
        cfg.adapt.max_iter = max_iter;
        let gs = solve_ground_state(&table, &cfg)?;
        println!(
            "ground state after {} operators, E {:+.10}",
            gs.result.ansatz.len(),
            gs.result.energy
        );
        for sector in [Sector::Ip, Sector::Ea] {
            let basis = build_basis(
                &table,
                sector,
                gamma,
                SpinChannel::Alpha,
                IndexSpace::General,
            )?;
            let s = eom_spectrum(
                &table,
                &gs.state,
                &gs.hamiltonian,
                sector,
                gamma,
                &EomConfig::default(),
            )?;
            let lowest: Vec<Complex64> =
                s.solution.eigenvectors.column(0).iter().copied().collect();
            let rep = verify_functional_equivalence(
                &gs.state,
                &gs.hamiltonian,
                &basis.combination(&lowest),
            )?;
            println!(
                "  {sector}: working {:+.8}  projected {:+.8}  unprojected {:+.8}  spread {:.1e}",
                rep.working_equation,
                rep.double_commutator.re,
                rep.unprojected_double_commutator.re,
                rep.max_relative_deviation
            );
        }
    }
    Ok(())
}
