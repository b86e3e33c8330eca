//! Depolarizing noise on the converged H2-chain ansatz, with and without
//! zero-noise extrapolation.

use eom_adapt::adapt::{solve_ground_state, GroundStateConfig};
use eom_adapt::lattice::parse_kfcidump;
use eom_adapt::noise::{run_noise_experiment, NoiseExperiment};

fn main() -> eom_adapt::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hchain_111.kfcidump");
    let table = parse_kfcidump(path)?;
    let ground = solve_ground_state(&table, &GroundStateConfig::default())?;
    let report = run_noise_experiment(&table, &ground, &NoiseExperiment::default())?;

    println!("ideal energy {:.8}", report.ideal.energy);
    println!("exact noisy energies by scale {:?}", report.exact_energy);
    for r in &report.repeats {
        println!(
            "seed {:>5}  E(1) {:+.6}  E_zne {:+.6}  IP(1) {:+.6?}  IP_zne {:+.6?}  EA(1) {:+.6?}  EA_zne {:+.6?}",
            r.seed, r.energy[0], r.energy_zne, r.ip[0], r.ip_zne, r.ea[0], r.ea_zne
        );
    }
    let i = &report.improvement;
    println!("ideal IP {:?} EA {:?}", report.ideal.ip, report.ideal.ea);
    println!(
        "extrapolation helped: energy {}/{}, IP {}/{}, EA {}/{}",
        i.energy, i.repeats, i.ip, i.repeats, i.ea, i.repeats
    );
    Ok(())
}
