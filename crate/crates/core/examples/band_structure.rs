//! Quasiparticle bands of the dimerized Hubbard ring from its per-k integral
//! files, with the unprojected baseline alongside.
//!
//! Usage: `cargo run --example band_structure [FIXTURE_DIR]`

use eom_adapt::bands::{ascii_plot, band_pipeline, load_fixture_dir, Alignment, BandConfig};

fn main() -> eom_adapt::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hubbard_bands").into());
    let fixtures = load_fixture_dir(&dir)?;
    let cfg = BandConfig {
        eom_np: true,
        alignment: Alignment::VbmZero,
        ..BandConfig::default()
    };
    let bs = band_pipeline(&fixtures, &cfg);
    for p in &bs.points {
        let v: Vec<String> = p
            .bands
            .valence
            .iter()
            .map(|l| format!("{:+.3}", l.energy_ev))
            .collect();
        let c: Vec<String> = p
            .bands
            .conduction
            .iter()
            .map(|l| format!("{:+.3}", l.energy_ev))
            .collect();
        println!(
            "{:>4}  {} operators  valence [{}]  conduction [{}]",
            p.label,
            p.ansatz_length,
            v.join(" "),
            c.join(" ")
        );
        if let Some(e) = &p.error {
            println!("      failed: {e}");
        }
    }
    if let (Some(g), Some(np)) = (&bs.gap, &bs.np_gap) {
        println!(
            "gap {:.4} eV ({} -> {}), unprojected {:.4} eV",
            g.gap_ev, g.k_valence, g.k_conduction, np.gap_ev
        );
    }
    println!("{}", ascii_plot(&bs, 16));
    Ok(())
}
