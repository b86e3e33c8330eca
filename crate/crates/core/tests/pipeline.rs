mod common;

use std::process::Command;

use common::*;
use eom_adapt::adapt::{solve_ground_state, GroundStateConfig};
use eom_adapt::bands::{
    band_pipeline, load_fixture_dir, to_ev, write_fixture_dir, BandConfig, BandStructure, PathPoint,
};
use eom_adapt::fci::{exact_ip_ea, fci_sector};
use eom_adapt::lattice::{
    build_hamiltonian, hubbard_integrals, parse_kfcidump, HubbardSpec, IntegralTable,
};
use eom_adapt::noise::{run_noise_experiment, NoiseExperiment, NoiseSpec};
use eom_adapt::sim::Statevector;
use proptest::prelude::*;

fn per_k_dir(spec: &HubbardSpec) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let points: Vec<(PathPoint, IntegralTable)> = spec
        .single_k_cells()
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(n, cell)| {
            let point = PathPoint {
                label: format!("k{n}"),
                k: [0.0, 0.0, cell.twist],
                file: format!("k{n}.kfcidump"),
                mesh_k: [0, 0, 0],
            };
            (point, hubbard_integrals(&cell).unwrap())
        })
        .collect();
    write_fixture_dir(dir.path(), &points).unwrap();
    dir
}

fn dimer_ring(u: f64) -> HubbardSpec {
    let mut spec = HubbardSpec::with_cell(4, 2, 1.0, u, 8);
    spec.t_inter = 0.5;
    spec.onsite = vec![-0.5, 0.5];
    spec
}

#[test]
fn adaptive_energies_are_variational_and_monotone() {
    for name in [
        "hchain_111",
        "hchain_112",
        "hubbard_nk1",
        "hubbard_nk3_complex",
    ] {
        let table = parse_kfcidump(fixture(&format!("{name}.kfcidump"))).unwrap();
        for complemented in [true, false] {
            let cfg = GroundStateConfig {
                complemented,
                ..GroundStateConfig::default()
            };
            let gs = solve_ground_state(&table, &cfg).unwrap();
            let exact = fci_sector(&gs.hamiltonian, table.n_electrons, 0)
                .unwrap()
                .ground_energy();
            assert!(
                gs.result.energy >= exact - 1e-10,
                "{name}: below the exact energy"
            );
            assert!(gs.result.energy <= gs.result.reference_energy + 1e-12);
            for pair in gs.result.history.windows(2) {
                assert!(
                    pair[1].energy <= pair[0].energy + 1e-10,
                    "{name}: energy rose"
                );
            }
        }
    }
}

#[test]
fn noninteracting_bands_are_the_bloch_energies() {
    let spec = dimer_ring(0.0);
    let dir = per_k_dir(&spec);
    let bs = band_pipeline(
        &load_fixture_dir(dir.path()).unwrap(),
        &BandConfig::default(),
    );
    assert!(bs.all_converged());
    for (n, p) in bs.points.iter().enumerate() {
        let (levels, _) = spec.bands(n);
        assert_eq!(p.ansatz_length, 0, "reference determinant is exact");
        assert_eq!(p.bands.valence.len(), 1);
        assert_eq!(p.bands.conduction.len(), 1);
        assert!((p.bands.valence[0].energy_ev - to_ev(levels[0])).abs() < 1e-9);
        assert!((p.bands.conduction[0].energy_ev - to_ev(levels[1])).abs() < 1e-9);
        assert!((p.bands.valence[0].qpwt - 1.0).abs() < 1e-10);
    }
}

#[test]
fn interaction_opens_the_gap_as_in_exact_diagonalization() {
    let free = band_pipeline(
        &load_fixture_dir(per_k_dir(&dimer_ring(0.0)).path()).unwrap(),
        &BandConfig::default(),
    );
    let spec = dimer_ring(2.0);
    let dir = per_k_dir(&spec);
    let fixtures = load_fixture_dir(dir.path()).unwrap();
    let bs = band_pipeline(&fixtures, &BandConfig::default());
    assert!(bs.all_converged());
    for (fp, p) in fixtures.iter().zip(&bs.points) {
        let h = build_hamiltonian(&fp.table).unwrap();
        let ex = exact_ip_ea(&h, fp.table.n_electrons, 0).unwrap();
        let gap = p.bands.conduction[0].energy_ev - p.bands.valence[0].energy_ev;
        assert!(
            (gap - to_ev(ex.gap())).abs() < 1e-5,
            "{}: {gap} vs {}",
            p.label,
            to_ev(ex.gap())
        );
    }
    assert!(bs.gap.unwrap().gap_ev > free.gap.unwrap().gap_ev + 0.1);
}

#[test]
fn band_output_is_reproducible() {
    let fixtures = load_fixture_dir(fixture("hubbard_bands")).unwrap();
    let cfg = BandConfig {
        eom_np: true,
        ..BandConfig::default()
    };
    let a = band_pipeline(&fixtures, &cfg).to_json().unwrap();
    let b = band_pipeline(&fixtures, &cfg).to_json().unwrap();
    assert_eq!(a, b);
    let back = BandStructure::from_json(&a).unwrap();
    assert_eq!(back.to_json().unwrap(), a);
}

#[test]
fn noise_runs_repeat_bit_for_bit() {
    let table = parse_kfcidump(fixture("hchain_111.kfcidump")).unwrap();
    let gs = solve_ground_state(&table, &GroundStateConfig::default()).unwrap();
    let cfg = NoiseExperiment {
        spec: NoiseSpec {
            shots: 1 << 12,
            repeats: 3,
            ..NoiseSpec::default()
        },
        ..NoiseExperiment::default()
    };
    let a = run_noise_experiment(&table, &gs, &cfg)
        .unwrap()
        .to_json()
        .unwrap();
    let b = run_noise_experiment(&table, &gs, &cfg)
        .unwrap()
        .to_json()
        .unwrap();
    assert_eq!(a, b);
    let other = NoiseExperiment {
        base_seed: 7,
        ..cfg
    };
    assert_ne!(
        a,
        run_noise_experiment(&table, &gs, &other)
            .unwrap()
            .to_json()
            .unwrap()
    );
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eom-adapt"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn cli_exit_codes() {
    let h111 = fixture("hchain_111.kfcidump");
    let h112 = fixture("hchain_112.kfcidump");
    let (code, text) = cli(&["fci", "--integrals", h111.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["ground_energy"].as_f64().unwrap() + 1.25412757).abs() < 1e-7);

    assert_eq!(cli(&["ground", "--integrals", h111.to_str().unwrap()]).0, 0);
    assert_eq!(
        cli(&[
            "ground",
            "--integrals",
            h112.to_str().unwrap(),
            "--max-iter",
            "1"
        ])
        .0,
        2
    );
    assert_eq!(
        cli(&["ground", "--integrals", "/nonexistent.kfcidump"]).0,
        3
    );
    assert_eq!(
        cli(&[
            "ground",
            "--integrals",
            h111.to_str().unwrap(),
            "--pool",
            "nope"
        ])
        .0,
        3
    );
    assert_eq!(
        cli(&["eom", "--integrals", h111.to_str().unwrap(), "--k", "0,0,5"]).0,
        3
    );

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ring");
    let (code, _) = cli(&[
        "model",
        "hubbard",
        "--cells",
        "2",
        "--sites",
        "2",
        "--t-inter",
        "0.5",
        "--onsite=-0.5,0.5",
        "--u",
        "2",
        "--electrons",
        "4",
        "--per-k",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, text) = cli(&[
        "bands",
        "--fixture-dir",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert!(text.lines().next().unwrap().starts_with("k_label"));
    assert!(text.lines().count() > 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn band_basis_spectrum_matches_real_space(
        n_cells in 1usize..4,
        t in 0.2f64..1.5,
        t_inter in 0.2f64..1.5,
        u in 0.0f64..6.0,
        twist in 0.0f64..1.0,
        e0 in -1.0f64..1.0,
    ) {
        let mut spec = HubbardSpec::with_cell(n_cells, 2, t, u, 2);
        spec.t_inter = t_inter;
        spec.twist = twist;
        spec.onsite = vec![e0, -e0];
        let table = hubbard_integrals(&spec).unwrap();
        let h = build_hamiltonian(&table).unwrap();
        let (modes, rs) = real_space_hubbard(&spec);
        let basis = determinants(modes, 2, 0);
        let ours = eigenvalues(&eom_adapt::fci::sector_matrix(&h, &basis));
        let exact = eigenvalues(&fermion_matrix(&rs, &basis));
        prop_assert!(max_abs_diff(&ours, &exact) < 1e-9);
    }

    #[test]
    fn hamiltonian_expectations_are_real(seed in any::<u64>()) {
        use rand::SeedableRng;
        let table = parse_kfcidump(fixture("hubbard_nk3_complex.kfcidump")).unwrap();
        let h = build_hamiltonian(&table).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let psi = Statevector::random(table.num_modes(), &mut rng).unwrap();
        prop_assert!(psi.expectation_value(&h).unwrap().im.abs() < 1e-12);
    }
}
