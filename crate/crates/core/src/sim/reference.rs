//! Closed-shell Hartree–Fock reference determinants.

use crate::error::{Error, Result};
use crate::lattice::integrals::{IntegralTable, Spin};
use crate::sim::statevector::Statevector;

const MAX_AUFBAU_ROUNDS: usize = 100;
const DEGENERACY_TOL: f64 = 1e-8;

/// Orbital energies `f_p = h_pp + Σ_{q occ} (2 g^{pq}_{qp} − g^{pq}_{pq})`
/// for a set of doubly occupied spatial orbitals.
pub fn fock_diagonal(table: &IntegralTable, occupied: &[usize]) -> Vec<f64> {
    (0..table.num_spatial())
        .map(|ps| {
            let p = table.orbital(ps);
            let mut f = table.h(p, p).re;
            for &qs in occupied {
                let q = table.orbital(qs);
                f += 2.0 * table.g(p, q, q, p).re - table.g(p, q, p, q).re;
            }
            f
        })
        .collect()
}

/// Doubly occupied spatial orbitals of the closed-shell determinant, by
/// self-consistent aufbau on the Fock diagonal. Ties go to the lower index.
pub fn hartree_fock_spatial(table: &IntegralTable) -> Result<Vec<usize>> {
    let n = table.n_electrons;
    if !n.is_multiple_of(2) {
        return Err(Error::OpenShell(format!(
            "{n} electrons cannot fill closed shells"
        )));
    }
    let n_occ = n / 2;
    let n_spatial = table.num_spatial();
    let order = |f: &[f64]| {
        let mut idx: Vec<usize> = (0..n_spatial).collect();
        idx.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
        idx
    };
    let mut occupied: Vec<usize> = order(&table.one_body_diagonal())[..n_occ].to_vec();
    occupied.sort_unstable();
    for _ in 0..MAX_AUFBAU_ROUNDS {
        let f = fock_diagonal(table, &occupied);
        let ranked = order(&f);
        if n_occ > 0 && n_occ < n_spatial {
            let homo = f[ranked[n_occ - 1]];
            let lumo = f[ranked[n_occ]];
            if lumo - homo < DEGENERACY_TOL {
                return Err(Error::OpenShell(format!(
                    "highest occupied and lowest virtual orbital energies coincide ({homo:.10} vs {lumo:.10})"
                )));
            }
        }
        let mut next = ranked[..n_occ].to_vec();
        next.sort_unstable();
        if next == occupied {
            return Ok(occupied);
        }
        occupied = next;
    }
    Err(Error::OpenShell("aufbau filling does not settle".into()))
}

/// Occupied spin-orbital modes of the determinant, ascending.
pub fn hartree_fock_occupation(table: &IntegralTable) -> Result<Vec<usize>> {
    let mut modes: Vec<usize> = hartree_fock_spatial(table)?
        .into_iter()
        .flat_map(|s| {
            let o = table.orbital(s);
            Spin::BOTH.map(|spin| table.mode(o, spin))
        })
        .collect();
    modes.sort_unstable();
    Ok(modes)
}

pub fn occupation_index(modes: &[usize]) -> usize {
    modes.iter().fold(0, |acc, m| acc | 1 << m)
}

pub fn prepare_hartree_fock(table: &IntegralTable) -> Result<Statevector> {
    let modes = hartree_fock_occupation(table)?;
    Statevector::basis_state(table.num_modes(), occupation_index(&modes))
}

/// Determinant energy `c + Σ 2h_pp + Σ_{pq} (2J − K)`, evaluated from the integrals.
pub fn determinant_energy(table: &IntegralTable, occupied_spatial: &[usize]) -> f64 {
    let mut e = table.constant;
    for &ps in occupied_spatial {
        let p = table.orbital(ps);
        e += 2.0 * table.h(p, p).re;
        for &qs in occupied_spatial {
            let q = table.orbital(qs);
            e += 2.0 * table.g(p, q, q, p).re - table.g(p, q, p, q).re;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, hubbard_integrals, number_operator, HubbardSpec};

    #[test]
    fn fills_lowest_band_first() {
        let t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 2.0, 2)).unwrap();
        assert_eq!(hartree_fock_occupation(&t).unwrap(), vec![0, 1]);
        let hf = prepare_hartree_fock(&t).unwrap();
        assert_eq!(hf.amplitudes()[0b11].re, 1.0);
        let n = hf.expectation_value(&number_operator(6)).unwrap();
        assert!((n.re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_energy_matches_expectation() {
        let t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 2.0, 2)).unwrap();
        let h = build_hamiltonian(&t).unwrap();
        let hf = prepare_hartree_fock(&t).unwrap();
        let e = hf.expectation_value(&h).unwrap();
        let occ = hartree_fock_spatial(&t).unwrap();
        assert!((e.re - determinant_energy(&t, &occ)).abs() < 1e-12);
        // two electrons at −2t plus U/N_k for the doubly occupied k = 0 band
        assert!((e.re - (-4.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!(e.im.abs() < 1e-12);
    }

    #[test]
    fn degenerate_filling_is_open_shell() {
        let t = hubbard_integrals(&HubbardSpec::ring(4, 1.0, 1.0, 4)).unwrap();
        assert!(matches!(prepare_hartree_fock(&t), Err(Error::OpenShell(_))));
        let odd = hubbard_integrals(&HubbardSpec::ring(2, 1.0, 1.0, 1)).unwrap();
        assert!(matches!(
            prepare_hartree_fock(&odd),
            Err(Error::OpenShell(_))
        ));
    }
}
