//! Exact diagonalization in fixed particle-number and spin sectors.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::ops::QubitOperator;
use crate::sim::Statevector;

/// Register size above which the oracle refuses to run.
pub const MAX_FCI_QUBITS: usize = 20;

/// Twice the spin projection of a bitstring, alpha on even modes.
pub fn twice_sz_of(bits: usize) -> i32 {
    let alpha = (bits & 0x5555_5555_5555_5555).count_ones() as i32;
    let beta = (bits & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i32;
    alpha - beta
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorSpectrum {
    pub n_electrons: usize,
    pub twice_sz: i32,
    /// Ascending.
    pub energies: Vec<f64>,
    pub ground_vector: Statevector,
    /// Basis bitstrings of the sector, ascending.
    pub basis: Vec<usize>,
}

impl SectorSpectrum {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn sz(&self) -> f64 {
        f64::from(self.twice_sz) / 2.0
    }
}

/// Bitstrings with the given popcount and spin that pass `filter`.
pub fn sector_basis(
    num_qubits: usize,
    n_electrons: usize,
    twice_sz: i32,
    filter: impl Fn(usize) -> bool,
) -> Vec<usize> {
    (0..1usize << num_qubits)
        .filter(|&b| {
            b.count_ones() as usize == n_electrons && twice_sz_of(b) == twice_sz && filter(b)
        })
        .collect()
}

/// Dense matrix of `h` restricted to `basis`. Elements leaking out of the
/// sector are ignored; symmetry-conserving operators have none.
pub fn sector_matrix(h: &QubitOperator, basis: &[usize]) -> DMatrix<Complex64> {
    let index: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut m = DMatrix::<Complex64>::zeros(basis.len(), basis.len());
    for (col, &b) in basis.iter().enumerate() {
        for term in h.terms() {
            let (phase, out) = term.string.apply_to_basis(b);
            if let Some(&row) = index.get(&out) {
                m[(row, col)] += term.coefficient * phase;
            }
        }
    }
    m
}

fn guard(h: &QubitOperator) -> Result<()> {
    if h.num_qubits() > MAX_FCI_QUBITS {
        return Err(Error::ResourceLimit {
            what: "exact diagonalization qubits",
            requested: h.num_qubits(),
            limit: MAX_FCI_QUBITS,
        });
    }
    Ok(())
}

/// Spectrum of `h` on the states passing `filter` inside the sector.
pub fn fci_sector_filtered(
    h: &QubitOperator,
    n_electrons: usize,
    twice_sz: i32,
    filter: impl Fn(usize) -> bool,
) -> Result<SectorSpectrum> {
    guard(h)?;
    let n = h.num_qubits();
    let basis = sector_basis(n, n_electrons, twice_sz, filter);
    if basis.is_empty() {
        return Err(Error::EmptySector {
            n_electrons,
            twice_sz,
        });
    }
    let m = sector_matrix(h, &basis);
    let (energies, vectors) = eigh(&m);
    let mut ground = Statevector::zeros(n)?;
    for (i, &b) in basis.iter().enumerate() {
        ground.amplitudes_mut()[b] = vectors[(i, 0)];
    }
    ground.normalize();
    Ok(SectorSpectrum {
        n_electrons,
        twice_sz,
        energies,
        ground_vector: ground,
        basis,
    })
}

pub fn fci_sector(h: &QubitOperator, n_electrons: usize, twice_sz: i32) -> Result<SectorSpectrum> {
    fci_sector_filtered(h, n_electrons, twice_sz, |_| true)
}

/// Total crystal momentum (linear mesh index sum) filter for a 1D or general mesh.
pub fn momentum_filter<'a>(
    mode_momenta: &'a [usize],
    mesh: &'a crate::lattice::KMesh,
    total: usize,
) -> impl Fn(usize) -> bool + 'a {
    move |b| {
        let mut k = 0;
        for (m, &km) in mode_momenta.iter().enumerate() {
            if b >> m & 1 == 1 {
                k = mesh.add_linear(k, km);
            }
        }
        k == total
    }
}

/// Exact removal and attachment energies relative to the N-electron ground state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactSpectra {
    pub ground_energy: f64,
    /// `E(N−1) − E0(N)`, ascending.
    pub ip: Vec<f64>,
    /// `E(N+1) − E0(N)`, ascending.
    pub ea: Vec<f64>,
}

impl ExactSpectra {
    /// Fundamental gap `E(N+1) + E(N−1) − 2E(N)`.
    pub fn gap(&self) -> f64 {
        self.ea[0] + self.ip[0]
    }
}

/// IP and EA spectra in the sectors reached by removing or adding one
/// alpha electron.
pub fn exact_ip_ea(h: &QubitOperator, n_electrons: usize, twice_sz: i32) -> Result<ExactSpectra> {
    exact_ip_ea_channel(h, n_electrons, twice_sz, 1)
}

/// As [`exact_ip_ea`], with the spin of the moved electron given by `channel` (±1).
pub fn exact_ip_ea_channel(
    h: &QubitOperator,
    n_electrons: usize,
    twice_sz: i32,
    channel: i32,
) -> Result<ExactSpectra> {
    let e0 = fci_sector(h, n_electrons, twice_sz)?.ground_energy();
    if n_electrons == 0 {
        return Err(Error::EmptySector {
            n_electrons: 0,
            twice_sz: twice_sz - channel,
        });
    }
    let minus = fci_sector(h, n_electrons - 1, twice_sz - channel)?;
    let plus = fci_sector(h, n_electrons + 1, twice_sz + channel)?;
    Ok(ExactSpectra {
        ground_energy: e0,
        ip: minus.energies.iter().map(|e| e - e0).collect(),
        ea: plus.energies.iter().map(|e| e - e0).collect(),
    })
}

/// Every eigenvalue of `h` on the full register.
pub fn full_spectrum(h: &QubitOperator) -> Result<Vec<f64>> {
    guard(h)?;
    let basis: Vec<usize> = (0..1usize << h.num_qubits()).collect();
    Ok(eigh(&sector_matrix(h, &basis)).0)
}
