//! Operator pools of spin-, momentum-conserving excitations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::integrals::{IntegralTable, Spin};
use crate::ops::{factor_label, FermionOperator, Ladder};
use crate::sim::generator::{anti_hermitian_part, complementary_part, Generator};
use crate::sim::reference::hartree_fock_occupation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolKind {
    /// Occupied-to-virtual singles and doubles relative to the reference.
    Sd,
    /// Generalized singles and doubles over all spin orbitals.
    Gsd,
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolKind::Sd => "sd",
            PoolKind::Gsd => "gsd",
        })
    }
}

impl FromStr for PoolKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sd" => Ok(PoolKind::Sd),
            "gsd" => Ok(PoolKind::Gsd),
            other => Err(Error::InvalidInput(format!(
                "unknown pool `{other}` (expected sd or gsd)"
            ))),
        }
    }
}

/// Whether the entry is `T − T†` or its complement `i(T + T†)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Standard,
    Complement,
}

#[derive(Clone, Debug)]
pub struct PoolEntry {
    pub label: String,
    pub kind: EntryKind,
    /// The normal-ordered excitation `T`.
    pub excitation: Vec<Ladder>,
    pub tau: FermionOperator,
    pub generator: Generator,
}

impl PoolEntry {
    fn new(excitation: Vec<Ladder>, kind: EntryKind, num_modes: usize) -> Result<Self> {
        let t = FermionOperator::term(Complex64::new(1.0, 0.0), excitation.clone());
        let (tau, prefix) = match kind {
            EntryKind::Standard => (anti_hermitian_part(&t), "tau"),
            EntryKind::Complement => (complementary_part(&t), "ctau"),
        };
        let generator = Generator::from_fermion(&tau, num_modes)?;
        Ok(PoolEntry {
            label: format!("{prefix}{}", factor_label(&excitation)),
            kind,
            excitation,
            tau,
            generator,
        })
    }
}

#[derive(Clone, Debug)]
pub struct OperatorPool {
    pub kind: PoolKind,
    pub complemented: bool,
    num_qubits: usize,
    entries: Vec<PoolEntry>,
}

impl OperatorPool {
    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn get(&self, i: usize) -> Option<&PoolEntry> {
        self.entries.get(i)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }
}

struct ModeInfo {
    spin: i32,
    k: usize,
}

fn conserving(
    table: &IntegralTable,
    info: &[ModeInfo],
    create: &[usize],
    annihilate: &[usize],
) -> bool {
    let sz = |ms: &[usize]| ms.iter().map(|&m| info[m].spin).sum::<i32>();
    let ks = |ms: &[usize]| ms.iter().map(|&m| info[m].k).collect::<Vec<_>>();
    sz(create) == sz(annihilate)
        && table
            .mesh
            .momentum_allowed_linear(&ks(create), &ks(annihilate))
}

/// Excitations `T` in pool order: singles, then doubles.
pub fn pool_excitations(table: &IntegralTable, kind: PoolKind) -> Result<Vec<Vec<Ladder>>> {
    let n = table.num_modes();
    let info: Vec<ModeInfo> = (0..n)
        .map(|m| ModeInfo {
            spin: Spin::of_mode(m).twice_sz(),
            k: table.spin_orbital(m).orbital.k,
        })
        .collect();
    let single = |p: usize, q: usize| vec![Ladder::create(p), Ladder::annihilate(q)];
    let double = |p: usize, q: usize, r: usize, s: usize| {
        vec![
            Ladder::create(p),
            Ladder::create(q),
            Ladder::annihilate(r),
            Ladder::annihilate(s),
        ]
    };
    let mut out = Vec::new();
    match kind {
        PoolKind::Sd => {
            let occ = hartree_fock_occupation(table)?;
            let virt: Vec<usize> = (0..n).filter(|m| !occ.contains(m)).collect();
            for &a in virt.iter().rev() {
                for &i in occ.iter().rev() {
                    if conserving(table, &info, &[a], &[i]) {
                        out.push(single(a, i));
                    }
                }
            }
            let pairs = |set: &[usize]| {
                let mut v = Vec::new();
                for x in (0..set.len()).rev() {
                    for y in (0..x).rev() {
                        v.push((set[x], set[y]));
                    }
                }
                v
            };
            for (a, b) in pairs(&virt) {
                for (i, j) in pairs(&occ) {
                    if conserving(table, &info, &[a, b], &[i, j]) {
                        out.push(double(a, b, i, j));
                    }
                }
            }
        }
        PoolKind::Gsd => {
            for p in (0..n).rev() {
                for q in (0..p).rev() {
                    if conserving(table, &info, &[p], &[q]) {
                        out.push(single(p, q));
                    }
                }
            }
            let mut pairs = Vec::new();
            for p in (0..n).rev() {
                for q in (0..p).rev() {
                    pairs.push((p, q));
                }
            }
            for (i, &(p, q)) in pairs.iter().enumerate() {
                for &(r, s) in &pairs[i + 1..] {
                    if p == r || p == s || q == r || q == s {
                        continue;
                    }
                    if conserving(table, &info, &[p, q], &[r, s]) {
                        out.push(double(p, q, r, s));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Builds the pool; with `complemented` every entry `T − T†` is followed, after
/// the full standard block, by `i(T + T†)` in the same order.
pub fn build_pool(
    table: &IntegralTable,
    kind: PoolKind,
    complemented: bool,
) -> Result<OperatorPool> {
    let n = table.num_modes();
    let excitations = pool_excitations(table, kind)?;
    let mut entries = Vec::with_capacity(excitations.len() * if complemented { 2 } else { 1 });
    for ex in &excitations {
        entries.push(PoolEntry::new(ex.clone(), EntryKind::Standard, n)?);
    }
    if complemented {
        for ex in &excitations {
            entries.push(PoolEntry::new(ex.clone(), EntryKind::Complement, n)?);
        }
    }
    Ok(OperatorPool {
        kind,
        complemented,
        num_qubits: n,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hubbard_integrals, HubbardSpec};

    #[test]
    fn sd_pool_on_two_band_cell() {
        let t = hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap();
        let pool = build_pool(&t, PoolKind::Sd, false).unwrap();
        let labels: Vec<&str> = pool.entries().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["tau[3^ 1]", "tau[2^ 0]", "tau[3^ 2^ 1 0]"]);
    }

    #[test]
    fn complement_doubles_the_pool() {
        let t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 4.0, 2)).unwrap();
        for kind in [PoolKind::Sd, PoolKind::Gsd] {
            let plain = build_pool(&t, kind, false).unwrap();
            let full = build_pool(&t, kind, true).unwrap();
            assert_eq!(full.len(), 2 * plain.len());
            assert!(full.entries()[plain.len()].label.starts_with("ctau["));
        }
    }

    #[test]
    fn gsd_entries_conserve_momentum_and_spin() {
        let t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 4.0, 2)).unwrap();
        let pool = build_pool(&t, PoolKind::Gsd, false).unwrap();
        // 6 modes in 3 k-points: no single survives the momentum filter
        assert!(pool.entries().iter().all(|e| e.excitation.len() == 4));
        for e in pool.entries() {
            let sz: i32 = e
                .excitation
                .iter()
                .map(|l| Spin::of_mode(l.mode).twice_sz() * if l.dagger { 1 } else { -1 })
                .sum();
            assert_eq!(sz, 0);
            let k: Vec<usize> = e
                .excitation
                .iter()
                .map(|l| t.spin_orbital(l.mode).orbital.k)
                .collect();
            assert!(t.mesh.momentum_allowed_linear(&k[..2], &k[2..]));
        }
    }

    #[test]
    fn pool_kind_parsing() {
        assert_eq!("GSD".parse::<PoolKind>().unwrap(), PoolKind::Gsd);
        assert!("uccsd".parse::<PoolKind>().is_err());
    }
}
