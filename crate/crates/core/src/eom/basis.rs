//! Electron-removal and electron-attachment operator bases at one k-point.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntegralTable, KPoint, Spin};
use crate::ops::{factor_label, jordan_wigner, FermionOperator, Ladder, QubitOperator};
use crate::sim::hartree_fock_occupation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// `N − 1` states: one hole plus two-hole-one-particle operators.
    Ip,
    /// `N + 1` states: one particle plus two-particle-one-hole operators.
    Ea,
}

impl Sector {
    pub fn particle_change(self) -> i64 {
        match self {
            Sector::Ip => -1,
            Sector::Ea => 1,
        }
    }

    pub fn singles_name(self) -> &'static str {
        match self {
            Sector::Ip => "1h",
            Sector::Ea => "1p",
        }
    }

    pub fn doubles_name(self) -> &'static str {
        match self {
            Sector::Ip => "2h1p",
            Sector::Ea => "2p1h",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Ip => "ip",
            Sector::Ea => "ea",
        })
    }
}

/// Spin of the removed or attached electron.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinChannel {
    #[default]
    Alpha,
    Beta,
    Both,
}

impl SpinChannel {
    fn allows(self, twice_sz_change: i32, sector: Sector) -> bool {
        let sign = sector.particle_change() as i32;
        match self {
            SpinChannel::Alpha => twice_sz_change == sign,
            SpinChannel::Beta => twice_sz_change == -sign,
            SpinChannel::Both => twice_sz_change.abs() == 1,
        }
    }
}

impl FromStr for SpinChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" | "a" => Ok(SpinChannel::Alpha),
            "beta" | "b" => Ok(SpinChannel::Beta),
            "both" => Ok(SpinChannel::Both),
            other => Err(Error::InvalidInput(format!(
                "unknown spin channel `{other}`"
            ))),
        }
    }
}

/// Which orbital indices enter the two-body block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSpace {
    /// Every orbital for every index.
    #[default]
    General,
    /// Holes in occupied and particles in virtual reference orbitals.
    OccupiedVirtual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Single,
    Double,
}

#[derive(Clone, Debug)]
pub struct BasisOperator {
    pub label: String,
    pub block: Block,
    pub ladders: Vec<Ladder>,
    pub fermion: FermionOperator,
    pub qubit: QubitOperator,
}

#[derive(Clone, Debug)]
pub struct ExcitationBasis {
    pub sector: Sector,
    pub k_target: KPoint,
    pub channel: SpinChannel,
    pub space: IndexSpace,
    pub num_qubits: usize,
    pub operators: Vec<BasisOperator>,
}

impl ExcitationBasis {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.operators.iter().map(|o| o.label.clone()).collect()
    }

    /// Positions of the one-hole (one-particle) operators.
    pub fn singles_indices(&self) -> Vec<usize> {
        self.operators
            .iter()
            .enumerate()
            .filter(|(_, o)| o.block == Block::Single)
            .map(|(i, _)| i)
            .collect()
    }

    /// `Σ_u c_u ρ_u` as a fermion operator.
    pub fn combination(&self, coefficients: &[Complex64]) -> FermionOperator {
        let mut acc = FermionOperator::zero();
        for (o, &c) in self.operators.iter().zip(coefficients) {
            acc = &acc + &o.fermion.scale(c);
        }
        acc.simplify()
    }

    /// Sub-basis keeping the listed operators.
    pub fn select(&self, keep: &[usize]) -> ExcitationBasis {
        ExcitationBasis {
            operators: keep.iter().map(|&i| self.operators[i].clone()).collect(),
            ..self.clone()
        }
    }
}

/// Enumerates the momentum- and spin-allowed excitation operators.
///
/// IP: `a_p` with `k_p = k`, and `a†_P a_Q a_S` with `Q > S` and
/// `k_P − k_Q − k_S + k ≡ 0`. EA: `a†_p` with `k_p = k`, and
/// `a†_P a†_Q a_S` with `P > Q` and `k_P + k_Q − k_S − k ≡ 0`.
pub fn build_basis(
    table: &IntegralTable,
    sector: Sector,
    k_target: KPoint,
    channel: SpinChannel,
    space: IndexSpace,
) -> Result<ExcitationBasis> {
    if !table.mesh.contains(k_target) {
        return Err(Error::InvalidInput(format!(
            "k-point {:?} outside mesh {:?}",
            k_target.0,
            table.mesh.dims()
        )));
    }
    let n = table.num_modes();
    let kt = table.mesh.linear(k_target);
    let km = table.mode_momenta();
    let tsz = |m: usize| Spin::of_mode(m).twice_sz();
    let occupied = match space {
        IndexSpace::General => vec![true; n],
        IndexSpace::OccupiedVirtual => {
            let mut occ = vec![false; n];
            for m in hartree_fock_occupation(table)? {
                occ[m] = true;
            }
            occ
        }
    };
    let hole_ok = |m: usize| space == IndexSpace::General || occupied[m];
    let particle_ok = |m: usize| space == IndexSpace::General || !occupied[m];
    let mesh = &table.mesh;

    let mut raw: Vec<(Block, Vec<Ladder>)> = Vec::new();
    match sector {
        Sector::Ip => {
            for p in (0..n).rev() {
                if km[p] == kt && channel.allows(-tsz(p), sector) {
                    raw.push((Block::Single, vec![Ladder::annihilate(p)]));
                }
            }
            for p in (0..n).rev().filter(|&p| particle_ok(p)) {
                for q in (0..n).rev().filter(|&q| hole_ok(q)) {
                    for s in (0..q).rev().filter(|&s| hole_ok(s)) {
                        if channel.allows(tsz(p) - tsz(q) - tsz(s), sector)
                            && mesh.momentum_allowed_linear(&[km[p], kt], &[km[q], km[s]])
                        {
                            raw.push((
                                Block::Double,
                                vec![
                                    Ladder::create(p),
                                    Ladder::annihilate(q),
                                    Ladder::annihilate(s),
                                ],
                            ));
                        }
                    }
                }
            }
        }
        Sector::Ea => {
            for p in (0..n).rev() {
                if km[p] == kt && channel.allows(tsz(p), sector) {
                    raw.push((Block::Single, vec![Ladder::create(p)]));
                }
            }
            for p in (0..n).rev().filter(|&p| particle_ok(p)) {
                for q in (0..p).rev().filter(|&q| particle_ok(q)) {
                    for s in (0..n).rev().filter(|&s| hole_ok(s)) {
                        if channel.allows(tsz(p) + tsz(q) - tsz(s), sector)
                            && mesh.momentum_allowed_linear(&[km[p], km[q]], &[km[s], kt])
                        {
                            raw.push((
                                Block::Double,
                                vec![Ladder::create(p), Ladder::create(q), Ladder::annihilate(s)],
                            ));
                        }
                    }
                }
            }
        }
    }
    if raw.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let operators = raw
        .into_iter()
        .map(|(block, ladders)| {
            let fermion = FermionOperator::term(Complex64::new(1.0, 0.0), ladders.clone());
            let qubit = jordan_wigner(&fermion, n)?;
            let prefix = match block {
                Block::Single => sector.singles_name(),
                Block::Double => sector.doubles_name(),
            };
            Ok(BasisOperator {
                label: format!("{prefix}{}", factor_label(&ladders)),
                block,
                ladders,
                fermion,
                qubit,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExcitationBasis {
        sector,
        k_target,
        channel,
        space,
        num_qubits: n,
        operators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hubbard_integrals, HubbardSpec};

    fn two_site() -> IntegralTable {
        hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap()
    }

    #[test]
    fn gamma_two_orbital_counts_match_enumeration() {
        let t = two_site();
        let ip = build_basis(
            &t,
            Sector::Ip,
            KPoint([0, 0, 0]),
            SpinChannel::Alpha,
            IndexSpace::General,
        )
        .unwrap();
        // brute force: all (p, q > s) with 2Sz change -1
        let mut want = 0;
        for p in 0..4 {
            for q in 0..4 {
                for s in 0..q {
                    let d = Spin::of_mode(p).twice_sz()
                        - Spin::of_mode(q).twice_sz()
                        - Spin::of_mode(s).twice_sz();
                    if d == -1 {
                        want += 1;
                    }
                }
            }
        }
        assert_eq!(ip.singles_indices().len(), 2);
        assert_eq!(ip.len() - 2, want);
        assert_eq!(ip.labels()[0], "1h[2]");
        assert!(ip.labels().iter().skip(2).all(|l| l.starts_with("2h1p[")));
    }

    #[test]
    fn doubles_respect_momentum_rule() {
        let t = hubbard_integrals(&HubbardSpec::ring(4, 1.0, 2.0, 4)).unwrap();
        for sector in [Sector::Ip, Sector::Ea] {
            let b = build_basis(
                &t,
                sector,
                KPoint([0, 0, 1]),
                SpinChannel::Both,
                IndexSpace::General,
            )
            .unwrap();
            let km = t.mode_momenta();
            for o in &b.operators {
                let signed: i64 = o
                    .ladders
                    .iter()
                    .map(|l| {
                        if l.dagger {
                            km[l.mode] as i64
                        } else {
                            -(km[l.mode] as i64)
                        }
                    })
                    .sum();
                let target = sector.particle_change();
                assert_eq!((signed - target).rem_euclid(4), 0, "{}", o.label);
            }
        }
    }

    #[test]
    fn no_duplicate_annihilator_pairs() {
        let t = two_site();
        let ip = build_basis(
            &t,
            Sector::Ip,
            KPoint([0, 0, 0]),
            SpinChannel::Both,
            IndexSpace::General,
        )
        .unwrap();
        let mut seen = std::collections::HashSet::new();
        for o in &ip.operators {
            let mut key = o.ladders.clone();
            if key.len() == 3 {
                key[1..].sort();
            }
            assert!(seen.insert(key), "{}", o.label);
        }
    }

    #[test]
    fn occupied_virtual_restricts_doubles() {
        let t = two_site();
        let occ = hartree_fock_occupation(&t).unwrap();
        let b = build_basis(
            &t,
            Sector::Ea,
            KPoint([0, 0, 0]),
            SpinChannel::Alpha,
            IndexSpace::OccupiedVirtual,
        )
        .unwrap();
        for o in b.operators.iter().filter(|o| o.block == Block::Double) {
            assert!(!occ.contains(&o.ladders[0].mode) && !occ.contains(&o.ladders[1].mode));
            assert!(occ.contains(&o.ladders[2].mode));
        }
    }

    #[test]
    fn off_mesh_target_rejected() {
        assert!(build_basis(
            &two_site(),
            Sector::Ip,
            KPoint([0, 0, 1]),
            SpinChannel::Alpha,
            IndexSpace::General
        )
        .is_err());
    }
}
