//! One- and two-electron integrals over (orbital, k-point) labels.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::kmesh::KMesh;

/// Hermiticity and momentum violations above this magnitude are rejected.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Spatial orbital `orb` at linear k index `k`. Orders k-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orbital {
    pub k: usize,
    pub orb: usize,
}

impl Orbital {
    pub fn new(k: usize, orb: usize) -> Self {
        Orbital { k, orb }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Alpha = 0,
    Beta = 1,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Alpha, Spin::Beta];

    /// Twice the spin projection.
    pub fn twice_sz(self) -> i32 {
        match self {
            Spin::Alpha => 1,
            Spin::Beta => -1,
        }
    }

    pub fn of_mode(mode: usize) -> Spin {
        if mode.is_multiple_of(2) {
            Spin::Alpha
        } else {
            Spin::Beta
        }
    }
}

/// Composite label of a spin orbital.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinOrbitalIndex {
    pub orbital: Orbital,
    pub spin: Spin,
}

/// Integral table for a spin-restricted periodic Hamiltonian
/// `H = c + Σ h_pq a†_p a_q + ½ Σ g^{pq}_{rs} a†_p a†_q a_r a_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralTable {
    pub mesh: KMesh,
    pub n_orb: usize,
    pub n_electrons: usize,
    pub constant: f64,
    /// Mean-field energy recorded by the generator, if any.
    pub ehf: Option<f64>,
    pub one_body: BTreeMap<[Orbital; 2], Complex64>,
    pub two_body: BTreeMap<[Orbital; 4], Complex64>,
}

impl IntegralTable {
    pub fn new(mesh: KMesh, n_orb: usize, n_electrons: usize, constant: f64) -> Self {
        IntegralTable {
            mesh,
            n_orb,
            n_electrons,
            constant,
            ehf: None,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        }
    }

    pub fn num_kpoints(&self) -> usize {
        self.mesh.num_kpoints()
    }

    pub fn num_spatial(&self) -> usize {
        self.num_kpoints() * self.n_orb
    }

    pub fn num_modes(&self) -> usize {
        2 * self.num_spatial()
    }

    pub fn spatial_index(&self, o: Orbital) -> usize {
        o.k * self.n_orb + o.orb
    }

    pub fn orbital(&self, spatial: usize) -> Orbital {
        Orbital::new(spatial / self.n_orb, spatial % self.n_orb)
    }

    pub fn mode(&self, o: Orbital, spin: Spin) -> usize {
        2 * self.spatial_index(o) + spin as usize
    }

    pub fn spin_orbital(&self, mode: usize) -> SpinOrbitalIndex {
        SpinOrbitalIndex {
            orbital: self.orbital(mode / 2),
            spin: Spin::of_mode(mode),
        }
    }

    /// Linear k index of each mode.
    pub fn mode_momenta(&self) -> Vec<usize> {
        (0..self.num_modes())
            .map(|m| self.orbital(m / 2).k)
            .collect()
    }

    pub fn orbitals(&self) -> impl Iterator<Item = Orbital> + '_ {
        (0..self.num_spatial()).map(|s| self.orbital(s))
    }

    pub fn h(&self, p: Orbital, q: Orbital) -> Complex64 {
        self.one_body.get(&[p, q]).copied().unwrap_or_default()
    }

    pub fn g(&self, p: Orbital, q: Orbital, r: Orbital, s: Orbital) -> Complex64 {
        self.two_body
            .get(&[p, q, r, s])
            .copied()
            .unwrap_or_default()
    }

    fn check_orbital(&self, o: Orbital) -> Result<()> {
        if o.orb >= self.n_orb || o.k >= self.num_kpoints() {
            return Err(Error::InvalidTable(format!(
                "orbital {} at k {} outside {} orbitals x {} k-points",
                o.orb,
                o.k,
                self.n_orb,
                self.num_kpoints()
            )));
        }
        Ok(())
    }

    /// Checks index ranges, momentum conservation, and Hermiticity.
    pub fn validate(&self) -> Result<()> {
        if self.n_orb == 0 {
            return Err(Error::InvalidTable("no orbitals".into()));
        }
        if self.n_electrons > self.num_modes() {
            return Err(Error::InvalidTable(format!(
                "{} electrons do not fit in {} spin orbitals",
                self.n_electrons,
                self.num_modes()
            )));
        }
        for (&[p, q], &v) in &self.one_body {
            self.check_orbital(p)?;
            self.check_orbital(q)?;
            if !self.mesh.momentum_allowed_linear(&[p.k], &[q.k]) && v.norm() > VALIDATION_TOL {
                return Err(Error::InvalidTable(format!(
                    "one-body entry {p:?},{q:?} violates momentum conservation"
                )));
            }
            let dev = (v - self.h(q, p).conj()).norm();
            if dev > VALIDATION_TOL {
                return Err(Error::InvalidTable(format!(
                    "one-body entry {p:?},{q:?} is not Hermitian (deviation {dev:.3e})"
                )));
            }
        }
        for (&[p, q, r, s], &v) in &self.two_body {
            for o in [p, q, r, s] {
                self.check_orbital(o)?;
            }
            if !self.mesh.momentum_allowed_linear(&[p.k, q.k], &[r.k, s.k])
                && v.norm() > VALIDATION_TOL
            {
                return Err(Error::InvalidTable(format!(
                    "two-body entry {p:?},{q:?},{r:?},{s:?} violates momentum conservation"
                )));
            }
            let dev = (v - self.g(s, r, q, p).conj()).norm();
            if dev > VALIDATION_TOL {
                return Err(Error::InvalidTable(format!(
                    "two-body entry {p:?},{q:?},{r:?},{s:?} is not Hermitian (deviation {dev:.3e})"
                )));
            }
        }
        Ok(())
    }

    /// Applies the orbital gauge change `d_p -> e^{i φ_p} d_p`, one phase per
    /// spatial orbital. Spectra are unchanged; wavefunction amplitudes pick up
    /// relative phases.
    pub fn with_orbital_phases(&self, phases: &[f64]) -> Result<IntegralTable> {
        if phases.len() != self.num_spatial() {
            return Err(Error::InvalidInput(format!(
                "expected {} orbital phases, got {}",
                self.num_spatial(),
                phases.len()
            )));
        }
        let ph = |o: Orbital| phases[self.spatial_index(o)];
        let e = |x: f64| Complex64::from_polar(1.0, x);
        let mut out = self.clone();
        out.one_body = self
            .one_body
            .iter()
            .map(|(&[p, q], &v)| ([p, q], v * e(ph(q) - ph(p))))
            .collect();
        out.two_body = self
            .two_body
            .iter()
            .map(|(&[p, q, r, s], &v)| ([p, q, r, s], v * e(ph(r) + ph(s) - ph(p) - ph(q))))
            .collect();
        Ok(out)
    }

    /// Diagonal of the one-body matrix, by spatial index.
    pub fn one_body_diagonal(&self) -> Vec<f64> {
        self.orbitals().map(|o| self.h(o, o).re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> IntegralTable {
        let mut t = IntegralTable::new(KMesh::chain(2).unwrap(), 1, 2, 0.5);
        t.one_body.insert(
            [Orbital::new(0, 0), Orbital::new(0, 0)],
            Complex64::new(-1.0, 0.0),
        );
        t.one_body.insert(
            [Orbital::new(1, 0), Orbital::new(1, 0)],
            Complex64::new(1.0, 0.0),
        );
        t
    }

    #[test]
    fn mode_linearization() {
        let t = table();
        assert_eq!(t.num_modes(), 4);
        assert_eq!(t.mode(Orbital::new(1, 0), Spin::Beta), 3);
        let so = t.spin_orbital(2);
        assert_eq!(so.orbital, Orbital::new(1, 0));
        assert_eq!(so.spin, Spin::Alpha);
        assert_eq!(t.mode_momenta(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn validation_catches_violations() {
        let mut t = table();
        t.validate().unwrap();
        t.one_body.insert(
            [Orbital::new(0, 0), Orbital::new(1, 0)],
            Complex64::new(0.3, 0.0),
        );
        assert!(t.validate().is_err());
        let mut t = table();
        t.one_body.insert(
            [Orbital::new(0, 0), Orbital::new(0, 0)],
            Complex64::new(-1.0, 0.1),
        );
        assert!(t.validate().is_err());
    }

    #[test]
    fn phases_preserve_hermiticity() {
        let mut t = table();
        let (a, b) = (Orbital::new(0, 0), Orbital::new(1, 0));
        t.two_body.insert([a, b, a, b], Complex64::new(0.2, 0.0));
        t.two_body.insert([b, a, b, a], Complex64::new(0.2, 0.0));
        t.two_body.insert([a, a, b, b], Complex64::new(0.1, 0.0));
        t.two_body.insert([b, b, a, a], Complex64::new(0.1, 0.0));
        let p = t.with_orbital_phases(&[0.0, 0.4]).unwrap();
        p.validate().unwrap();
        assert!((p.g(a, a, b, b) - Complex64::from_polar(0.1, 0.8)).norm() < 1e-15);
    }
}
