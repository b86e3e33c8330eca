//! Analytic one-dimensional Hubbard rings in the band (Bloch) basis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::integrals::{IntegralTable, Orbital};
use crate::lattice::kmesh::KMesh;
use crate::linalg::{eigh, CMatrix};

/// A ring of `n_cells` unit cells with `sites_per_cell` sites each.
///
/// Neighbouring sites inside a cell are joined by hopping `t`; the last site
/// of a cell hops to the first site of the next cell with `t_inter`. The
/// bond that closes the ring carries the phase `exp(2πi·twist)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubbardSpec {
    pub n_cells: usize,
    pub sites_per_cell: usize,
    pub t: f64,
    pub t_inter: f64,
    pub u: f64,
    /// On-site energies per site of the cell; empty means zero.
    pub onsite: Vec<f64>,
    pub n_electrons: usize,
    pub twist: f64,
}

impl HubbardSpec {
    /// One site per cell, uniform hopping.
    pub fn ring(n_cells: usize, t: f64, u: f64, n_electrons: usize) -> Self {
        HubbardSpec {
            n_cells,
            sites_per_cell: 1,
            t,
            t_inter: t,
            u,
            onsite: Vec::new(),
            n_electrons,
            twist: 0.0,
        }
    }

    /// Several sites per cell, uniform hopping.
    pub fn with_cell(
        n_cells: usize,
        sites_per_cell: usize,
        t: f64,
        u: f64,
        n_electrons: usize,
    ) -> Self {
        HubbardSpec {
            sites_per_cell,
            ..HubbardSpec::ring(n_cells, t, u, n_electrons)
        }
    }

    pub fn num_sites(&self) -> usize {
        self.n_cells * self.sites_per_cell
    }

    fn validate(&self) -> Result<()> {
        if self.n_cells == 0 || self.sites_per_cell == 0 {
            return Err(Error::InvalidInput(
                "Hubbard ring needs at least one site".into(),
            ));
        }
        if !self.onsite.is_empty() && self.onsite.len() != self.sites_per_cell {
            return Err(Error::InvalidInput(format!(
                "{} on-site energies given for {} sites per cell",
                self.onsite.len(),
                self.sites_per_cell
            )));
        }
        if self.n_electrons > 2 * self.num_sites() {
            return Err(Error::InvalidInput(format!(
                "{} electrons do not fit on {} sites",
                self.n_electrons,
                self.num_sites()
            )));
        }
        Ok(())
    }

    /// Crystal momentum of mesh point `n`, in radians per cell.
    pub fn momentum(&self, n: usize) -> f64 {
        2.0 * PI * (n as f64 + self.twist) / self.n_cells as f64
    }

    /// Bloch Hamiltonian `h(k)` in the site basis of one cell.
    pub fn bloch_matrix(&self, k: f64) -> CMatrix {
        let s = self.sites_per_cell;
        let mut h = CMatrix::zeros(s, s);
        for j in 0..s {
            h[(j, j)] += Complex64::new(self.onsite.get(j).copied().unwrap_or(0.0), 0.0);
        }
        for j in 0..s.saturating_sub(1) {
            h[(j, j + 1)] -= Complex64::new(self.t, 0.0);
            h[(j + 1, j)] -= Complex64::new(self.t, 0.0);
        }
        let bond = Complex64::from_polar(self.t_inter, k);
        h[(s - 1, 0)] -= bond;
        h[(0, s - 1)] -= bond.conj();
        h
    }

    /// One single-cell model per mesh point, twisted so its only momentum is
    /// that of the point; electrons are shared evenly between cells.
    pub fn single_k_cells(&self) -> Result<Vec<HubbardSpec>> {
        self.validate()?;
        if !self.n_electrons.is_multiple_of(self.n_cells) {
            return Err(Error::InvalidInput(format!(
                "{} electrons do not divide evenly over {} cells",
                self.n_electrons, self.n_cells
            )));
        }
        Ok((0..self.n_cells)
            .map(|n| HubbardSpec {
                n_cells: 1,
                n_electrons: self.n_electrons / self.n_cells,
                twist: (n as f64 + self.twist) / self.n_cells as f64,
                ..self.clone()
            })
            .collect())
    }

    /// Band energies and the site-to-band transform at mesh point `n`.
    /// Each eigenvector's first non-negligible component is real and positive.
    pub fn bands(&self, n: usize) -> (Vec<f64>, CMatrix) {
        let (vals, mut vecs) = eigh(&self.bloch_matrix(self.momentum(n)));
        for c in 0..vecs.ncols() {
            if let Some(r) = (0..vecs.nrows()).find(|&r| vecs[(r, c)].norm() > 1e-10) {
                let phase = vecs[(r, c)].conj() / vecs[(r, c)].norm();
                for rr in 0..vecs.nrows() {
                    vecs[(rr, c)] *= phase;
                }
            }
        }
        (vals, vecs)
    }
}

/// Integral table of the ring in the band basis with a 1D mesh of `n_cells` points.
pub fn hubbard_integrals(spec: &HubbardSpec) -> Result<IntegralTable> {
    spec.validate()?;
    let nk = spec.n_cells;
    let ns = spec.sites_per_cell;
    let mesh = KMesh::chain(nk)?;
    let mut table = IntegralTable::new(mesh, ns, spec.n_electrons, 0.0);
    let bands: Vec<(Vec<f64>, CMatrix)> = (0..nk).map(|n| spec.bands(n)).collect();
    for (k, (energies, _)) in bands.iter().enumerate() {
        for (b, &e) in energies.iter().enumerate() {
            let o = Orbital::new(k, b);
            table.one_body.insert([o, o], Complex64::new(e, 0.0));
        }
    }
    let scale = spec.u / nk as f64;
    for k1 in 0..nk {
        for k2 in 0..nk {
            for k3 in 0..nk {
                let k4 = (k1 + k2 + 2 * nk - k3) % nk;
                for b1 in 0..ns {
                    for b2 in 0..ns {
                        for b3 in 0..ns {
                            for b4 in 0..ns {
                                let v: Complex64 = (0..ns)
                                    .map(|j| {
                                        bands[k1].1[(j, b1)].conj()
                                            * bands[k2].1[(j, b2)].conj()
                                            * bands[k3].1[(j, b3)]
                                            * bands[k4].1[(j, b4)]
                                    })
                                    .sum::<Complex64>()
                                    * scale;
                                if v.norm() > 1e-14 {
                                    table.two_body.insert(
                                        [
                                            Orbital::new(k1, b1),
                                            Orbital::new(k2, b2),
                                            Orbital::new(k3, b3),
                                            Orbital::new(k4, b4),
                                        ],
                                        v,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    table.validate()?;
    Ok(table)
}
