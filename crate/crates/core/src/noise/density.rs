//! Dense density matrices with Pauli rotations and single-qubit depolarizing noise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix};
use crate::ops::{PauliString, QubitOperator};
use crate::sim::Statevector;

pub const MAX_DENSITY_QUBITS: usize = 12;

/// Row-major `2^n x 2^n` density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: Vec<Complex64>,
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::ResourceLimit {
            what: "density-matrix qubits",
            requested: n,
            limit: MAX_DENSITY_QUBITS,
        });
    }
    Ok(())
}

impl DensityMatrix {
    /// `|ψ><ψ|` of the normalized state.
    pub fn from_statevector(state: &Statevector) -> Result<Self> {
        guard(state.num_qubits())?;
        let mut psi = state.clone();
        psi.normalize();
        let a = psi.amplitudes();
        let dim = a.len();
        let mut data = vec![Complex64::default(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = a[r] * a[c].conj();
            }
        }
        Ok(DensityMatrix {
            num_qubits: state.num_qubits(),
            data,
        })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        guard(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut data = vec![Complex64::default(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { num_qubits, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |r, c| self.get(r, c))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        crate::linalg::hermiticity_deviation(&self.to_matrix())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.to_matrix()).0.first().copied().unwrap_or(0.0)
    }

    /// `ρ → U ρ U†` with `U = exp(i·angle·P) = cos + i sin P`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, angle: f64) {
        if p.is_identity() {
            return;
        }
        let d = self.dim();
        let (s, c) = angle.sin_cos();
        // P|b> = ph(b)|b^x>
        let moves: Vec<(Complex64, usize)> = (0..d).map(|b| p.apply_to_basis(b)).collect();
        let i = Complex64::new(0.0, 1.0);
        let old = &self.data;
        let mut out = vec![Complex64::default(); d * d];
        for a in 0..d {
            let ax = moves[a].1;
            let pha = moves[ax].0;
            for b in 0..d {
                let (phb, bx) = moves[b];
                let rho = old[a * d + b];
                let p_rho = pha * old[ax * d + b];
                let rho_p = old[a * d + bx] * phb;
                let p_rho_p = pha * old[ax * d + bx] * phb;
                out[a * d + b] = c * c * rho + i * s * c * (p_rho - rho_p) + s * s * p_rho_p;
            }
        }
        self.data = out;
    }

    /// `ρ → (1−λ)ρ + λ (I/2 ⊗ Tr_q ρ)` on qubit `q`.
    pub fn depolarize(&mut self, q: usize, lambda: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidNoise(format!(
                "depolarizing parameter {lambda} outside [0, 1]"
            )));
        }
        if q >= self.num_qubits {
            return Err(Error::ModeOutOfRange {
                mode: q,
                num_modes: self.num_qubits,
            });
        }
        if lambda == 0.0 {
            return Ok(());
        }
        let d = self.dim();
        let m = 1usize << q;
        let old = self.data.clone();
        for a in 0..d {
            for b in 0..d {
                let mixed = if (a ^ b) & m == 0 {
                    let (a0, b0) = (a & !m, b & !m);
                    0.5 * (old[a0 * d + b0] + old[(a0 | m) * d + (b0 | m)])
                } else {
                    Complex64::default()
                };
                self.data[a * d + b] = (1.0 - lambda) * old[a * d + b] + lambda * mixed;
            }
        }
        Ok(())
    }

    /// `Tr(ρP)`, real for Hermitian ρ.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|b| {
                let (ph, bx) = p.apply_to_basis(b);
                self.data[b * d + bx] * ph
            })
            .sum::<Complex64>()
            .re
    }

    pub fn expectation(&self, op: &QubitOperator) -> Result<Complex64> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: self.num_qubits,
                found: op.num_qubits(),
            });
        }
        let d = self.dim();
        Ok(op
            .terms()
            .iter()
            .map(|t| {
                let tr: Complex64 = (0..d)
                    .map(|b| {
                        let (ph, bx) = t.string.apply_to_basis(b);
                        self.data[b * d + bx] * ph
                    })
                    .sum();
                t.coefficient * tr
            })
            .sum())
    }
}
