//! Dense pure-state simulation. Bit `m` of a basis index is the occupation of mode `m`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{PauliString, QubitOperator};

/// Largest register a dense statevector will allocate.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

const PARALLEL_MIN_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_STATEVECTOR_QUBITS {
        return Err(Error::ResourceLimit {
            what: "statevector qubits",
            requested: num_qubits,
            limit: MAX_STATEVECTOR_QUBITS,
        });
    }
    Ok(())
}

impl Statevector {
    /// The computational basis state `|index>`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} outside {num_qubits}-qubit register"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn zeros(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        Ok(Statevector {
            num_qubits,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << num_qubits],
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_size(num_qubits)?;
        Ok(Statevector {
            num_qubits,
            amplitudes,
        })
    }

    /// Haar-ish random normalized state from Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_size(num_qubits)?;
        let amplitudes = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = Statevector {
            num_qubits,
            amplitudes,
        };
        s.normalize();
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm; a zero vector is left alone.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
        n
    }

    pub fn scale(&mut self, c: Complex64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= c);
    }

    fn check_register(&self, n: usize) -> Result<()> {
        if n != self.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: self.num_qubits,
                found: n,
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        self.check_register(other.num_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Complex64, other: &Statevector) -> Result<()> {
        self.check_register(other.num_qubits)?;
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += c * b;
        }
        Ok(())
    }

    /// `op|self>`, generally unnormalized.
    pub fn apply_operator(&self, op: &QubitOperator) -> Result<Statevector> {
        self.check_register(op.num_qubits())?;
        let terms: Vec<(Complex64, PauliString)> = op
            .terms()
            .iter()
            .map(|t| (t.coefficient, t.string))
            .collect();
        let psi = &self.amplitudes;
        // out[j] = Σ_t c_t <j|P_t|j^x_t> ψ[j^x_t]
        let gather = |j: usize| -> Complex64 {
            terms
                .iter()
                .map(|(c, s)| {
                    let src = j ^ s.x_mask() as usize;
                    let (phase, _) = s.apply_to_basis(src);
                    c * phase * psi[src]
                })
                .sum()
        };
        let amplitudes = if self.num_qubits >= PARALLEL_MIN_QUBITS {
            (0..self.dim()).into_par_iter().map(gather).collect()
        } else {
            (0..self.dim()).map(gather).collect()
        };
        Ok(Statevector {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    /// In-place `exp(i·angle·P)`.
    pub fn apply_pauli_rotation(&mut self, string: &PauliString, angle: f64) {
        let (cos, sin) = (angle.cos(), angle.sin());
        let isin = Complex64::new(0.0, sin);
        let x = string.x_mask() as usize;
        if x == 0 {
            for (b, a) in self.amplitudes.iter_mut().enumerate() {
                let (phase, _) = string.apply_to_basis(b);
                *a *= cos + isin * phase;
            }
            return;
        }
        // pair each b with b^x, visiting the member whose highest x bit is clear
        let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amplitudes.len() {
            if b & top != 0 {
                continue;
            }
            let partner = b ^ x;
            let (p_to_partner, _) = string.apply_to_basis(b);
            let (p_to_b, _) = string.apply_to_basis(partner);
            let ab = self.amplitudes[b];
            let ap = self.amplitudes[partner];
            self.amplitudes[b] = cos * ab + isin * p_to_b * ap;
            self.amplitudes[partner] = cos * ap + isin * p_to_partner * ab;
        }
    }

    /// `<self|op|self>`.
    pub fn expectation_value(&self, op: &QubitOperator) -> Result<Complex64> {
        expectation(self, op, self)
    }

    /// Expected occupation count of each mode.
    pub fn occupations(&self) -> Vec<f64> {
        let mut occ = vec![0.0; self.num_qubits];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (m, o) in occ.iter_mut().enumerate() {
                if b >> m & 1 == 1 {
                    *o += p;
                }
            }
        }
        occ
    }
}

/// `<bra|op|ket>`.
pub fn expectation(bra: &Statevector, op: &QubitOperator, ket: &Statevector) -> Result<Complex64> {
    bra.check_register(ket.num_qubits)?;
    bra.inner(&ket.apply_operator(op)?)
}

/// Free-function form of [`Statevector::apply_operator`].
pub fn apply_operator(state: &Statevector, op: &QubitOperator) -> Result<Statevector> {
    state.apply_operator(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{jordan_wigner, FermionOperator, Pauli};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_and_register_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = Statevector::random(3, &mut rng).unwrap();
        let id = QubitOperator::identity(3, one());
        assert_eq!(s.apply_operator(&id).unwrap(), s);
        assert!((s.expectation_value(&id).unwrap() - one()).norm() < 1e-14);
        let wrong = QubitOperator::identity(2, one());
        assert!(matches!(
            s.apply_operator(&wrong),
            Err(Error::RegisterMismatch { .. })
        ));
        assert!(Statevector::zeros(25).is_err());
    }

    #[test]
    fn annihilation_sign_from_parity_string() {
        // |0b011>: modes 0 and 1 occupied; a_1 picks up (-1) from mode 0
        let s = Statevector::basis_state(3, 0b011).unwrap();
        let a1 = jordan_wigner(&FermionOperator::annihilation(1), 3).unwrap();
        let out = s.apply_operator(&a1).unwrap();
        assert!((out.amplitudes()[0b001] + one()).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_matches_cos_sin_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = Statevector::random(3, &mut rng).unwrap();
        let p = PauliString::from_letters([(0, Pauli::Y), (2, Pauli::X)]).unwrap();
        let op = QubitOperator::from_terms(3, [(p, one())]);
        let ps = s.apply_operator(&op).unwrap();
        let theta: f64 = 0.37;
        let mut want = s.clone();
        want.scale(Complex64::new(theta.cos(), 0.0));
        want.axpy(Complex64::new(0.0, theta.sin()), &ps).unwrap();
        let mut got = s.clone();
        got.apply_pauli_rotation(&p, theta);
        for (a, b) in got.amplitudes().iter().zip(want.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn linearity(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = Statevector::random(3, &mut rng).unwrap();
            let x = QubitOperator::from_terms(3, [(PauliString::single(1, Pauli::X), one())]);
            let zy = QubitOperator::from_terms(
                3,
                [(PauliString::from_letters([(0, Pauli::Z), (2, Pauli::Y)]).unwrap(), Complex64::new(0.3, -0.2))],
            );
            let combo = &x.scale(Complex64::new(a, 0.0)) + &zy.scale(Complex64::new(b, 0.0));
            let lhs = s.apply_operator(&combo).unwrap();
            let mut rhs = s.apply_operator(&x).unwrap();
            rhs.scale(Complex64::new(a, 0.0));
            rhs.axpy(Complex64::new(b, 0.0), &s.apply_operator(&zy).unwrap()).unwrap();
            for (l, r) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
                prop_assert!((l - r).norm() < 1e-12);
            }
        }

        #[test]
        fn rotations_are_unitary(seed in 0u64..1000, x in 0u64..16, z in 0u64..16, theta in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = Statevector::random(4, &mut rng).unwrap();
            s.apply_pauli_rotation(&PauliString::from_masks(x, z), theta);
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }
}
