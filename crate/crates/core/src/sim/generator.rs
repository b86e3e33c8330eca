//! Anti-Hermitian generators whose qubit images are sums of commuting strings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{jordan_wigner, FermionOperator, PauliString, QubitOperator};
use crate::sim::statevector::Statevector;

/// Anti-Hermiticity tolerance on the qubit image.
pub const ANTI_HERMITIAN_TOL: f64 = 1e-12;

/// `τ = Σ_j i b_j P_j` with mutually commuting `P_j`, so that
/// `exp(θτ) = Π_j exp(i θ b_j P_j)` holds exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    qubit: QubitOperator,
    rotations: Vec<(f64, PauliString)>,
}

impl Generator {
    pub fn from_fermion(tau: &FermionOperator, num_modes: usize) -> Result<Self> {
        Generator::from_qubit(jordan_wigner(tau, num_modes)?)
    }

    pub fn from_qubit(qubit: QubitOperator) -> Result<Self> {
        let real = qubit
            .terms()
            .iter()
            .map(|t| t.coefficient.re.abs())
            .fold(0.0, f64::max);
        if real > ANTI_HERMITIAN_TOL {
            return Err(Error::NotAntiHermitian(real));
        }
        let rotations: Vec<(f64, PauliString)> = qubit
            .terms()
            .iter()
            .filter(|t| !t.string.is_identity())
            .map(|t| (t.coefficient.im, t.string))
            .collect();
        for (i, (_, a)) in rotations.iter().enumerate() {
            if rotations[i + 1..].iter().any(|(_, b)| !a.commutes_with(b)) {
                return Err(Error::NonCommutingGenerator);
            }
        }
        Ok(Generator { qubit, rotations })
    }

    pub fn qubit_operator(&self) -> &QubitOperator {
        &self.qubit
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit.num_qubits()
    }

    /// The Pauli rotations `(b_j, P_j)` making up the exponential.
    pub fn rotations(&self) -> &[(f64, PauliString)] {
        &self.rotations
    }

    /// In-place `exp(θτ)|ψ>`.
    pub fn apply_exp(&self, state: &mut Statevector, theta: f64) -> Result<()> {
        if state.num_qubits() != self.num_qubits() {
            return Err(Error::RegisterMismatch {
                expected: state.num_qubits(),
                found: self.num_qubits(),
            });
        }
        // an identity component would only add a global phase, and is
        // absent for anti-Hermitian input with zero real part
        let global = self.qubit.constant();
        if global.norm() > 0.0 {
            state.scale((global * theta).exp());
        }
        for (b, p) in &self.rotations {
            state.apply_pauli_rotation(p, theta * b);
        }
        Ok(())
    }

    /// `τ|ψ>`.
    pub fn apply(&self, state: &Statevector) -> Result<Statevector> {
        state.apply_operator(&self.qubit)
    }
}

/// `exp(θτ)|ψ>` for a fermionic generator.
pub fn apply_pool_exponential(
    state: &Statevector,
    tau: &FermionOperator,
    theta: f64,
) -> Result<Statevector> {
    let g = Generator::from_fermion(tau, state.num_qubits())?;
    let mut out = state.clone();
    g.apply_exp(&mut out, theta)?;
    Ok(out)
}

/// `τ − τ†` built from a single product of ladder operators.
pub fn anti_hermitian_part(t: &FermionOperator) -> FermionOperator {
    (t - &t.adjoint()).simplify()
}

/// `i(τ + τ†)` for the same product.
pub fn complementary_part(t: &FermionOperator) -> FermionOperator {
    (t + &t.adjoint())
        .scale(Complex64::new(0.0, 1.0))
        .simplify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{Ladder, Pauli};
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn single(p: usize, q: usize) -> FermionOperator {
        FermionOperator::term(one(), vec![Ladder::create(p), Ladder::annihilate(q)])
    }

    fn double(p: usize, q: usize, r: usize, s: usize) -> FermionOperator {
        FermionOperator::term(
            one(),
            vec![
                Ladder::create(p),
                Ladder::create(q),
                Ladder::annihilate(r),
                Ladder::annihilate(s),
            ],
        )
    }

    fn dense(op: &QubitOperator) -> DMatrix<Complex64> {
        let rows = op.to_dense().unwrap();
        let n = rows.len();
        DMatrix::from_fn(n, n, |r, c| rows[r][c])
    }

    /// Matrix exponential by scaling and squaring of a truncated Taylor series.
    fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = m.nrows();
        let s = 10;
        let a = m.scale(1.0 / f64::from(1 << s));
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn zero_angle_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = Statevector::random(4, &mut rng).unwrap();
        let tau = anti_hermitian_part(&double(3, 2, 1, 0));
        assert_eq!(apply_pool_exponential(&s, &tau, 0.0).unwrap(), s);
    }

    #[test]
    fn single_excitation_rotates_occupation() {
        let tau = anti_hermitian_part(&single(1, 0));
        let s = Statevector::basis_state(2, 0b01).unwrap();
        let theta: f64 = 0.3;
        let out = apply_pool_exponential(&s, &tau, theta).unwrap();
        assert!((out.amplitudes()[0b01] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[0b10] - Complex64::new(theta.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_dense_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = Statevector::random(4, &mut rng).unwrap();
        for t in [single(2, 0), double(3, 1, 2, 0), double(3, 2, 1, 0)] {
            for tau in [anti_hermitian_part(&t), complementary_part(&t)] {
                let theta = 0.61;
                let got = apply_pool_exponential(&s, &tau, theta).unwrap();
                let u = expm(&dense(&jordan_wigner(&tau, 4).unwrap()).scale(theta));
                let want = &u * nalgebra::DVector::from_column_slice(s.amplitudes());
                for (a, b) in got.amplitudes().iter().zip(want.iter()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        let hermitian = &single(1, 0) + &single(0, 1);
        assert!(matches!(
            Generator::from_fermion(&hermitian, 2),
            Err(Error::NotAntiHermitian(_))
        ));
        let i = Complex64::new(0.0, 1.0);
        let x0 = PauliString::single(0, Pauli::X);
        let z0 = PauliString::single(0, Pauli::Z);
        let op = QubitOperator::from_terms(1, [(x0, i), (z0, i)]);
        assert!(matches!(
            Generator::from_qubit(op),
            Err(Error::NonCommutingGenerator)
        ));
    }

    proptest! {
        #[test]
        fn exponentials_preserve_norm(seed in 0u64..500, theta in -4.0f64..4.0, which in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = Statevector::random(4, &mut rng).unwrap();
            let t = [single(2, 0), single(3, 1), double(3, 2, 1, 0), double(2, 1, 3, 0)][which].clone();
            for tau in [anti_hermitian_part(&t), complementary_part(&t)] {
                let out = apply_pool_exponential(&s, &tau, theta).unwrap();
                prop_assert!((out.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}
