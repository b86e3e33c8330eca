//! Second-quantized Hamiltonian assembly and its symmetry operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::integrals::{IntegralTable, Spin};
use crate::ops::{jordan_wigner, FermionOperator, FermionTerm, Ladder, PauliString, QubitOperator};

/// Fermionic Hamiltonian with spin expanded from the spatial integrals.
pub fn fermion_hamiltonian(table: &IntegralTable) -> FermionOperator {
    let mut terms = Vec::new();
    if table.constant != 0.0 {
        terms.push(FermionTerm::new(
            Complex64::new(table.constant, 0.0),
            Vec::new(),
        ));
    }
    for (&[p, q], &h) in &table.one_body {
        for spin in Spin::BOTH {
            terms.push(FermionTerm::new(
                h,
                vec![
                    Ladder::create(table.mode(p, spin)),
                    Ladder::annihilate(table.mode(q, spin)),
                ],
            ));
        }
    }
    for (&[p, q, r, s], &g) in &table.two_body {
        for s1 in Spin::BOTH {
            for s2 in Spin::BOTH {
                let (mp, mq) = (table.mode(p, s1), table.mode(q, s2));
                let (mr, ms) = (table.mode(r, s2), table.mode(s, s1));
                if mp == mq || mr == ms {
                    continue;
                }
                terms.push(FermionTerm::new(
                    g * 0.5,
                    vec![
                        Ladder::create(mp),
                        Ladder::create(mq),
                        Ladder::annihilate(mr),
                        Ladder::annihilate(ms),
                    ],
                ));
            }
        }
    }
    FermionOperator::from_terms(terms)
}

/// Qubit Hamiltonian on `table.num_modes()` qubits.
pub fn build_hamiltonian(table: &IntegralTable) -> Result<QubitOperator> {
    table.validate()?;
    jordan_wigner(&fermion_hamiltonian(table), table.num_modes())
}

pub fn number_operator(num_modes: usize) -> QubitOperator {
    let op = (0..num_modes).fold(FermionOperator::zero(), |acc, m| {
        &acc + &FermionOperator::number(m)
    });
    jordan_wigner(&op, num_modes).expect("modes in range")
}

/// `S_z = ½ Σ (n_α − n_β)` with alpha on even modes.
pub fn sz_operator(num_modes: usize) -> QubitOperator {
    let op = (0..num_modes).fold(FermionOperator::zero(), |acc, m| {
        let sign = if m % 2 == 0 { 0.5 } else { -0.5 };
        &acc + &FermionOperator::number(m).scale(Complex64::new(sign, 0.0))
    });
    jordan_wigner(&op, num_modes).expect("modes in range")
}

/// Phase angle per mode of the lattice translation along `axis`:
/// `T = Π_m exp(i φ_m n_m)` with `φ_m = 2π k_axis(m) / N_axis`.
pub fn translation_phases(table: &IntegralTable, axis: usize) -> Vec<f64> {
    let dims = table.mesh.dims();
    (0..table.num_modes())
        .map(|m| {
            let k = table.mesh.from_linear(table.spin_orbital(m).orbital.k);
            2.0 * PI * k.0[axis] as f64 / dims[axis] as f64
        })
        .collect()
}

/// Conjugates `op` by the diagonal unitary `Π_m exp(i φ_m n_m)`.
///
/// Per qubit, `X -> cos φ X + sin φ Y` and `Y -> cos φ Y − sin φ X`; Z and I
/// are untouched. The result is exact up to rounding in the trigonometric
/// factors.
pub fn conjugate_by_phases(op: &QubitOperator, phases: &[f64]) -> QubitOperator {
    assert_eq!(phases.len(), op.num_qubits(), "one phase per qubit");
    let mut out = Vec::new();
    for term in op.terms() {
        let mut acc = vec![(term.coefficient, PauliString::IDENTITY)];
        for q in 0..op.num_qubits() {
            let bit = 1u64 << q;
            let x = term.string.x_mask() & bit != 0;
            let z = term.string.z_mask() & bit != 0;
            let (cos, sin) = (phases[q].cos(), phases[q].sin());
            let images: Vec<(f64, u64, u64)> = match (x, z) {
                (false, false) => vec![(1.0, 0, 0)],
                (false, true) => vec![(1.0, 0, bit)],
                // X
                (true, false) => vec![(cos, bit, 0), (sin, bit, bit)],
                // Y
                (true, true) => vec![(cos, bit, bit), (-sin, bit, 0)],
            };
            acc = acc
                .into_iter()
                .flat_map(|(c, s)| {
                    images.iter().map(move |&(w, xb, zb)| {
                        (
                            c * w,
                            PauliString::from_masks(s.x_mask() | xb, s.z_mask() | zb),
                        )
                    })
                })
                .filter(|(c, _)| *c != Complex64::new(0.0, 0.0))
                .collect();
        }
        out.extend(acc.into_iter().map(|(c, s)| (s, c)));
    }
    QubitOperator::from_terms(op.num_qubits(), out)
}

/// Largest coefficient of `T H T† − H` over the three lattice translations.
pub fn translation_deviation(h: &QubitOperator, table: &IntegralTable) -> f64 {
    (0..3)
        .map(|axis| {
            let phases = translation_phases(table, axis);
            let moved = conjugate_by_phases(h, &phases);
            (&moved - h).simplify_with(0.0).max_abs_coefficient()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hubbard::{hubbard_integrals, HubbardSpec};
    use crate::lattice::integrals::Orbital;
    use crate::lattice::kmesh::KMesh;
    use crate::ops::Pauli;

    #[test]
    fn noninteracting_is_diagonal() {
        let mut t = IntegralTable::new(KMesh::chain(2).unwrap(), 1, 2, 0.25);
        t.one_body.insert(
            [Orbital::new(0, 0), Orbital::new(0, 0)],
            Complex64::new(-1.0, 0.0),
        );
        t.one_body.insert(
            [Orbital::new(1, 0), Orbital::new(1, 0)],
            Complex64::new(0.5, 0.0),
        );
        let h = build_hamiltonian(&t).unwrap();
        assert!(h.terms().iter().all(|term| term.string.x_mask() == 0));
        assert!(h.is_hermitian(1e-14));
    }

    #[test]
    fn conjugation_rotates_x_into_y() {
        let x = QubitOperator::from_terms(
            1,
            [(PauliString::single(0, Pauli::X), Complex64::new(1.0, 0.0))],
        );
        let r = conjugate_by_phases(&x, &[PI / 2.0]);
        assert!(
            (r.coefficient(&PauliString::single(0, Pauli::Y)) - Complex64::new(1.0, 0.0)).norm()
                < 1e-15
        );
        assert!(r.coefficient(&PauliString::single(0, Pauli::X)).norm() < 1e-15);
    }

    #[test]
    fn hubbard_ring_symmetries() {
        for nk in [2, 3, 4] {
            let t = hubbard_integrals(&HubbardSpec::ring(nk, 1.0, 3.0, 2)).unwrap();
            let h = build_hamiltonian(&t).unwrap();
            let n = number_operator(t.num_modes());
            let sz = sz_operator(t.num_modes());
            assert!(h.commutator(&n).unwrap().is_zero(1e-12));
            assert!(h.commutator(&sz).unwrap().is_zero(1e-12));
            assert!(translation_deviation(&h, &t) < 1e-12);
        }
    }

    #[test]
    fn momentum_violation_is_detected_by_translation() {
        let mut t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 0.0, 2)).unwrap();
        let (a, b) = (Orbital::new(0, 0), Orbital::new(1, 0));
        t.one_body.insert([a, b], Complex64::new(0.1, 0.0));
        t.one_body.insert([b, a], Complex64::new(0.1, 0.0));
        let h = jordan_wigner(&fermion_hamiltonian(&t), t.num_modes()).unwrap();
        assert!(translation_deviation(&h, &t) > 1e-2);
    }
}
