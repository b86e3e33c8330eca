//! Energies and exact parameter gradients of product ansätze.

use num_complex::Complex64;

use crate::error::Result;
use crate::ops::QubitOperator;
use crate::sim::generator::Generator;
use crate::sim::statevector::Statevector;

/// `Π_l exp(θ_l τ_l)|ref>`, applied first to last.
pub fn prepare_state(
    generators: &[&Generator],
    angles: &[f64],
    reference: &Statevector,
) -> Result<Statevector> {
    assert_eq!(generators.len(), angles.len(), "one angle per generator");
    let mut psi = reference.clone();
    for (g, &theta) in generators.iter().zip(angles) {
        g.apply_exp(&mut psi, theta)?;
    }
    Ok(psi)
}

/// Energy and `∂E/∂θ_l` by one forward and one reverse sweep.
pub fn energy_and_gradient(
    generators: &[&Generator],
    angles: &[f64],
    h: &QubitOperator,
    reference: &Statevector,
) -> Result<(f64, Vec<f64>)> {
    let mut psi = prepare_state(generators, angles, reference)?;
    let mut lambda = psi.apply_operator(h)?;
    let energy = psi.inner(&lambda)?.re;
    let mut grad = vec![0.0; angles.len()];
    for l in (0..angles.len()).rev() {
        let tau_psi = generators[l].apply(&psi)?;
        grad[l] = 2.0 * lambda.inner(&tau_psi)?.re;
        generators[l].apply_exp(&mut psi, -angles[l])?;
        generators[l].apply_exp(&mut lambda, -angles[l])?;
    }
    Ok((energy, grad))
}

/// Gradient only.
pub fn energy_gradient(
    generators: &[&Generator],
    angles: &[f64],
    h: &QubitOperator,
    reference: &Statevector,
) -> Result<Vec<f64>> {
    energy_and_gradient(generators, angles, h, reference).map(|(_, g)| g)
}

/// `<ψ|[H, τ]|ψ> = 2 Re <Hψ|τψ>` given a precomputed `Hψ`.
pub fn commutator_expectation(
    h_psi: &Statevector,
    generator: &Generator,
    psi: &Statevector,
) -> Result<Complex64> {
    let tau_psi = generator.apply(psi)?;
    let a = h_psi.inner(&tau_psi)?;
    // <ψ|Hτ|ψ> − <ψ|τH|ψ> = a + conj(a) for anti-Hermitian τ
    Ok(a + a.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, hubbard_integrals, HubbardSpec};
    use crate::ops::{FermionOperator, Ladder};
    use crate::sim::generator::{anti_hermitian_part, complementary_part};
    use crate::sim::reference::prepare_hartree_fock;
    use proptest::prelude::*;

    fn generators() -> Vec<Generator> {
        let one = Complex64::new(1.0, 0.0);
        let t1 = FermionOperator::term(one, vec![Ladder::create(2), Ladder::annihilate(0)]);
        let t2 = FermionOperator::term(
            one,
            vec![
                Ladder::create(3),
                Ladder::create(2),
                Ladder::annihilate(1),
                Ladder::annihilate(0),
            ],
        );
        let t3 = FermionOperator::term(one, vec![Ladder::create(3), Ladder::annihilate(1)]);
        [
            anti_hermitian_part(&t1),
            complementary_part(&t2),
            anti_hermitian_part(&t2),
            complementary_part(&t3),
        ]
        .iter()
        .map(|tau| Generator::from_fermion(tau, 4).unwrap())
        .collect()
    }

    fn system() -> (QubitOperator, Statevector) {
        let mut spec = HubbardSpec::with_cell(1, 2, 1.0, 3.0, 2);
        spec.onsite = vec![0.3, -0.3];
        let t = hubbard_integrals(&spec).unwrap();
        let t = t.with_orbital_phases(&[0.2, 1.1]).unwrap();
        (
            build_hamiltonian(&t).unwrap(),
            prepare_hartree_fock(&t).unwrap(),
        )
    }

    #[test]
    fn single_parameter_gradient_at_zero_is_commutator() {
        let (h, hf) = system();
        let gens = generators();
        for g in &gens {
            let grad = energy_gradient(&[g], &[0.0], &h, &hf).unwrap();
            let comm = h.commutator(g.qubit_operator()).unwrap();
            let want = hf.expectation_value(&comm).unwrap();
            assert!(want.im.abs() < 1e-12);
            assert!((grad[0] - want.re).abs() < 1e-12);
            let fast = commutator_expectation(&hf.apply_operator(&h).unwrap(), g, &hf).unwrap();
            assert!((fast - want).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn gradient_matches_finite_differences(angles in proptest::collection::vec(-1.5f64..1.5, 4)) {
            let (h, hf) = system();
            let gens = generators();
            let refs: Vec<&Generator> = gens.iter().collect();
            let (_, grad) = energy_and_gradient(&refs, &angles, &h, &hf).unwrap();
            let step = 1e-5;
            for l in 0..angles.len() {
                let mut plus = angles.clone();
                plus[l] += step;
                let mut minus = angles.clone();
                minus[l] -= step;
                let ep = energy_and_gradient(&refs, &plus, &h, &hf).unwrap().0;
                let em = energy_and_gradient(&refs, &minus, &h, &hf).unwrap().0;
                prop_assert!((grad[l] - (ep - em) / (2.0 * step)).abs() < 1e-7);
            }
        }
    }
}
