//! Shot-sampled Pauli expectation values, noisy ansatz replay and linear extrapolation.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::adapt::{AdaptAnsatz, OperatorPool};
use crate::error::{Error, Result};
use crate::noise::density::DensityMatrix;
use crate::noise::NoiseSpec;
use crate::ops::{PauliString, QubitOperator};
use crate::sim::Statevector;

/// Replays the ansatz on a density matrix, following every Pauli rotation
/// with depolarizing noise of strength `lambda` on each qubit it touches.
pub fn noisy_state(
    ansatz: &AdaptAnsatz,
    pool: &OperatorPool,
    reference: &Statevector,
    lambda: f64,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidNoise(format!(
            "effective depolarizing parameter {lambda} outside [0, 1]"
        )));
    }
    let mut rho = DensityMatrix::from_statevector(reference)?;
    for (g, theta) in ansatz.generators(pool)?.into_iter().zip(ansatz.angles()) {
        for (b, p) in g.rotations() {
            rho.apply_pauli_rotation(p, theta * b);
            let support = p.support();
            for q in (0..rho.num_qubits()).filter(|q| support >> q & 1 == 1) {
                rho.depolarize(q, lambda)?;
            }
        }
    }
    Ok(rho)
}

/// Estimates `Tr(ρP)` for each string from `shots` ±1 outcomes, or exactly
/// when `shots == 0`. The identity string is always exactly 1.
pub fn estimate_paulis<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    strings: &[PauliString],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    strings
        .iter()
        .map(|p| {
            if p.is_identity() {
                return Ok(1.0);
            }
            let m = rho.pauli_expectation(p).clamp(-1.0, 1.0);
            if shots == 0 {
                return Ok(m);
            }
            let dist = Binomial::new(shots, 0.5 * (1.0 + m))
                .map_err(|e| Error::InvalidNoise(format!("binomial sampler: {e}")))?;
            let up = dist.sample(rng);
            Ok(2.0 * up as f64 / shots as f64 - 1.0)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyEstimate {
    pub mean: f64,
    /// Shot-noise standard error; zero for exact traces.
    pub stderr: f64,
}

/// `Σ c_P m_P` and its shot-noise standard error from sampled expectations.
pub fn combine(
    op: &QubitOperator,
    strings: &[PauliString],
    values: &[f64],
    shots: u64,
) -> NoisyEstimate {
    let mut mean = 0.0;
    let mut var = 0.0;
    for t in op.terms() {
        let i = strings
            .binary_search(&t.string)
            .expect("string was planned");
        mean += t.coefficient.re * values[i];
        if shots > 0 && !t.string.is_identity() {
            var += t.coefficient.norm_sqr() * (1.0 - values[i] * values[i]).max(0.0) / shots as f64;
        }
    }
    NoisyEstimate {
        mean,
        stderr: var.sqrt(),
    }
}

/// Energy of the noisy ansatz at one noise scale.
pub fn simulate_noisy_energy<R: Rng + ?Sized>(
    ansatz: &AdaptAnsatz,
    pool: &OperatorPool,
    reference: &Statevector,
    h: &QubitOperator,
    noise: &NoiseSpec,
    scale: f64,
    rng: &mut R,
) -> Result<NoisyEstimate> {
    let rho = noisy_state(ansatz, pool, reference, noise.lambda * scale)?;
    if h.num_qubits() != rho.num_qubits() {
        return Err(Error::RegisterMismatch {
            expected: rho.num_qubits(),
            found: h.num_qubits(),
        });
    }
    let strings: Vec<PauliString> = h.terms().iter().map(|t| t.string).collect();
    let mut sorted = strings.clone();
    sorted.sort_unstable();
    let values = estimate_paulis(&rho, &sorted, noise.shots, rng)?;
    Ok(combine(h, &sorted, &values, noise.shots))
}

/// Intercept at zero scale of the least-squares line through `points`.
pub fn zne_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::DegenerateScales);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) {
        return Err(Error::DegenerateScales);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(my - sxy / sxx * mx)
}

/// Elementwise extrapolation of equally shaped value vectors measured at `scales`.
pub fn zne_extrapolate_all(scales: &[f64], series: &[Vec<f64>]) -> Result<Vec<f64>> {
    let len = series.first().map_or(0, Vec::len);
    (0..len)
        .map(|i| {
            let pts: Vec<(f64, f64)> = scales.iter().zip(series).map(|(&s, v)| (s, v[i])).collect();
            zne_extrapolate(&pts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{solve_ground_state, GroundStateConfig};
    use crate::lattice::{hubbard_integrals, HubbardSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_linear_data() {
        let e = -1.25;
        let d = 0.02;
        let pts = [(1.0, e + d), (1.25, e + 1.25 * d), (1.5, e + 1.5 * d)];
        assert!((zne_extrapolate(&pts).unwrap() - e).abs() < 1e-14);
        assert!((zne_extrapolate(&[(1.0, e), (1.5, e)]).unwrap() - e).abs() < 1e-15);
    }

    #[test]
    fn identical_scales_rejected() {
        assert!(matches!(
            zne_extrapolate(&[(1.0, 0.1), (1.0, 0.2)]),
            Err(Error::DegenerateScales)
        ));
        assert!(matches!(
            zne_extrapolate(&[(1.0, 0.1)]),
            Err(Error::DegenerateScales)
        ));
    }

    #[test]
    fn limits_of_the_channel() {
        let t = hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap();
        let gs = solve_ground_state(&t, &GroundStateConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let exact = NoiseSpec {
            lambda: 0.0,
            shots: 0,
            ..NoiseSpec::default()
        };
        let e = simulate_noisy_energy(
            &gs.result.ansatz,
            &gs.pool,
            &gs.reference,
            &gs.hamiltonian,
            &exact,
            1.0,
            &mut rng,
        )
        .unwrap();
        assert!((e.mean - gs.result.energy).abs() < 1e-10 && e.stderr == 0.0);
        // full depolarization after every gate leaves the maximally mixed state
        let full = NoiseSpec {
            lambda: 1.0,
            shots: 0,
            ..NoiseSpec::default()
        };
        let e = simulate_noisy_energy(
            &gs.result.ansatz,
            &gs.pool,
            &gs.reference,
            &gs.hamiltonian,
            &full,
            1.0,
            &mut rng,
        )
        .unwrap();
        // the pair excitation touches every qubit, so the state ends maximally mixed
        assert!((e.mean - gs.hamiltonian.constant().re).abs() < 1e-12);
        let over = NoiseSpec {
            lambda: 0.8,
            ..NoiseSpec::default()
        };
        assert!(simulate_noisy_energy(
            &gs.result.ansatz,
            &gs.pool,
            &gs.reference,
            &gs.hamiltonian,
            &over,
            1.5,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn sampling_is_unbiased_within_stderr() {
        let t = hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap();
        let gs = solve_ground_state(&t, &GroundStateConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = NoiseSpec {
            lambda: 0.0,
            shots: 1 << 12,
            ..NoiseSpec::default()
        };
        let e = simulate_noisy_energy(
            &gs.result.ansatz,
            &gs.pool,
            &gs.reference,
            &gs.hamiltonian,
            &spec,
            1.0,
            &mut rng,
        )
        .unwrap();
        assert!(e.stderr > 0.0);
        assert!((e.mean - gs.result.energy).abs() < 5.0 * e.stderr);
    }
}
