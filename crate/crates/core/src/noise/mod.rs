//! Depolarizing-noise simulation, shot sampling and zero-noise extrapolation.

pub mod density;
pub mod eom;
pub mod estimate;
pub mod experiment;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::{DensityMatrix, MAX_DENSITY_QUBITS};
pub use eom::{pick_endpoint, regularize, solve_estimated, Endpoint, MeasurementPlan};
pub use estimate::{
    estimate_paulis, noisy_state, simulate_noisy_energy, zne_extrapolate, zne_extrapolate_all,
    NoisyEstimate,
};
pub use experiment::{
    run_noise_experiment, Ideal, Improvement, NoiseExperiment, NoiseReport, RepeatRecord,
    NOISY_S_TOL,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extrapolation {
    #[default]
    Linear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Depolarizing parameter per gate-touched qubit at scale 1.
    pub lambda: f64,
    /// Noise amplification factors, ascending from 1.
    pub scale_factors: Vec<f64>,
    /// Samples per Pauli string; 0 means exact traces.
    pub shots: u64,
    pub repeats: usize,
    pub extrapolation: Extrapolation,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            lambda: 0.001,
            scale_factors: vec![1.0, 1.25, 1.5],
            shots: 1 << 17,
            repeats: 16,
            extrapolation: Extrapolation::Linear,
        }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidNoise(format!(
                "lambda {} outside [0, 1]",
                self.lambda
            )));
        }
        let s = &self.scale_factors;
        if s.first() != Some(&1.0) {
            return Err(Error::InvalidNoise(
                "scale factors must start at 1.0".into(),
            ));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidNoise(
                "scale factors must be strictly ascending".into(),
            ));
        }
        if s.len() < 2 {
            return Err(Error::DegenerateScales);
        }
        if let Some(&top) = s.last() {
            if self.lambda * top > 1.0 {
                return Err(Error::InvalidNoise(format!(
                    "scaled lambda {} exceeds 1",
                    self.lambda * top
                )));
            }
        }
        if self.repeats == 0 {
            return Err(Error::InvalidNoise(
                "at least one repeat is required".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_is_valid_and_bad_ones_are_not() {
        NoiseSpec::default().validate().unwrap();
        let bad = [
            NoiseSpec {
                lambda: -0.1,
                ..NoiseSpec::default()
            },
            NoiseSpec {
                scale_factors: vec![1.25, 1.0],
                ..NoiseSpec::default()
            },
            NoiseSpec {
                scale_factors: vec![1.0],
                ..NoiseSpec::default()
            },
            NoiseSpec {
                lambda: 0.9,
                ..NoiseSpec::default()
            },
        ];
        for s in bad {
            assert!(s.validate().is_err(), "{s:?}");
        }
    }
}
