//! Equation-of-motion ionization and attachment energies in subspace form.

pub mod basis;
pub mod functional;
pub mod qse;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntegralTable, KPoint};
use crate::ops::QubitOperator;
use crate::sim::Statevector;

pub use basis::{
    build_basis, BasisOperator, Block, ExcitationBasis, IndexSpace, Sector, SpinChannel,
};
pub use functional::{verify_functional_equivalence, FunctionalReport};
pub use qse::{
    build_np_problem, build_qse_problem, quasiparticle_weight, solve_qse, Formulation, QseProblem,
    QseSolution, ASYMMETRY_TOL, DEFAULT_S_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EomConfig {
    pub channel: SpinChannel,
    pub space: IndexSpace,
    pub s_tol: f64,
    pub formulation: Formulation,
}

impl Default for EomConfig {
    fn default() -> Self {
        EomConfig {
            channel: SpinChannel::Alpha,
            space: IndexSpace::General,
            s_tol: DEFAULT_S_TOL,
            formulation: Formulation::Projected,
        }
    }
}

/// Basis, matrices and spectrum for one sector at one k-point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EomSpectrum {
    pub problem: QseProblem,
    pub solution: QseSolution,
}

impl EomSpectrum {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))
    }
}

/// Builds the basis and solves one sector on top of `ground`.
pub fn eom_spectrum(
    table: &IntegralTable,
    ground: &Statevector,
    h: &QubitOperator,
    sector: Sector,
    k_target: KPoint,
    cfg: &EomConfig,
) -> Result<EomSpectrum> {
    let basis = build_basis(table, sector, k_target, cfg.channel, cfg.space)?;
    let problem = match cfg.formulation {
        Formulation::Projected => build_qse_problem(ground, h, &basis)?,
        Formulation::Unprojected => build_np_problem(ground, h, &basis)?,
    };
    let solution = solve_qse(&problem, cfg.s_tol)?;
    Ok(EomSpectrum { problem, solution })
}
