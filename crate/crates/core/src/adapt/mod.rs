//! Adaptive variational ground states with standard and complementary pools.

pub mod lbfgs;
pub mod pool;
pub mod solver;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{build_hamiltonian, IntegralTable};
use crate::ops::QubitOperator;
use crate::sim::{prepare_hartree_fock, Statevector};

pub use lbfgs::{minimize, LbfgsConfig, LbfgsReport};
pub use pool::{build_pool, pool_excitations, EntryKind, OperatorPool, PoolEntry, PoolKind};
pub use solver::{
    adapt_solve, adapt_solve_from, adapt_step, reoptimize, residual_gradients, select_operator,
    AdaptAnsatz, AdaptConfig, AdaptResult, AnsatzOperator, IterationRecord,
};

/// Pool choice plus loop settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateConfig {
    pub pool: PoolKind,
    /// Adds the complementary `i(T + T†)` entries.
    pub complemented: bool,
    pub adapt: AdaptConfig,
}

impl Default for GroundStateConfig {
    fn default() -> Self {
        GroundStateConfig {
            pool: PoolKind::Gsd,
            complemented: true,
            adapt: AdaptConfig::default(),
        }
    }
}

/// Everything produced by a ground-state run on one integral table.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub hamiltonian: QubitOperator,
    pub pool: OperatorPool,
    pub reference: Statevector,
    pub result: AdaptResult,
    pub state: Statevector,
}

/// Hamiltonian, pool, reference determinant and the adaptive solve in one call.
pub fn solve_ground_state(table: &IntegralTable, cfg: &GroundStateConfig) -> Result<GroundState> {
    let hamiltonian = build_hamiltonian(table)?;
    let pool = build_pool(table, cfg.pool, cfg.complemented)?;
    let reference = prepare_hartree_fock(table)?;
    let result = adapt_solve(&hamiltonian, &pool, &reference, &cfg.adapt)?;
    let state = result.ansatz.prepare(&pool, &reference)?;
    Ok(GroundState {
        hamiltonian,
        pool,
        reference,
        result,
        state,
    })
}
