//! The adaptive ansatz growth loop.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::lbfgs::{minimize, LbfgsConfig};
use crate::adapt::pool::OperatorPool;
use crate::error::{Error, Result};
use crate::ops::QubitOperator;
use crate::sim::generator::Generator;
use crate::sim::gradient::{energy_and_gradient, prepare_state};
use crate::sim::statevector::Statevector;

/// Slack allowed on the monotone-energy check between iterations.
pub const ENERGY_INCREASE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    /// Stop once the residual-gradient 2-norm drops below this (Hartree).
    pub epsilon: f64,
    pub max_iter: usize,
    pub optimizer: LbfgsConfig,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            epsilon: 1e-3,
            max_iter: 200,
            optimizer: LbfgsConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzOperator {
    pub pool_index: usize,
    pub label: String,
    pub angle: f64,
}

/// Ordered product `Π exp(θ_l τ_l)` applied to a reference state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdaptAnsatz {
    pub operators: Vec<AnsatzOperator>,
}

impl AdaptAnsatz {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.operators.iter().map(|o| o.angle).collect()
    }

    fn set_angles(&mut self, angles: &[f64]) {
        for (o, &a) in self.operators.iter_mut().zip(angles) {
            o.angle = a;
        }
    }

    pub fn generators<'a>(&self, pool: &'a OperatorPool) -> Result<Vec<&'a Generator>> {
        self.operators
            .iter()
            .map(|o| {
                pool.get(o.pool_index)
                    .filter(|e| e.label == o.label)
                    .map(|e| &e.generator)
                    .ok_or_else(|| {
                        Error::Checkpoint(format!(
                            "entry {} `{}` not in pool",
                            o.pool_index, o.label
                        ))
                    })
            })
            .collect()
    }

    /// Re-targets the ansatz to `pool` by label.
    pub fn rebind(&self, pool: &OperatorPool) -> Result<AdaptAnsatz> {
        let operators = self
            .operators
            .iter()
            .map(|o| {
                pool.position(&o.label)
                    .map(|pool_index| AnsatzOperator {
                        pool_index,
                        label: o.label.clone(),
                        angle: o.angle,
                    })
                    .ok_or_else(|| Error::Checkpoint(format!("label `{}` not in pool", o.label)))
            })
            .collect::<Result<_>>()?;
        Ok(AdaptAnsatz { operators })
    }

    pub fn prepare(&self, pool: &OperatorPool, reference: &Statevector) -> Result<Statevector> {
        prepare_state(&self.generators(pool)?, &self.angles(), reference)
    }

    pub fn energy_and_gradient(
        &self,
        pool: &OperatorPool,
        h: &QubitOperator,
        reference: &Statevector,
    ) -> Result<(f64, Vec<f64>)> {
        energy_and_gradient(&self.generators(pool)?, &self.angles(), h, reference)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Residual-gradient norm at the start of the iteration.
    pub gradient_norm: f64,
    pub max_gradient: f64,
    pub selected: Option<usize>,
    pub label: Option<String>,
    /// Energy after re-optimization (or of the current state if nothing was added).
    pub energy: f64,
    pub optimizer_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptResult {
    pub ansatz: AdaptAnsatz,
    pub energy: f64,
    pub reference_energy: f64,
    pub converged: bool,
    pub gradient_norm: f64,
    pub epsilon: f64,
    pub history: Vec<IterationRecord>,
}

impl AdaptResult {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let r: AdaptResult = serde_json::from_str(&text)?;
        Ok(r)
    }
}

/// `R_i = <ψ|[H, τ_i]|ψ>` for every pool entry, evaluated in parallel.
pub fn residual_gradients(
    state: &Statevector,
    h: &QubitOperator,
    pool: &OperatorPool,
) -> Result<Vec<f64>> {
    let h_psi = state.apply_operator(h)?;
    pool.entries()
        .par_iter()
        .map(|e| {
            let tau_psi = e.generator.apply(state)?;
            Ok(2.0 * h_psi.inner(&tau_psi)?.re)
        })
        .collect()
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Index of the largest |R_i|, lowest index on ties.
pub fn select_operator(gradients: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, g) in gradients.iter().enumerate() {
        let a = g.abs();
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

/// Jointly minimizes all angles starting from the current ones.
pub fn reoptimize(
    ansatz: &AdaptAnsatz,
    h: &QubitOperator,
    pool: &OperatorPool,
    reference: &Statevector,
    cfg: &LbfgsConfig,
) -> Result<(AdaptAnsatz, f64, usize)> {
    let generators = ansatz.generators(pool)?;
    let report = minimize(
        |x| energy_and_gradient(&generators, x, h, reference),
        ansatz.angles(),
        cfg,
    )?;
    if !report.converged {
        return Err(Error::Optimizer {
            iterations: report.iterations,
            message: format!(
                "angle optimization stopped with gradient norm {:.3e} after {} evaluations",
                report.grad_norm, report.evaluations
            ),
        });
    }
    let mut out = ansatz.clone();
    out.set_angles(&report.x);
    Ok((out, report.f, report.iterations))
}

/// One growth step: append the steepest pool entry at zero angle and
/// re-optimize every angle.
pub fn adapt_step(
    ansatz: &AdaptAnsatz,
    h: &QubitOperator,
    pool: &OperatorPool,
    reference: &Statevector,
    cfg: &AdaptConfig,
) -> Result<(AdaptAnsatz, IterationRecord)> {
    let state = ansatz.prepare(pool, reference)?;
    let before = state.expectation_value(h)?.re;
    let grads = residual_gradients(&state, h, pool)?;
    grow(ansatz, &grads, before, h, pool, reference, cfg, 0)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    ansatz: &AdaptAnsatz,
    grads: &[f64],
    before: f64,
    h: &QubitOperator,
    pool: &OperatorPool,
    reference: &Statevector,
    cfg: &AdaptConfig,
    iteration: usize,
) -> Result<(AdaptAnsatz, IterationRecord)> {
    let pick =
        select_operator(grads).ok_or(Error::InvalidInput("operator pool is empty".into()))?;
    let mut next = ansatz.clone();
    next.operators.push(AnsatzOperator {
        pool_index: pick,
        label: pool.entries()[pick].label.clone(),
        angle: 0.0,
    });
    let (next, energy, iters) = reoptimize(&next, h, pool, reference, &cfg.optimizer)?;
    if energy > before + ENERGY_INCREASE_TOL {
        return Err(Error::Optimizer {
            iterations: iters,
            message: format!("energy rose from {before:.12} to {energy:.12}"),
        });
    }
    let record = IterationRecord {
        iteration,
        gradient_norm: l2(grads),
        max_gradient: grads[pick].abs(),
        selected: Some(pick),
        label: Some(pool.entries()[pick].label.clone()),
        energy,
        optimizer_iterations: iters,
    };
    Ok((next, record))
}

/// Grows the ansatz from `start` until `‖R‖₂ < ε` or the iteration budget is spent.
pub fn adapt_solve_from(
    start: AdaptAnsatz,
    h: &QubitOperator,
    pool: &OperatorPool,
    reference: &Statevector,
    cfg: &AdaptConfig,
) -> Result<AdaptResult> {
    let reference_energy = reference.expectation_value(h)?.re;
    let mut ansatz = start;
    let mut history = Vec::new();
    let mut iteration = 0;
    loop {
        let state = ansatz.prepare(pool, reference)?;
        let energy = state.expectation_value(h)?.re;
        let grads = residual_gradients(&state, h, pool)?;
        let norm = l2(&grads);
        if norm < cfg.epsilon || iteration >= cfg.max_iter || pool.is_empty() {
            history.push(IterationRecord {
                iteration,
                gradient_norm: norm,
                max_gradient: grads.iter().fold(0.0, |m, g| m.max(g.abs())),
                selected: None,
                label: None,
                energy,
                optimizer_iterations: 0,
            });
            return Ok(AdaptResult {
                ansatz,
                energy,
                reference_energy,
                converged: norm < cfg.epsilon,
                gradient_norm: norm,
                epsilon: cfg.epsilon,
                history,
            });
        }
        let (next, record) = grow(&ansatz, &grads, energy, h, pool, reference, cfg, iteration)?;
        ansatz = next;
        history.push(record);
        iteration += 1;
    }
}

pub fn adapt_solve(
    h: &QubitOperator,
    pool: &OperatorPool,
    reference: &Statevector,
    cfg: &AdaptConfig,
) -> Result<AdaptResult> {
    adapt_solve_from(AdaptAnsatz::default(), h, pool, reference, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::pool::{build_pool, PoolKind};
    use crate::fci::fci_sector;
    use crate::lattice::{build_hamiltonian, hubbard_integrals, HubbardSpec};
    use crate::sim::prepare_hartree_fock;

    #[test]
    fn tie_break_prefers_lowest_index() {
        assert_eq!(select_operator(&[0.1, -0.3, 0.3, 0.2]), Some(1));
        assert_eq!(select_operator(&[]), None);
    }

    #[test]
    fn noninteracting_reference_has_zero_residuals() {
        let t = hubbard_integrals(&HubbardSpec::ring(3, 1.0, 0.0, 2)).unwrap();
        let h = build_hamiltonian(&t).unwrap();
        let pool = build_pool(&t, PoolKind::Gsd, true).unwrap();
        let hf = prepare_hartree_fock(&t).unwrap();
        let r = residual_gradients(&hf, &h, &pool).unwrap();
        assert!(r.iter().all(|g| g.abs() < 1e-14));
        let res = adapt_solve(&h, &pool, &hf, &AdaptConfig::default()).unwrap();
        assert!(res.converged && res.ansatz.is_empty());
    }

    #[test]
    fn two_site_cell_reaches_fci() {
        let t = hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap();
        let h = build_hamiltonian(&t).unwrap();
        let pool = build_pool(&t, PoolKind::Gsd, true).unwrap();
        let hf = prepare_hartree_fock(&t).unwrap();
        let res = adapt_solve(&h, &pool, &hf, &AdaptConfig::default()).unwrap();
        let exact = fci_sector(&h, 2, 0).unwrap().ground_energy();
        assert!(res.converged);
        assert!(
            (res.energy - exact).abs() < 1e-6,
            "{} vs {exact}",
            res.energy
        );
        assert!(res.energy >= exact - 1e-10);
        for w in res.history.windows(2) {
            assert!(w[1].energy <= w[0].energy + ENERGY_INCREASE_TOL);
        }
        // the first pick is the pair excitation
        assert_eq!(
            pool.entries()[res.history[0].selected.unwrap()]
                .excitation
                .len(),
            4
        );
    }

    #[test]
    fn checkpoint_round_trip_and_rebind() {
        let t = hubbard_integrals(&HubbardSpec::with_cell(1, 2, 1.0, 4.0, 2)).unwrap();
        let h = build_hamiltonian(&t).unwrap();
        let pool = build_pool(&t, PoolKind::Gsd, true).unwrap();
        let hf = prepare_hartree_fock(&t).unwrap();
        let res = adapt_solve(&h, &pool, &hf, &AdaptConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        res.save(&path).unwrap();
        let back = AdaptResult::load(&path).unwrap();
        assert_eq!(back, res);
        let plain = build_pool(&t, PoolKind::Gsd, false).unwrap();
        let rebound = back.ansatz.rebind(&plain);
        if res
            .ansatz
            .operators
            .iter()
            .all(|o| o.label.starts_with("tau["))
        {
            assert!(rebound.is_ok());
        }
        let sd = build_pool(&t, PoolKind::Sd, false).unwrap();
        let wrong = AdaptAnsatz {
            operators: vec![AnsatzOperator {
                pool_index: 0,
                label: "tau[9^ 8]".into(),
                angle: 0.1,
            }],
        };
        assert!(matches!(wrong.rebind(&sd), Err(Error::Checkpoint(_))));
    }
}
