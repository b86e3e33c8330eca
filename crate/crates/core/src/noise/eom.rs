//! Subspace matrices assembled from estimated Pauli expectation values.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eom::{solve_qse, ExcitationBasis, Formulation, QseProblem, QseSolution};
use crate::error::Result;
use crate::linalg::{eigh, CMatrix};
use crate::ops::{PauliString, QubitOperator};

/// Operators whose expectation values fill `E0`, `H` and `S` of one basis.
#[derive(Clone, Debug)]
pub struct MeasurementPlan {
    pub labels: Vec<String>,
    pub singles: Vec<usize>,
    basis: ExcitationBasis,
    energy: QubitOperator,
    h_ops: Vec<QubitOperator>,
    s_ops: Vec<QubitOperator>,
}

impl MeasurementPlan {
    /// `ρ_u† H ρ_v` and `ρ_u† ρ_v` for every pair.
    pub fn new(h: &QubitOperator, basis: &ExcitationBasis) -> Result<Self> {
        let n = basis.len();
        let mut h_ops = Vec::with_capacity(n * n);
        let mut s_ops = Vec::with_capacity(n * n);
        let daggers: Vec<QubitOperator> =
            basis.operators.iter().map(|o| o.qubit.adjoint()).collect();
        for du in &daggers {
            let du_h = du.try_mul(h)?;
            for v in &basis.operators {
                h_ops.push(du_h.try_mul(&v.qubit)?);
                s_ops.push(du.try_mul(&v.qubit)?);
            }
        }
        Ok(MeasurementPlan {
            labels: basis.labels(),
            singles: basis.singles_indices(),
            basis: basis.clone(),
            energy: h.clone(),
            h_ops,
            s_ops,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Every Pauli string that must be estimated.
    pub fn strings(&self) -> BTreeSet<PauliString> {
        std::iter::once(&self.energy)
            .chain(&self.h_ops)
            .chain(&self.s_ops)
            .flat_map(|op| op.terms().iter().map(|t| t.string))
            .collect()
    }

    /// `(E0, H, S)` from expectation values of the sorted `strings`.
    pub fn assemble(&self, strings: &[PauliString], values: &[f64]) -> (f64, CMatrix, CMatrix) {
        let eval = |op: &QubitOperator| -> Complex64 {
            op.terms()
                .iter()
                .map(|t| {
                    t.coefficient
                        * values[strings
                            .binary_search(&t.string)
                            .expect("string was planned")]
                })
                .sum()
        };
        let n = self.dim();
        let e0 = eval(&self.energy).re;
        let h = CMatrix::from_fn(n, n, |r, c| eval(&self.h_ops[r * n + c]));
        let s = CMatrix::from_fn(n, n, |r, c| eval(&self.s_ops[r * n + c]));
        (e0, h, s)
    }

    pub fn basis(&self) -> &ExcitationBasis {
        &self.basis
    }
}

/// Hermitian part of H, and of S with negative eigenvalues clipped to zero.
pub fn regularize(h: &CMatrix, s: &CMatrix) -> (CMatrix, CMatrix) {
    let h = (h + h.adjoint()).scale(0.5);
    let s = (s + s.adjoint()).scale(0.5);
    let (vals, vecs) = eigh(&s);
    let n = s.nrows();
    let mut clipped = CMatrix::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.0 {
            let col = vecs.column(i);
            clipped += (col * col.adjoint()).scale(v);
        }
    }
    (h, clipped)
}

/// Lowest state above the weight threshold, falling back to the lowest state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub energy: f64,
    pub qpwt: f64,
}

pub fn pick_endpoint(sol: &QseSolution, qpwt_min: f64) -> Option<Endpoint> {
    let i = sol
        .qpwt
        .iter()
        .position(|&w| w >= qpwt_min)
        .or(if sol.is_empty() { None } else { Some(0) })?;
    Some(Endpoint {
        energy: sol.excitation_energies[i],
        qpwt: sol.qpwt[i],
    })
}

/// Solves the projected problem from possibly noisy `(E0, H, S)`.
pub fn solve_estimated(
    plan: &MeasurementPlan,
    e0: f64,
    h: &CMatrix,
    s: &CMatrix,
    s_tol: f64,
) -> Result<QseSolution> {
    let (h, s) = regularize(h, s);
    let basis = plan.basis();
    let problem = QseProblem::from_matrices(
        Formulation::Projected,
        basis.sector,
        basis.k_target,
        plan.labels.clone(),
        plan.singles.clone(),
        e0,
        h,
        s,
        f64::INFINITY,
    )?;
    solve_qse(&problem, s_tol)
}
