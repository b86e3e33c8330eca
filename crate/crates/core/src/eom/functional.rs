//! Dense evaluation of the EOM energy functionals for one excitation operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::ops::{jordan_wigner, FermionOperator, QubitOperator};
use crate::sim::Statevector;

pub const MAX_FUNCTIONAL_QUBITS: usize = 10;

/// Functional values in Hartree. The projected ones use `R̃ = R|Ψ><Ψ|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    /// `<R̃†[H, R̃]> / <R̃†R̃>`
    pub simple_metric: Complex64,
    /// `<[R̃†, [H, R̃]]₊> / <[R̃†, R̃]₊>`
    pub commutator_metric: Complex64,
    /// `<[R̃†, H, R̃]₊> / <[R̃†, R̃]₊>`
    pub double_commutator: Complex64,
    /// `<RΨ|H|RΨ>/<RΨ|RΨ> − <Ψ|H|Ψ>`
    pub working_equation: f64,
    /// Double-commutator functional with the bare `R`.
    pub unprojected_double_commutator: Complex64,
    /// `|<Ψ|R̃|Ψ>|`; zero when the killer condition holds.
    pub killer_residual: f64,
    /// Largest `|f − working| / max(1, |working|)` over the projected functionals.
    pub max_relative_deviation: f64,
}

fn dense(op: &QubitOperator) -> Result<CMatrix> {
    let rows = op.to_dense()?;
    let n = rows.len();
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

fn anti(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

fn comm(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn expect(psi: &CMatrix, m: &CMatrix) -> Complex64 {
    (psi.adjoint() * m * psi)[(0, 0)]
}

struct Values {
    simple: Complex64,
    commutator: Complex64,
    double: Complex64,
}

fn functionals(psi: &CMatrix, h: &CMatrix, r: &CMatrix) -> Values {
    let rd = r.adjoint();
    let hr = comm(h, r);
    let metric = expect(psi, &anti(&rd, r));
    let double = (anti(&comm(&rd, h), r) + anti(&rd, &hr)).scale(0.5);
    Values {
        simple: expect(psi, &(&rd * &hr)) / expect(psi, &(&rd * r)),
        commutator: expect(psi, &anti(&rd, &hr)) / metric,
        double: expect(psi, &double) / metric,
    }
}

/// Evaluates every functional by explicit matrix products on the full register.
pub fn verify_functional_equivalence(
    ground: &Statevector,
    h: &QubitOperator,
    r: &FermionOperator,
) -> Result<FunctionalReport> {
    let n = ground.num_qubits();
    if n > MAX_FUNCTIONAL_QUBITS {
        return Err(Error::ResourceLimit {
            what: "dense functional check qubits",
            requested: n,
            limit: MAX_FUNCTIONAL_QUBITS,
        });
    }
    if h.num_qubits() != n {
        return Err(Error::RegisterMismatch {
            expected: n,
            found: h.num_qubits(),
        });
    }
    let mut psi_state = ground.clone();
    if psi_state.normalize() == 0.0 {
        return Err(Error::InvalidInput("ground state has zero norm".into()));
    }
    let rq = jordan_wigner(r, n)?;
    let hm = dense(h)?;
    let rm = dense(&rq)?;
    let psi = CMatrix::from_column_slice(psi_state.dim(), 1, psi_state.amplitudes());
    let phi = &rm * &psi;
    let norm = phi.norm_squared();
    if norm < 1e-24 {
        return Err(Error::InvalidInput(
            "R annihilates the reference state".into(),
        ));
    }
    let e0 = expect(&psi, &hm).re;
    let working = expect(&phi, &hm).re / norm - e0;
    let projected = &phi * psi.adjoint();
    let p = functionals(&psi, &hm, &projected);
    let bare = functionals(&psi, &hm, &rm);
    let dev = [p.simple, p.commutator, p.double]
        .iter()
        .map(|v| (v - working).norm() / working.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(FunctionalReport {
        simple_metric: p.simple,
        commutator_metric: p.commutator,
        double_commutator: p.double,
        working_equation: working,
        unprojected_double_commutator: bare.double,
        killer_residual: expect(&psi, &projected).norm(),
        max_relative_deviation: dev,
    })
}
