//! Subspace matrices, the generalized eigenproblem and quasiparticle weights.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eom::basis::{ExcitationBasis, Sector};
use crate::error::{Error, Result};
use crate::lattice::KPoint;
use crate::linalg::{eigh, hermiticity_deviation, CMatrix};
use crate::ops::QubitOperator;
use crate::sim::Statevector;

/// Asymmetry tolerated before symmetrizing a subspace matrix.
pub const ASYMMETRY_TOL: f64 = 1e-8;
pub const DEFAULT_S_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// `H_uv = <Ψ|ρ_u† H ρ_v|Ψ>`, energies measured from `<Ψ|H|Ψ>`.
    Projected,
    /// Double-anticommutator matrices with the anticommutator metric.
    Unprojected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QseProblem {
    pub formulation: Formulation,
    pub sector: Sector,
    pub k_target: KPoint,
    pub labels: Vec<String>,
    pub singles: Vec<usize>,
    pub ground_energy: f64,
    #[serde(with = "matrix_serde")]
    pub h: CMatrix,
    #[serde(with = "matrix_serde")]
    pub s: CMatrix,
    /// Metric of the `ρ_vΨ` vectors alone; equals `s` when projected.
    #[serde(with = "matrix_serde")]
    pub forward: CMatrix,
    /// Asymmetry of H and S before symmetrization.
    pub raw_asymmetry: (f64, f64),
}

impl QseProblem {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Subtracted from each eigenvalue to give excitation energies.
    pub fn energy_offset(&self) -> f64 {
        match self.formulation {
            Formulation::Projected => self.ground_energy,
            Formulation::Unprojected => 0.0,
        }
    }

    /// Assembles a problem from raw matrices, checking and removing asymmetry.
    #[allow(clippy::too_many_arguments)]
    pub fn from_matrices(
        formulation: Formulation,
        sector: Sector,
        k_target: KPoint,
        labels: Vec<String>,
        singles: Vec<usize>,
        ground_energy: f64,
        h: CMatrix,
        s: CMatrix,
        asymmetry_tol: f64,
    ) -> Result<Self> {
        let dh = hermiticity_deviation(&h);
        let ds = hermiticity_deviation(&s);
        let worst = dh.max(ds);
        if worst > asymmetry_tol || !worst.is_finite() {
            return Err(Error::NotHermitian(worst));
        }
        let s = (&s + s.adjoint()).scale(0.5);
        Ok(QseProblem {
            formulation,
            sector,
            k_target,
            labels,
            singles,
            ground_energy,
            h: (&h + h.adjoint()).scale(0.5),
            forward: s.clone(),
            s,
            raw_asymmetry: (dh, ds),
        })
    }
}

pub(crate) mod matrix_serde {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Complex64>> = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows: Vec<Vec<Complex64>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(CMatrix::from_fn(n, m, |r, c| rows[r][c]))
    }
}

fn check_register(ground: &Statevector, h: &QubitOperator, basis: &ExcitationBasis) -> Result<()> {
    for found in [h.num_qubits(), basis.num_qubits] {
        if found != ground.num_qubits() {
            return Err(Error::RegisterMismatch {
                expected: ground.num_qubits(),
                found,
            });
        }
    }
    Ok(())
}

fn normalized(ground: &Statevector) -> Result<Statevector> {
    let mut psi = ground.clone();
    if psi.normalize() == 0.0 {
        return Err(Error::InvalidInput("ground state has zero norm".into()));
    }
    Ok(psi)
}

/// Gram-type matrix `M_uv = <a_u|b_v>` filled in parallel by rows.
fn gram(a: &[Statevector], b: &[Statevector]) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = a
        .par_iter()
        .map(|x| b.iter().map(|y| x.inner(y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(CMatrix::from_fn(a.len(), b.len(), |r, c| rows[r][c]))
}

/// `H_uv = <ρ_uΨ|H|ρ_vΨ>` and `S_uv = <ρ_uΨ|ρ_vΨ>` with `E0 = <Ψ|H|Ψ>`.
pub fn build_qse_problem(
    ground: &Statevector,
    h: &QubitOperator,
    basis: &ExcitationBasis,
) -> Result<QseProblem> {
    check_register(ground, h, basis)?;
    let psi = normalized(ground)?;
    let e0 = psi.expectation_value(h)?.re;
    let phi: Vec<Statevector> = basis
        .operators
        .par_iter()
        .map(|o| psi.apply_operator(&o.qubit))
        .collect::<Result<_>>()?;
    let h_phi: Vec<Statevector> = phi
        .par_iter()
        .map(|v| v.apply_operator(h))
        .collect::<Result<_>>()?;
    QseProblem::from_matrices(
        Formulation::Projected,
        basis.sector,
        basis.k_target,
        basis.labels(),
        basis.singles_indices(),
        e0,
        gram(&phi, &h_phi)?,
        gram(&phi, &phi)?,
        ASYMMETRY_TOL,
    )
}

/// Matrices of the symmetric double anticommutator `<Ψ|[ρ_u†, H, ρ_v]₊|Ψ>`
/// and the metric `<Ψ|[ρ_u†, ρ_v]₊|Ψ>`, without projection.
pub fn build_np_problem(
    ground: &Statevector,
    h: &QubitOperator,
    basis: &ExcitationBasis,
) -> Result<QseProblem> {
    check_register(ground, h, basis)?;
    let psi = normalized(ground)?;
    let e0 = psi.expectation_value(h)?.re;
    let h_psi = psi.apply_operator(h)?;
    struct Vecs {
        a: Statevector,
        ha: Statevector,
        a_h: Statevector,
        b: Statevector,
        hb: Statevector,
        b_h: Statevector,
    }
    let vecs: Vec<Vecs> = basis
        .operators
        .par_iter()
        .map(|o| {
            let dag = o.qubit.adjoint();
            let a = psi.apply_operator(&o.qubit)?;
            let b = psi.apply_operator(&dag)?;
            Ok(Vecs {
                ha: a.apply_operator(h)?,
                a_h: h_psi.apply_operator(&o.qubit)?,
                hb: b.apply_operator(h)?,
                b_h: h_psi.apply_operator(&dag)?,
                a,
                b,
            })
        })
        .collect::<Result<_>>()?;
    let n = vecs.len();
    let elements: Vec<Vec<(Complex64, Complex64, Complex64)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            (0..n)
                .map(|v| {
                    let (x, y) = (&vecs[u], &vecs[v]);
                    // a = ρΨ, b = ρ†Ψ, ha = Hρ Ψ, a_h = ρHΨ
                    let hv = x.a.inner(&y.ha)? - y.b.inner(&x.hb)?
                        + 0.5
                            * (-x.a_h.inner(&y.a)? + y.b.inner(&x.b_h)? - x.a.inner(&y.a_h)?
                                + y.b_h.inner(&x.b)?);
                    let fv = x.a.inner(&y.a)?;
                    Ok((hv, fv + y.b.inner(&x.b)?, fv))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut problem = QseProblem::from_matrices(
        Formulation::Unprojected,
        basis.sector,
        basis.k_target,
        basis.labels(),
        basis.singles_indices(),
        e0,
        CMatrix::from_fn(n, n, |r, c| elements[r][c].0),
        CMatrix::from_fn(n, n, |r, c| elements[r][c].1),
        ASYMMETRY_TOL,
    )?;
    let f = CMatrix::from_fn(n, n, |r, c| elements[r][c].2);
    problem.forward = (&f + f.adjoint()).scale(0.5);
    Ok(problem)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QseSolution {
    /// `ΔE_x`, ascending (Hartree).
    pub excitation_energies: Vec<f64>,
    /// Columns are S-normalized coefficient vectors over the full basis.
    #[serde(with = "matrix_serde")]
    pub eigenvectors: CMatrix,
    /// Norm of each state's projection onto the span of the singles block.
    pub qpwt: Vec<f64>,
    /// Plain 2-norm of the singles coefficients.
    pub singles_norm: Vec<f64>,
    /// Share of each root's metric carried by `ρΨ` rather than `ρ†Ψ`. Roots
    /// below one half belong to the opposite sector's branch.
    #[serde(default)]
    pub forward: Vec<f64>,
    pub retained_dim: usize,
    pub s_tol: f64,
    pub diagnostic: Option<String>,
}

impl QseSolution {
    pub fn is_empty(&self) -> bool {
        self.excitation_energies.is_empty()
    }

    fn empty(dim: usize, s_tol: f64, why: String) -> Self {
        QseSolution {
            excitation_energies: Vec::new(),
            eigenvectors: CMatrix::zeros(dim, 0),
            qpwt: Vec::new(),
            singles_norm: Vec::new(),
            forward: Vec::new(),
            retained_dim: 0,
            s_tol,
            diagnostic: Some(why),
        }
    }

    /// Whether root `i` belongs to the requested sector rather than the
    /// backward branch of the unprojected equations.
    pub fn is_forward(&self, i: usize) -> bool {
        self.forward.get(i).is_none_or(|&f| f >= 0.5)
    }

    /// Lowest forward state whose weight reaches `qpwt_min`.
    pub fn lowest_quasiparticle(&self, qpwt_min: f64) -> Option<(usize, f64)> {
        (0..self.qpwt.len())
            .find(|&i| self.qpwt[i] >= qpwt_min && self.is_forward(i))
            .map(|i| (i, self.excitation_energies[i]))
    }
}

/// `X` with `X† S X = I` on the eigenvectors of S above `s_tol · max eig(S)`.
fn orthogonalizer(s: &CMatrix, s_tol: f64) -> (CMatrix, f64) {
    let (vals, vecs) = eigh(s);
    let top = vals.last().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..vals.len())
        .filter(|&i| top > 0.0 && vals[i] > s_tol * top)
        .collect();
    let x = CMatrix::from_fn(s.nrows(), keep.len(), |r, c| {
        vecs[(r, keep[c])] / vals[keep[c]].sqrt()
    });
    (x, top)
}

/// Canonical orthogonalization followed by a Hermitian eigensolve.
pub fn solve_qse(problem: &QseProblem, s_tol: f64) -> Result<QseSolution> {
    if !(0.0..1.0).contains(&s_tol) {
        return Err(Error::InvalidInput(format!("s_tol {s_tol} outside [0, 1)")));
    }
    let n = problem.dim();
    let (x, top) = orthogonalizer(&problem.s, s_tol);
    if x.ncols() == 0 || top < f64::EPSILON {
        return Ok(QseSolution::empty(
            n,
            s_tol,
            format!("overlap matrix is numerically zero (largest eigenvalue {top:.3e})"),
        ));
    }
    let hr = x.adjoint() * &problem.h * &x;
    let hr = (&hr + hr.adjoint()).scale(0.5);
    let (vals, v) = eigh(&hr);
    let c = &x * v;
    let offset = problem.energy_offset();
    let (qpwt, singles_norm) = weights(&problem.s, &c, &problem.singles, s_tol);
    let fc = &problem.forward * &c;
    let forward = (0..c.ncols())
        .map(|j| c.column(j).dotc(&fc.column(j)).re)
        .collect();
    Ok(QseSolution {
        excitation_energies: vals.iter().map(|e| e - offset).collect(),
        eigenvectors: c,
        qpwt,
        singles_norm,
        forward,
        retained_dim: x.ncols(),
        s_tol,
        diagnostic: None,
    })
}

/// Quasiparticle weight of each column of `c`.
///
/// With `|x> = Σ_v c_v ρ_v|Ψ>` normalized, the weight is the norm of the
/// orthogonal projection of `|x>` onto `span{ρ_s|Ψ> : s singles}`, i.e.
/// `sqrt((Sc)_s† S_ss⁺ (Sc)_s)`. It reduces to the singles coefficient norm
/// when the singles are orthonormal and orthogonal to the rest.
fn weights(s: &CMatrix, c: &CMatrix, singles: &[usize], s_tol: f64) -> (Vec<f64>, Vec<f64>) {
    let k = singles.len();
    let sss = CMatrix::from_fn(k, k, |r, q| s[(singles[r], singles[q])]);
    let (xs, _) = orthogonalizer(&sss, s_tol);
    let sc = s * c;
    (0..c.ncols())
        .map(|j| {
            let b = CMatrix::from_fn(k, 1, |r, _| sc[(singles[r], j)]);
            let w = (xs.adjoint() * b).norm();
            let raw = singles
                .iter()
                .map(|&r| c[(r, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            (w, raw)
        })
        .unzip()
}

/// Quasiparticle weights of a solved problem.
pub fn quasiparticle_weight(problem: &QseProblem, solution: &QseSolution) -> Vec<f64> {
    weights(
        &problem.s,
        &solution.eigenvectors,
        &problem.singles,
        solution.s_tol,
    )
    .0
}
