//! Jordan–Wigner mapping: qubit `m` carries mode `m`, with the parity string
//! on all lower modes.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::fermion::{FermionOperator, Ladder};
use crate::ops::pauli::{i_pow, PauliString, QubitOperator, MAX_QUBITS};

/// The two strings of a single ladder operator: `(X_m ∓ iY_m)/2 · Z_{<m}`.
fn ladder_image(l: Ladder) -> [(Complex64, PauliString); 2] {
    let below = (1u64 << l.mode) - 1;
    let bit = 1u64 << l.mode;
    let x = PauliString::from_masks(bit, below);
    let y = PauliString::from_masks(bit, below | bit);
    let yc = if l.dagger {
        Complex64::new(0.0, -0.5)
    } else {
        Complex64::new(0.0, 0.5)
    };
    [(Complex64::new(0.5, 0.0), x), (yc, y)]
}

/// Image of a single product of ladder operators, unsimplified.
fn product_image(coefficient: Complex64, factors: &[Ladder]) -> Vec<(Complex64, PauliString)> {
    let mut acc = vec![(coefficient, PauliString::IDENTITY)];
    for &l in factors {
        let image = ladder_image(l);
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (c, s) in &acc {
            for (ci, si) in &image {
                let (k, p) = s.mul_with_phase(si);
                next.push((c * ci * i_pow(k), p));
            }
        }
        // merge eagerly so long products do not blow up
        let mut merged: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (c, s) in next {
            *merged.entry(s).or_default() += c;
        }
        acc = merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(s, c)| (c, s))
            .collect();
    }
    acc
}

pub fn jordan_wigner(op: &FermionOperator, num_modes: usize) -> Result<QubitOperator> {
    if num_modes > MAX_QUBITS {
        return Err(Error::ResourceLimit {
            what: "Jordan-Wigner register",
            requested: num_modes,
            limit: MAX_QUBITS,
        });
    }
    if let Some(m) = op.max_mode() {
        if m >= num_modes {
            return Err(Error::ModeOutOfRange { mode: m, num_modes });
        }
    }
    let strings = op
        .terms()
        .iter()
        .flat_map(|t| product_image(t.coefficient, &t.factors))
        .map(|(c, s)| (s, c));
    Ok(QubitOperator::from_terms(num_modes, strings))
}
