//! Sparse Pauli strings and weighted sums of them.
//!
//! A string is stored in symplectic form as two bit masks: bit `q` of `x`
//! marks an X or Y on qubit `q`, bit `q` of `z` marks a Z or Y. Qubits absent
//! from both masks carry the identity. Products track the global phase as an
//! exact power of `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can address.
pub const MAX_QUBITS: usize = 64;

/// Coefficients below this magnitude are dropped by `simplify`.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// `i^k` for `k` taken mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn from_masks(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    /// Builds a string from `(qubit, letter)` pairs. A qubit may appear at most once.
    pub fn from_letters<I>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Pauli)>,
    {
        let mut s = PauliString::IDENTITY;
        for (q, p) in letters {
            if q >= MAX_QUBITS {
                return Err(Error::ResourceLimit {
                    what: "Pauli string qubit index",
                    requested: q,
                    limit: MAX_QUBITS - 1,
                });
            }
            if s.letter(q).is_some() {
                return Err(Error::InvalidInput(format!(
                    "qubit {q} appears twice in Pauli string"
                )));
            }
            let (bx, bz) = p.bits();
            s.x |= (bx as u64) << q;
            s.z |= (bz as u64) << q;
        }
        Ok(s)
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        PauliString::from_letters([(q, p)]).expect("qubit index within range")
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Highest qubit touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    pub fn letter(&self, q: usize) -> Option<Pauli> {
        let bx = (self.x >> q) & 1 == 1;
        let bz = (self.z >> q) & 1 == 1;
        match (bx, bz) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }

    /// Non-identity letters in ascending qubit order.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        let support = self.support();
        (0..MAX_QUBITS)
            .filter(move |q| (support >> q) & 1 == 1)
            .map(move |q| (q, self.letter(q).unwrap()))
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x))
            .count_ones()
            .is_multiple_of(2)
    }

    /// `self * other = i^k * result`; returns `(k, result)`.
    pub fn mul_with_phase(&self, other: &PauliString) -> (u32, PauliString) {
        // P = i^{|x&z|} X^x Z^z, and Z^a X^b = (-1)^{|a&b|} X^b Z^a.
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.y_count()
            + other.y_count()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        (k % 4, PauliString { x, z })
    }

    /// Action on a computational basis state: `P|b> = phase |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: usize) -> (Complex64, usize) {
        let b64 = b as u64;
        let sign = (b64 & self.z).count_ones();
        // Y|b> = i (-1)^b |b^1>
        let k = self.y_count() + 2 * sign;
        (i_pow(k), (b64 ^ self.x) as usize)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.letters() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{p}{q}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub string: PauliString,
}

/// Weighted sum of Pauli strings on a fixed register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitOperator {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl QubitOperator {
    pub fn zero(num_qubits: usize) -> Self {
        QubitOperator {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(num_qubits: usize, coefficient: Complex64) -> Self {
        QubitOperator::from_terms(num_qubits, [(PauliString::IDENTITY, coefficient)])
    }

    /// Builds an operator and simplifies it. Panics if a string reaches past the register.
    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let terms = terms
            .into_iter()
            .map(|(string, coefficient)| {
                assert!(
                    string.max_qubit().is_none_or(|q| q < num_qubits),
                    "Pauli string {string} exceeds {num_qubits}-qubit register"
                );
                PauliTerm {
                    coefficient,
                    string,
                }
            })
            .collect();
        QubitOperator { num_qubits, terms }.simplify()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `string`, zero if absent. Assumes simplified form.
    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|t| t.string.cmp(string))
            .map(|i| self.terms[i].coefficient)
            .unwrap_or_default()
    }

    /// Merges equal strings, drops coefficients below `tol`, and sorts by string.
    pub fn simplify_with(self, tol: f64) -> Self {
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for t in self.terms {
            *acc.entry(t.string).or_default() += t.coefficient;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= tol)
            .map(|(string, coefficient)| PauliTerm {
                coefficient,
                string,
            })
            .collect();
        QubitOperator {
            num_qubits: self.num_qubits,
            terms,
        }
    }

    pub fn simplify(self) -> Self {
        self.simplify_with(PRUNE_TOL)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        QubitOperator {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coefficient: t.coefficient * c,
                    string: t.string,
                })
                .collect(),
        }
        .simplify()
    }

    pub fn adjoint(&self) -> Self {
        QubitOperator {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coefficient: t.coefficient.conj(),
                    string: t.string,
                })
                .collect(),
        }
    }

    fn check_register(&self, other: &QubitOperator) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QubitOperator) -> Result<Self> {
        self.check_register(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(QubitOperator {
            num_qubits: self.num_qubits,
            terms,
        }
        .simplify())
    }

    pub fn try_mul(&self, other: &QubitOperator) -> Result<Self> {
        self.check_register(other)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let (k, s) = a.string.mul_with_phase(&b.string);
                *acc.entry(s).or_default() += a.coefficient * b.coefficient * i_pow(k);
            }
        }
        Ok(QubitOperator {
            num_qubits: self.num_qubits,
            terms: acc
                .into_iter()
                .map(|(string, coefficient)| PauliTerm {
                    coefficient,
                    string,
                })
                .collect(),
        }
        .simplify())
    }

    /// `ab - ba`, computed string by string: commuting pairs cancel exactly and
    /// anticommuting pairs contribute twice their product.
    pub fn commutator(&self, other: &QubitOperator) -> Result<Self> {
        self.check_register(other)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                if a.string.commutes_with(&b.string) {
                    continue;
                }
                let (k, s) = a.string.mul_with_phase(&b.string);
                *acc.entry(s).or_default() += 2.0 * a.coefficient * b.coefficient * i_pow(k);
            }
        }
        Ok(QubitOperator {
            num_qubits: self.num_qubits,
            terms: acc
                .into_iter()
                .map(|(string, coefficient)| PauliTerm {
                    coefficient,
                    string,
                })
                .collect(),
        }
        .simplify())
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &QubitOperator) -> Result<Self> {
        self.check_register(other)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                if !a.string.commutes_with(&b.string) {
                    continue;
                }
                let (k, s) = a.string.mul_with_phase(&b.string);
                *acc.entry(s).or_default() += 2.0 * a.coefficient * b.coefficient * i_pow(k);
            }
        }
        Ok(QubitOperator {
            num_qubits: self.num_qubits,
            terms: acc
                .into_iter()
                .map(|(string, coefficient)| PauliTerm {
                    coefficient,
                    string,
                })
                .collect(),
        }
        .simplify())
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coefficient() < tol
    }

    /// Every string's coefficient equals its own conjugate (within `tol`).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coefficient.im.abs() <= tol)
    }

    /// Largest `|c - conj(c)|` over strings; zero means Hermitian.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| 2.0 * t.coefficient.im.abs())
            .fold(0.0, f64::max)
    }

    /// Sum of `c` over terms whose string is the identity.
    pub fn constant(&self) -> Complex64 {
        self.coefficient(&PauliString::IDENTITY)
    }

    /// Dense `2^n x 2^n` matrix in row-major order, little-endian basis.
    pub fn to_dense(&self) -> Result<Vec<Vec<Complex64>>> {
        const DENSE_LIMIT: usize = 12;
        if self.num_qubits > DENSE_LIMIT {
            return Err(Error::ResourceLimit {
                what: "dense operator qubits",
                requested: self.num_qubits,
                limit: DENSE_LIMIT,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut m = vec![vec![Complex64::default(); dim]; dim];
        for t in &self.terms {
            for col in 0..dim {
                let (ph, row) = t.string.apply_to_basis(col);
                m[row][col] += t.coefficient * ph;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for QubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "({:+.6}{:+.6}i) [{}]",
                t.coefficient.re, t.coefficient.im, t.string
            )?;
        }
        Ok(())
    }
}

impl Add for &QubitOperator {
    type Output = QubitOperator;
    fn add(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_add(rhs).expect("register sizes must match")
    }
}

impl Sub for &QubitOperator {
    type Output = QubitOperator;
    fn sub(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_add(&-rhs).expect("register sizes must match")
    }
}

impl Mul for &QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_mul(rhs).expect("register sizes must match")
    }
}

impl Neg for &QubitOperator {
    type Output = QubitOperator;
    fn neg(self) -> QubitOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
