//! Symbolic fermionic operators.
//!
//! Terms keep their factors in insertion order; products concatenate factor
//! lists without reordering. `simplify` brings every term into normal order
//! (creation operators first, each group sorted by descending mode), applying
//! the canonical anticommutation relations, and merges equal terms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ops::pauli::PRUNE_TOL;

/// One creation (`dagger = true`) or annihilation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder {
            mode,
            dagger: false,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "{}^", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermionTerm {
    pub coefficient: Complex64,
    pub factors: Vec<Ladder>,
}

impl FermionTerm {
    pub fn new(coefficient: Complex64, factors: Vec<Ladder>) -> Self {
        debug_assert!(coefficient.re.is_finite() && coefficient.im.is_finite());
        FermionTerm {
            coefficient,
            factors,
        }
    }

    pub fn adjoint(&self) -> FermionTerm {
        FermionTerm {
            coefficient: self.coefficient.conj(),
            factors: self
                .factors
                .iter()
                .rev()
                .map(|l| Ladder {
                    mode: l.mode,
                    dagger: !l.dagger,
                })
                .collect(),
        }
    }

    /// Change in particle number produced by the term.
    pub fn particle_change(&self) -> i64 {
        self.factors
            .iter()
            .map(|l| if l.dagger { 1 } else { -1 })
            .sum()
    }
}

/// Formats a factor list OpenFermion style, e.g. `[3^ 2^ 1 0]`.
pub fn factor_label(factors: &[Ladder]) -> String {
    let inner: Vec<String> = factors.iter().map(|l| l.to_string()).collect();
    format!("[{}]", inner.join(" "))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FermionOperator {
    terms: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        FermionOperator { terms: Vec::new() }
    }

    pub fn identity(coefficient: Complex64) -> Self {
        FermionOperator::term(coefficient, Vec::new())
    }

    pub fn term(coefficient: Complex64, factors: Vec<Ladder>) -> Self {
        FermionOperator {
            terms: vec![FermionTerm::new(coefficient, factors)],
        }
    }

    pub fn from_terms(terms: Vec<FermionTerm>) -> Self {
        FermionOperator { terms }
    }

    pub fn creation(mode: usize) -> Self {
        FermionOperator::term(Complex64::new(1.0, 0.0), vec![Ladder::create(mode)])
    }

    pub fn annihilation(mode: usize) -> Self {
        FermionOperator::term(Complex64::new(1.0, 0.0), vec![Ladder::annihilate(mode)])
    }

    pub fn number(mode: usize) -> Self {
        FermionOperator::term(
            Complex64::new(1.0, 0.0),
            vec![Ladder::create(mode), Ladder::annihilate(mode)],
        )
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|l| l.mode))
            .max()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FermionOperator {
            terms: self
                .terms
                .iter()
                .map(|t| FermionTerm::new(t.coefficient * c, t.factors.clone()))
                .collect(),
        }
    }

    /// Term-by-term concatenation of factor lists; no reordering.
    pub fn multiply(&self, other: &FermionOperator) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend_from_slice(&b.factors);
                terms.push(FermionTerm::new(a.coefficient * b.coefficient, factors));
            }
        }
        FermionOperator { terms }
    }

    pub fn adjoint(&self) -> Self {
        FermionOperator {
            terms: self.terms.iter().map(FermionTerm::adjoint).collect(),
        }
    }

    /// Normal-ordered, merged, and pruned at `tol`.
    pub fn simplify_with(&self, tol: f64) -> Self {
        let mut acc: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        for t in &self.terms {
            for (c, f) in normal_order_term(t.coefficient, &t.factors) {
                *acc.entry(f).or_default() += c;
            }
        }
        FermionOperator {
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() >= tol)
                .map(|(f, c)| FermionTerm::new(c, f))
                .collect(),
        }
    }

    pub fn simplify(&self) -> Self {
        self.simplify_with(PRUNE_TOL)
    }

    /// True if the simplified operator vanishes.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.simplify_with(tol).terms.is_empty()
    }
}

impl fmt::Display for FermionOperator {
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
                "({:+.6}{:+.6}i) {}",
                t.coefficient.re,
                t.coefficient.im,
                factor_label(&t.factors)
            )?;
        }
        Ok(())
    }
}

/// Sorts one product into normal order, returning the resulting terms.
///
/// Insertion sort over adjacent pairs. Swapping `a_p a^_p` spawns the
/// contracted term from `a_p a^_p = 1 - a^_p a_p`; a repeated ladder of the
/// same kind kills the term.
fn normal_order_term(coefficient: Complex64, factors: &[Ladder]) -> Vec<(Complex64, Vec<Ladder>)> {
    let mut out = Vec::new();
    let mut stack = vec![(coefficient, factors.to_vec())];
    'terms: while let Some((mut c, mut f)) = stack.pop() {
        for i in 1..f.len() {
            let mut j = i;
            while j > 0 {
                let left = f[j - 1];
                let right = f[j];
                if right.dagger && !left.dagger {
                    if left.mode == right.mode {
                        let mut contracted = f[..j - 1].to_vec();
                        contracted.extend_from_slice(&f[j + 1..]);
                        stack.push((c, contracted));
                    }
                    f.swap(j - 1, j);
                    c = -c;
                } else if right.dagger == left.dagger {
                    if right.mode == left.mode {
                        continue 'terms;
                    }
                    if right.mode > left.mode {
                        f.swap(j - 1, j);
                        c = -c;
                    } else {
                        break;
                    }
                } else {
                    break;
                }
                j -= 1;
            }
        }
        out.push((c, f));
    }
    out
}

impl Add for &FermionOperator {
    type Output = FermionOperator;
    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        FermionOperator { terms }
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        self + &(-rhs)
    }
}

impl Neg for &FermionOperator {
    type Output = FermionOperator;
    fn neg(self) -> FermionOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        self.multiply(rhs)
    }
}
