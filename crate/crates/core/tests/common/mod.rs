//! Reference implementations shared by the integration tests. Nothing here
//! goes through the Pauli algebra or the crate's own eigensolver.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use eom_adapt::lattice::{HubbardSpec, IntegralTable, Spin};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// One ladder factor: `(true, m)` is `a†_m`, `(false, m)` is `a_m`.
pub type Factor = (bool, usize);

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Applies a ladder product to an occupation bitstring, rightmost factor
/// first. The sign counts occupied modes below the acted-on mode.
pub fn apply_ladders(factors: &[Factor], det: usize) -> Option<(f64, usize)> {
    let mut sign = 1.0;
    let mut d = det;
    for &(create, m) in factors.iter().rev() {
        let occupied = d >> m & 1 == 1;
        if occupied == create {
            return None;
        }
        if (d & ((1usize << m) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        d ^= 1 << m;
    }
    Some((sign, d))
}

/// Dense matrix of `Σ c · (ladder product)` on the given determinants.
pub fn fermion_matrix(terms: &[(C64, Vec<Factor>)], basis: &[usize]) -> DMatrix<C64> {
    let index: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut m = DMatrix::zeros(basis.len(), basis.len());
    for (col, &b) in basis.iter().enumerate() {
        for (coef, factors) in terms {
            if let Some((sign, out)) = apply_ladders(factors, b) {
                if let Some(&row) = index.get(&out) {
                    m[(row, col)] += coef * sign;
                }
            }
        }
    }
    m
}

/// Determinants with `n` electrons and the given `2S_z`, alpha on even modes.
pub fn determinants(num_modes: usize, n: usize, twice_sz: i32) -> Vec<usize> {
    (0..1usize << num_modes)
        .filter(|&b| {
            let alpha = (0..num_modes)
                .step_by(2)
                .filter(|m| b >> m & 1 == 1)
                .count() as i32;
            b.count_ones() as usize == n && 2 * alpha - n as i32 == twice_sz
        })
        .collect()
}

/// Ladder terms of the spin-expanded Hamiltonian written straight from the
/// integrals, without dropping any vanishing products.
pub fn table_terms(table: &IntegralTable) -> Vec<(C64, Vec<Factor>)> {
    let mut terms = vec![(c(table.constant), Vec::new())];
    for (&[p, q], &h) in &table.one_body {
        for s in Spin::BOTH {
            terms.push((h, vec![(true, table.mode(p, s)), (false, table.mode(q, s))]));
        }
    }
    for (&[p, q, r, s], &g) in &table.two_body {
        for s1 in Spin::BOTH {
            for s2 in Spin::BOTH {
                terms.push((
                    g * 0.5,
                    vec![
                        (true, table.mode(p, s1)),
                        (true, table.mode(q, s2)),
                        (false, table.mode(r, s2)),
                        (false, table.mode(s, s1)),
                    ],
                ));
            }
        }
    }
    terms
}

/// The same ring in real space: site `cell · s + j`, modes `2·site + spin`.
/// The bond closing the ring carries `exp(2πi·twist)`.
pub fn real_space_hubbard(spec: &HubbardSpec) -> (usize, Vec<(C64, Vec<Factor>)>) {
    let s = spec.sites_per_cell;
    let nc = spec.n_cells;
    let sites = nc * s;
    let mut bonds: Vec<(usize, usize, C64)> = Vec::new();
    for cell in 0..nc {
        for j in 0..s.saturating_sub(1) {
            bonds.push((cell * s + j, cell * s + j + 1, c(-spec.t)));
        }
        let next = (cell + 1) % nc;
        let phase = if cell + 1 == nc {
            C64::from_polar(1.0, 2.0 * std::f64::consts::PI * spec.twist)
        } else {
            c(1.0)
        };
        bonds.push((cell * s + s - 1, next * s, phase * -spec.t_inter));
    }
    let mut terms = Vec::new();
    for (i, j, amp) in bonds {
        for spin in 0..2 {
            let (mi, mj) = (2 * i + spin, 2 * j + spin);
            terms.push((amp, vec![(true, mi), (false, mj)]));
            terms.push((amp.conj(), vec![(true, mj), (false, mi)]));
        }
    }
    for site in 0..sites {
        let eps = spec.onsite.get(site % s).copied().unwrap_or(0.0);
        for spin in 0..2 {
            terms.push((
                c(eps),
                vec![(true, 2 * site + spin), (false, 2 * site + spin)],
            ));
        }
        terms.push((
            c(spec.u),
            vec![
                (true, 2 * site),
                (false, 2 * site),
                (true, 2 * site + 1),
                (false, 2 * site + 1),
            ],
        ));
    }
    (2 * sites, terms)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra of different size");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
