//! Per-k ground state plus IP/EA pipeline and band assembly.

pub mod fixtures;
pub mod output;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::{solve_ground_state, GroundStateConfig};
use crate::eom::{eom_spectrum, EomConfig, Formulation, QseSolution, Sector};
use crate::error::Result;

pub use fixtures::{
    load_fixture_dir, write_fixture_dir, FixturePoint, KPath, PathPoint, PATH_FILE,
};
pub use output::{ascii_plot, OutputFormat};

pub const HARTREE_TO_EV: f64 = 27.211386245988;

pub fn to_ev(hartree: f64) -> f64 {
    hartree * HARTREE_TO_EV
}

pub fn from_ev(ev: f64) -> f64 {
    ev / HARTREE_TO_EV
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    /// Each k measured from its own `E0(N)`.
    #[default]
    PerK,
    /// One global shift placing the valence-band maximum at zero.
    VbmZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    pub ground: GroundStateConfig,
    pub eom: EomConfig,
    pub qpwt_min: f64,
    /// Also solve the unprojected double-commutator equations.
    pub eom_np: bool,
    pub alignment: Alignment,
}

impl Default for BandConfig {
    fn default() -> Self {
        BandConfig {
            ground: GroundStateConfig::default(),
            eom: EomConfig::default(),
            qpwt_min: 0.5,
            eom_np: false,
            alignment: Alignment::PerK,
        }
    }
}

/// One EOM root in Hartree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub qpwt: f64,
}

/// One band energy in eV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandLevel {
    pub index: usize,
    pub energy_ev: f64,
    pub qpwt: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Bands {
    /// Descending.
    pub valence: Vec<BandLevel>,
    /// Ascending.
    pub conduction: Vec<BandLevel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KPointBands {
    pub label: String,
    pub k: [f64; 3],
    pub ground_energy: Option<f64>,
    pub adapt_converged: bool,
    pub ansatz_length: usize,
    pub bands: Bands,
    /// IP roots `ΔE = E(N−1) − E0`, ascending.
    pub ip_spectrum: Vec<Level>,
    pub ea_spectrum: Vec<Level>,
    pub np_bands: Option<Bands>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub gap_ev: f64,
    pub k_valence: String,
    pub k_conduction: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub alignment: Alignment,
    pub points: Vec<KPointBands>,
    pub gap: Option<Gap>,
    pub np_gap: Option<Gap>,
}

/// Forward roots only; the backward branch of the unprojected equations
/// describes the other sector.
fn levels(sol: &QseSolution) -> Vec<Level> {
    (0..sol.excitation_energies.len())
        .filter(|&i| sol.is_forward(i))
        .map(|i| Level {
            energy: sol.excitation_energies[i],
            qpwt: sol.qpwt[i],
        })
        .collect()
}

/// Keeps roots with weight at least `qpwt_min`; among roots closer than
/// `DEGENERATE_HA` only the greatest weight survives.
fn quasiparticles(spectrum: &[Level], qpwt_min: f64) -> Vec<Level> {
    const DEGENERATE_HA: f64 = 1e-8;
    let mut kept: Vec<Level> = Vec::new();
    for l in spectrum.iter().filter(|l| l.qpwt >= qpwt_min) {
        match kept.last_mut() {
            Some(last) if (l.energy - last.energy).abs() < DEGENERATE_HA => {
                if l.qpwt > last.qpwt {
                    *last = *l;
                }
            }
            _ => kept.push(*l),
        }
    }
    kept
}

/// Valence `ε_v = −ΔE_IP` (descending) and conduction `ε_c = ΔE_EA` (ascending), in eV.
pub fn assemble_bands(ip: &[Level], ea: &[Level], qpwt_min: f64) -> Bands {
    let valence = quasiparticles(ip, qpwt_min)
        .into_iter()
        .enumerate()
        .map(|(index, l)| BandLevel {
            index,
            energy_ev: to_ev(-l.energy),
            qpwt: l.qpwt,
        })
        .collect();
    let conduction = quasiparticles(ea, qpwt_min)
        .into_iter()
        .enumerate()
        .map(|(index, l)| BandLevel {
            index,
            energy_ev: to_ev(l.energy),
            qpwt: l.qpwt,
        })
        .collect();
    Bands {
        valence,
        conduction,
    }
}

fn band_point(fp: &FixturePoint, cfg: &BandConfig) -> Result<KPointBands> {
    let gs = solve_ground_state(&fp.table, &cfg.ground)?;
    let target = fp.target();
    let solve = |sector, formulation| {
        let eom = EomConfig {
            formulation,
            ..cfg.eom.clone()
        };
        eom_spectrum(&fp.table, &gs.state, &gs.hamiltonian, sector, target, &eom)
            .map(|s| levels(&s.solution))
    };
    let ip = solve(Sector::Ip, Formulation::Projected)?;
    let ea = solve(Sector::Ea, Formulation::Projected)?;
    let np_bands = if cfg.eom_np {
        let ip_np = solve(Sector::Ip, Formulation::Unprojected)?;
        let ea_np = solve(Sector::Ea, Formulation::Unprojected)?;
        Some(assemble_bands(&ip_np, &ea_np, cfg.qpwt_min))
    } else {
        None
    };
    Ok(KPointBands {
        label: fp.point.label.clone(),
        k: fp.point.k,
        ground_energy: Some(gs.result.energy),
        adapt_converged: gs.result.converged,
        ansatz_length: gs.result.ansatz.len(),
        bands: assemble_bands(&ip, &ea, cfg.qpwt_min),
        ip_spectrum: ip,
        ea_spectrum: ea,
        np_bands,
        error: None,
    })
}

fn find_gap(points: &[KPointBands], pick: impl Fn(&KPointBands) -> Option<&Bands>) -> Option<Gap> {
    let vbm = points
        .iter()
        .filter_map(|p| {
            pick(p)
                .and_then(|b| b.valence.first())
                .map(|l| (l.energy_ev, &p.label))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))?;
    let cbm = points
        .iter()
        .filter_map(|p| {
            pick(p)
                .and_then(|b| b.conduction.first())
                .map(|l| (l.energy_ev, &p.label))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))?;
    Some(Gap {
        gap_ev: cbm.0 - vbm.0,
        k_valence: vbm.1.clone(),
        k_conduction: cbm.1.clone(),
    })
}

impl BandStructure {
    /// Builds gaps and applies the alignment shift.
    pub fn from_points(mut points: Vec<KPointBands>, alignment: Alignment) -> Self {
        if alignment == Alignment::VbmZero {
            let vbm = points
                .iter()
                .filter_map(|p| p.bands.valence.first().map(|l| l.energy_ev))
                .fold(f64::NEG_INFINITY, f64::max);
            if vbm.is_finite() {
                for p in &mut points {
                    let shift = |b: &mut Bands| {
                        for l in b.valence.iter_mut().chain(b.conduction.iter_mut()) {
                            l.energy_ev -= vbm;
                        }
                    };
                    shift(&mut p.bands);
                    if let Some(np) = p.np_bands.as_mut() {
                        shift(np);
                    }
                }
            }
        }
        let gap = find_gap(&points, |p| Some(&p.bands));
        let np_gap = find_gap(&points, |p| p.np_bands.as_ref());
        BandStructure {
            alignment,
            points,
            gap,
            np_gap,
        }
    }

    /// True when every k-point produced a converged ground state.
    pub fn all_converged(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.error.is_none() && p.adapt_converged)
    }
}

/// Runs every k-point independently and in parallel. A failing point is
/// recorded with its error and left without bands.
pub fn band_pipeline(fixtures: &[FixturePoint], cfg: &BandConfig) -> BandStructure {
    let points = fixtures
        .par_iter()
        .map(|fp| {
            band_point(fp, cfg).unwrap_or_else(|e| KPointBands {
                label: fp.point.label.clone(),
                k: fp.point.k,
                ground_energy: None,
                adapt_converged: false,
                ansatz_length: 0,
                bands: Bands::default(),
                ip_spectrum: Vec::new(),
                ea_spectrum: Vec::new(),
                np_bands: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    BandStructure::from_points(points, cfg.alignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_conversion() {
        assert_eq!(to_ev(0.0), 0.0);
        assert_eq!(to_ev(1.0), 27.211386245988);
        for x in [-3.5, 0.125, 1e-7, 42.0] {
            assert!((from_ev(to_ev(x)) - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn weak_and_degenerate_roots_filtered() {
        let ip = [
            Level {
                energy: 0.3,
                qpwt: 0.9,
            },
            Level {
                energy: 0.3 + 1e-10,
                qpwt: 0.95,
            },
            Level {
                energy: 0.5,
                qpwt: 0.2,
            },
            Level {
                energy: 0.8,
                qpwt: 0.7,
            },
        ];
        let b = assemble_bands(&ip, &[], 0.5);
        assert_eq!(b.valence.len(), 2);
        assert_eq!(b.valence[0].qpwt, 0.95);
        assert!(b.valence[0].energy_ev > b.valence[1].energy_ev);
        assert!((b.valence[1].energy_ev - to_ev(-0.8)).abs() < 1e-12);
    }

    #[test]
    fn gap_and_alignment() {
        let mk = |label: &str, v: f64, c: f64| KPointBands {
            label: label.into(),
            k: [0.0; 3],
            ground_energy: Some(0.0),
            adapt_converged: true,
            ansatz_length: 0,
            bands: Bands {
                valence: vec![BandLevel {
                    index: 0,
                    energy_ev: v,
                    qpwt: 1.0,
                }],
                conduction: vec![BandLevel {
                    index: 0,
                    energy_ev: c,
                    qpwt: 1.0,
                }],
            },
            ip_spectrum: vec![],
            ea_spectrum: vec![],
            np_bands: None,
            error: None,
        };
        let pts = vec![mk("G", -1.0, 3.0), mk("X", -0.5, 4.0)];
        let bs = BandStructure::from_points(pts.clone(), Alignment::PerK);
        let g = bs.gap.unwrap();
        assert!((g.gap_ev - 3.5).abs() < 1e-12);
        assert_eq!((g.k_valence.as_str(), g.k_conduction.as_str()), ("X", "G"));
        let aligned = BandStructure::from_points(pts, Alignment::VbmZero);
        assert_eq!(aligned.points[1].bands.valence[0].energy_ev, 0.0);
        assert!((aligned.gap.unwrap().gap_ev - 3.5).abs() < 1e-12);
        assert!(BandStructure::from_points(vec![], Alignment::PerK)
            .gap
            .is_none());
    }
}
