//! Repeated noisy ground-state and IP/EA estimation with zero-noise extrapolation.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::GroundState;
use crate::eom::{build_basis, IndexSpace, Sector, SpinChannel};
use crate::error::{Error, Result};
use crate::lattice::{IntegralTable, KPoint};
use crate::linalg::CMatrix;
use crate::noise::density::DensityMatrix;
use crate::noise::eom::{pick_endpoint, solve_estimated, Endpoint, MeasurementPlan};
use crate::noise::estimate::{
    combine, estimate_paulis, noisy_state, zne_extrapolate, zne_extrapolate_all,
};
use crate::noise::NoiseSpec;
use crate::ops::PauliString;

/// Overlap cutoff used when solving from estimated matrices.
pub const NOISY_S_TOL: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseExperiment {
    pub spec: NoiseSpec,
    /// One seed per repeat; generated from `base_seed` when empty.
    pub seeds: Vec<u64>,
    pub base_seed: u64,
    pub k_target: KPoint,
    pub channel: SpinChannel,
    pub qpwt_min: f64,
    pub s_tol: f64,
}

impl Default for NoiseExperiment {
    fn default() -> Self {
        NoiseExperiment {
            spec: NoiseSpec::default(),
            seeds: Vec::new(),
            base_seed: 2021,
            k_target: KPoint([0, 0, 0]),
            channel: SpinChannel::Alpha,
            qpwt_min: 0.5,
            s_tol: NOISY_S_TOL,
        }
    }
}

impl NoiseExperiment {
    pub fn seed_list(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.spec.repeats as u64)
                .map(|i| self.base_seed.wrapping_add(i))
                .collect()
        } else {
            self.seeds.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatRecord {
    pub seed: u64,
    /// Per scale factor.
    pub energy: Vec<f64>,
    pub energy_stderr: Vec<f64>,
    pub energy_zne: f64,
    pub ip: Vec<Option<f64>>,
    pub ip_zne: Option<f64>,
    pub ea: Vec<Option<f64>>,
    pub ea_zne: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ideal {
    pub energy: f64,
    pub ip: Option<Endpoint>,
    pub ea: Option<Endpoint>,
}

/// Number of repeats where extrapolation beat the unmitigated scale-1 value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub energy: usize,
    pub ip: usize,
    pub ea: usize,
    pub repeats: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub config: NoiseExperiment,
    pub ideal: Ideal,
    /// Exact noisy energy (no sampling) at each scale.
    pub exact_energy: Vec<f64>,
    pub repeats: Vec<RepeatRecord>,
    pub improvement: Improvement,
}

fn closer(zne: Option<f64>, raw: Option<f64>, ideal: Option<f64>) -> bool {
    match (zne, raw, ideal) {
        (Some(z), Some(r), Some(i)) => (z - i).abs() < (r - i).abs(),
        _ => false,
    }
}

type Matrices = (f64, CMatrix, CMatrix);

fn flatten((e0, h, s): &Matrices) -> Vec<f64> {
    let mut v = vec![*e0];
    for m in [h, s] {
        for z in m.iter() {
            v.push(z.re);
            v.push(z.im);
        }
    }
    v
}

fn unflatten(v: &[f64], n: usize) -> Matrices {
    let m = |off: usize| {
        CMatrix::from_fn(n, n, |r, c| {
            // column-major as produced by `iter`
            let i = off + 2 * (c * n + r);
            num_complex::Complex64::new(v[i], v[i + 1])
        })
    };
    (v[0], m(1), m(1 + 2 * n * n))
}

fn endpoint(
    plan: &MeasurementPlan,
    m: &Matrices,
    s_tol: f64,
    qpwt_min: f64,
) -> Result<Option<f64>> {
    let sol = solve_estimated(plan, m.0, &m.1, &m.2, s_tol)?;
    Ok(pick_endpoint(&sol, qpwt_min).map(|e| e.energy))
}

/// Runs every repeat at every scale, extrapolates and compares with the ideal values.
pub fn run_noise_experiment(
    table: &IntegralTable,
    ground: &GroundState,
    cfg: &NoiseExperiment,
) -> Result<NoiseReport> {
    cfg.spec.validate()?;
    let scales = &cfg.spec.scale_factors;
    let h = &ground.hamiltonian;
    let plans = [Sector::Ip, Sector::Ea]
        .into_iter()
        .map(|s| {
            MeasurementPlan::new(
                h,
                &build_basis(table, s, cfg.k_target, cfg.channel, IndexSpace::General)?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let strings: Vec<PauliString> = {
        let mut all = plans[0].strings();
        all.extend(plans[1].strings());
        all.extend(h.terms().iter().map(|t| t.string));
        all.into_iter().collect()
    };

    let ideal_rho = DensityMatrix::from_statevector(&ground.state)?;
    let mut no_rng = ChaCha20Rng::seed_from_u64(0);
    let ideal_values = estimate_paulis(&ideal_rho, &strings, 0, &mut no_rng)?;
    let ideal_point = |p: &MeasurementPlan| -> Result<Option<Endpoint>> {
        let (e0, hm, sm) = p.assemble(&strings, &ideal_values);
        Ok(pick_endpoint(
            &solve_estimated(p, e0, &hm, &sm, cfg.s_tol)?,
            cfg.qpwt_min,
        ))
    };
    let ideal = Ideal {
        energy: combine(h, &strings, &ideal_values, 0).mean,
        ip: ideal_point(&plans[0])?,
        ea: ideal_point(&plans[1])?,
    };

    let states: Vec<DensityMatrix> = scales
        .par_iter()
        .map(|&s| {
            noisy_state(
                &ground.result.ansatz,
                &ground.pool,
                &ground.reference,
                cfg.spec.lambda * s,
            )
        })
        .collect::<Result<_>>()?;
    let exact_energy = states
        .iter()
        .map(|rho| {
            Ok(combine(
                h,
                &strings,
                &estimate_paulis(rho, &strings, 0, &mut no_rng)?,
                0,
            )
            .mean)
        })
        .collect::<Result<Vec<_>>>()?;

    let seeds = cfg.seed_list();
    let repeats: Vec<RepeatRecord> = seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut energy = Vec::new();
            let mut stderr = Vec::new();
            let mut mats: [Vec<Matrices>; 2] = [Vec::new(), Vec::new()];
            for rho in &states {
                let values = estimate_paulis(rho, &strings, cfg.spec.shots, &mut rng)?;
                let e = combine(h, &strings, &values, cfg.spec.shots);
                energy.push(e.mean);
                stderr.push(e.stderr);
                for (m, p) in mats.iter_mut().zip(&plans) {
                    m.push(p.assemble(&strings, &values));
                }
            }
            let pts: Vec<(f64, f64)> = scales.iter().copied().zip(energy.iter().copied()).collect();
            let energy_zne = zne_extrapolate(&pts)?;
            let mut per_scale: [Vec<Option<f64>>; 2] = [Vec::new(), Vec::new()];
            let mut zne: [Option<f64>; 2] = [None, None];
            for i in 0..2 {
                for m in &mats[i] {
                    per_scale[i].push(endpoint(&plans[i], m, cfg.s_tol, cfg.qpwt_min)?);
                }
                let series: Vec<Vec<f64>> = mats[i].iter().map(flatten).collect();
                let x = unflatten(&zne_extrapolate_all(scales, &series)?, plans[i].dim());
                zne[i] = endpoint(&plans[i], &x, cfg.s_tol, cfg.qpwt_min)?;
            }
            let [ip, ea] = per_scale;
            Ok(RepeatRecord {
                seed,
                energy,
                energy_stderr: stderr,
                energy_zne,
                ip,
                ip_zne: zne[0],
                ea,
                ea_zne: zne[1],
            })
        })
        .collect::<Result<_>>()?;

    let improvement = Improvement {
        energy: repeats
            .iter()
            .filter(|r| closer(Some(r.energy_zne), Some(r.energy[0]), Some(ideal.energy)))
            .count(),
        ip: repeats
            .iter()
            .filter(|r| closer(r.ip_zne, r.ip[0], ideal.ip.map(|e| e.energy)))
            .count(),
        ea: repeats
            .iter()
            .filter(|r| closer(r.ea_zne, r.ea[0], ideal.ea.map(|e| e.energy)))
            .count(),
        repeats: repeats.len(),
    };
    Ok(NoiseReport {
        config: cfg.clone(),
        ideal,
        exact_energy,
        repeats,
        improvement,
    })
}

impl NoiseReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per repeat, quantity and scale (`zne` for the extrapolated value).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["repeat", "seed", "quantity", "scale", "value", "ideal"])?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        let ideal_ip = self.ideal.ip.map(|e| e.energy);
        let ideal_ea = self.ideal.ea.map(|e| e.energy);
        for (i, r) in self.repeats.iter().enumerate() {
            let rows: [(&str, Vec<Option<f64>>, Option<f64>, Option<f64>); 3] = [
                (
                    "energy",
                    r.energy.iter().map(|&x| Some(x)).collect(),
                    Some(r.energy_zne),
                    Some(self.ideal.energy),
                ),
                ("ip", r.ip.clone(), r.ip_zne, ideal_ip),
                ("ea", r.ea.clone(), r.ea_zne, ideal_ea),
            ];
            for (name, values, zne, ideal) in rows {
                for (s, v) in self.config.spec.scale_factors.iter().zip(values) {
                    w.write_record([
                        i.to_string(),
                        r.seed.to_string(),
                        name.into(),
                        s.to_string(),
                        fmt(v),
                        fmt(ideal),
                    ])?;
                }
                w.write_record([
                    i.to_string(),
                    r.seed.to_string(),
                    name.into(),
                    "zne".into(),
                    fmt(zne),
                    fmt(ideal),
                ])?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn save(&self, path: impl AsRef<Path>, csv: bool) -> Result<()> {
        let path = path.as_ref();
        let text = if csv { self.to_csv()? } else { self.to_json()? };
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        let n = 3;
        let h = CMatrix::from_fn(n, n, |r, c| {
            num_complex::Complex64::new(r as f64, c as f64 + 0.5)
        });
        let s = CMatrix::from_fn(n, n, |r, c| {
            num_complex::Complex64::new((r * c) as f64, -1.0)
        });
        let m = (0.25, h, s);
        assert_eq!(unflatten(&flatten(&m), n), m);
    }

    #[test]
    fn seeds_derive_from_base() {
        let cfg = NoiseExperiment::default();
        assert_eq!(cfg.seed_list().len(), 16);
        assert_eq!(cfg.seed_list()[3], 2024);
    }
}
