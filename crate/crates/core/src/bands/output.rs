//! JSON, CSV and text-chart renderings of a band structure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bands::{Alignment, BandLevel, BandStructure, Bands, KPointBands};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Asciiplot,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "asciiplot" => Ok(OutputFormat::Asciiplot),
            other => Err(Error::InvalidInput(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

const CSV_HEADER: [&str; 8] = [
    "k_label",
    "k1",
    "k2",
    "k3",
    "band_type",
    "index",
    "energy_ev",
    "qpwt",
];
const CSV_NP: [&str; 2] = ["energy_ev_np", "qpwt_np"];

impl BandStructure {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn has_np(&self) -> bool {
        self.points.iter().any(|p| p.np_bands.is_some())
    }

    /// One row per band level; the `_np` columns appear when any k-point
    /// carries unprojected results.
    pub fn to_csv(&self) -> Result<String> {
        let np = self.has_np();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = CSV_HEADER.to_vec();
        if np {
            header.extend(CSV_NP);
        }
        w.write_record(&header)?;
        let cell = |l: Option<&BandLevel>| -> [String; 2] {
            l.map_or([String::new(), String::new()], |l| {
                [l.energy_ev.to_string(), l.qpwt.to_string()]
            })
        };
        for p in &self.points {
            for kind in ["valence", "conduction"] {
                let pick = |b: &Bands| -> Vec<BandLevel> {
                    if kind == "valence" {
                        b.valence.clone()
                    } else {
                        b.conduction.clone()
                    }
                };
                let main = pick(&p.bands);
                let other = p.np_bands.as_ref().map(pick).unwrap_or_default();
                let rows = if np {
                    main.len().max(other.len())
                } else {
                    main.len()
                };
                for i in 0..rows {
                    let mut rec = vec![
                        p.label.clone(),
                        p.k[0].to_string(),
                        p.k[1].to_string(),
                        p.k[2].to_string(),
                    ];
                    rec.push(kind.into());
                    rec.push(i.to_string());
                    rec.extend(cell(main.get(i)));
                    if np {
                        rec.extend(cell(other.get(i)));
                    }
                    w.write_record(&rec)?;
                }
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Rebuilds the band levels written by [`BandStructure::to_csv`]. Spectra,
    /// energies and convergence flags are not part of the CSV and come back empty.
    pub fn from_csv(text: &str, alignment: Alignment) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let np = r.headers()?.len() > CSV_HEADER.len();
        let mut order: Vec<String> = Vec::new();
        let mut points: BTreeMap<String, KPointBands> = BTreeMap::new();
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad number `{s}` in band csv")))
        };
        let level = |index: usize, e: &str, q: &str| -> Result<Option<BandLevel>> {
            if e.is_empty() {
                return Ok(None);
            }
            Ok(Some(BandLevel {
                index,
                energy_ev: num(e)?,
                qpwt: num(q)?,
            }))
        };
        for rec in r.records() {
            let rec = rec?;
            let label = rec[0].to_string();
            let k = [num(&rec[1])?, num(&rec[2])?, num(&rec[3])?];
            let index: usize = rec[5]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad index `{}` in band csv", &rec[5])))?;
            let p = points.entry(label.clone()).or_insert_with(|| {
                order.push(label.clone());
                KPointBands {
                    label,
                    k,
                    ground_energy: None,
                    adapt_converged: true,
                    ansatz_length: 0,
                    bands: Bands::default(),
                    ip_spectrum: Vec::new(),
                    ea_spectrum: Vec::new(),
                    np_bands: np.then(Bands::default),
                    error: None,
                }
            });
            let valence = match &rec[4] {
                "valence" => true,
                "conduction" => false,
                other => return Err(Error::InvalidInput(format!("unknown band type `{other}`"))),
            };
            let push = |b: &mut Bands, l: BandLevel| {
                if valence {
                    b.valence.push(l)
                } else {
                    b.conduction.push(l)
                }
            };
            if let Some(l) = level(index, &rec[6], &rec[7])? {
                push(&mut p.bands, l);
            }
            if np {
                if let (Some(l), Some(b)) = (level(index, &rec[8], &rec[9])?, p.np_bands.as_mut()) {
                    push(b, l);
                }
            }
        }
        let points = order
            .into_iter()
            .filter_map(|l| points.remove(&l))
            .collect();
        // levels are already aligned, so rebuild gaps without shifting again
        let mut bs = BandStructure::from_points(points, Alignment::PerK);
        bs.alignment = alignment;
        Ok(bs)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Asciiplot => Ok(ascii_plot(self, 18)),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.render(format)?).map_err(|e| Error::io(path, e))
    }
}

/// Energy-versus-k chart: `v` marks valence levels, `c` conduction levels.
pub fn ascii_plot(bands: &BandStructure, height: usize) -> String {
    let height = height.max(2);
    let mut out = String::new();
    let all: Vec<f64> = bands
        .points
        .iter()
        .flat_map(|p| {
            p.bands
                .valence
                .iter()
                .chain(&p.bands.conduction)
                .map(|l| l.energy_ev)
        })
        .collect();
    if all.is_empty() {
        out.push_str("(no band levels)\n");
        return out;
    }
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-9);
    let col = 6;
    let row_of = |e: f64| ((hi - e) / span * (height - 1) as f64).round() as usize;
    let mut grid = vec![vec![' '; bands.points.len() * col]; height];
    for (i, p) in bands.points.iter().enumerate() {
        let x = i * col + col / 2;
        for (levels, mark) in [(&p.bands.valence, 'v'), (&p.bands.conduction, 'c')] {
            for l in levels {
                let cell = &mut grid[row_of(l.energy_ev)][x];
                *cell = if *cell == ' ' || *cell == mark {
                    mark
                } else {
                    '*'
                };
            }
        }
    }
    for (r, line) in grid.iter().enumerate() {
        let e = hi - span * r as f64 / (height - 1) as f64;
        let _ = writeln!(
            out,
            "{e:>9.3} |{}",
            line.iter().collect::<String>().trim_end()
        );
    }
    let _ = writeln!(out, "{:>9} +{}", "eV", "-".repeat(bands.points.len() * col));
    let labels: String = bands
        .points
        .iter()
        .map(|p| format!("{:^width$}", truncate(&p.label, col - 1), width = col))
        .collect();
    let _ = writeln!(out, "{:>9}  {}", "", labels.trim_end());
    if let Some(g) = &bands.gap {
        let _ = writeln!(
            out,
            "gap {:.4} eV ({} -> {})",
            g.gap_ev, g.k_valence, g.k_conduction
        );
    }
    out
}

fn truncate(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}
