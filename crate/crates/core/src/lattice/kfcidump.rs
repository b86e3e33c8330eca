//! The k-FCIDUMP text format.
//!
//! ```text
//! # comment
//! &KFCI NORB=2 NELEC=2 MESH=1,1,1 EHF=-1.249 ECONST=0.77 /
//! re im p kp q kq 0 0 0 0        one-body h(p kp, q kq)
//! re im p kp q kq r kr s ks      two-body g^{p kp, q kq}_{r kr, s ks}
//! re im 0 0 0 0 0 0 0 0          constant
//! ```
//!
//! Orbitals are 1-based, k indices are 0-based linear mesh indices. The
//! two-body value multiplies `a†_p a†_q a_r a_s` with an overall factor ½.
//! Every entry is listed explicitly; no permutational symmetry is implied.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::integrals::{IntegralTable, Orbital, VALIDATION_TOL};
use crate::lattice::kmesh::KMesh;

const HEADER_TAG: &str = "&KFCI";

pub fn parse_kfcidump(path: impl AsRef<Path>) -> Result<IntegralTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_kfcidump_str(&text)
}

struct Header {
    norb: usize,
    nelec: usize,
    mesh: KMesh,
    ehf: Option<f64>,
    econst: Option<f64>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(tokens: &[(usize, String)], end_line: usize) -> Result<Header> {
    let mut fields: HashMap<String, (usize, String)> = HashMap::new();
    for (line, tok) in tokens {
        let tok = tok.trim_end_matches(',');
        if tok.is_empty() {
            continue;
        }
        let (key, value) = tok.split_once('=').ok_or_else(|| {
            parse_error(*line, format!("expected KEY=VALUE in header, got `{tok}`"))
        })?;
        fields.insert(key.to_ascii_uppercase(), (*line, value.to_string()));
    }
    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| parse_error(end_line, format!("header is missing {key}")))
    };
    let int = |key: &str| -> Result<usize> {
        let (line, v) = get(key)?;
        v.parse().map_err(|_| {
            parse_error(
                line,
                format!("{key} must be a non-negative integer, got `{v}`"),
            )
        })
    };
    let real = |key: &str| -> Result<Option<f64>> {
        match fields.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| parse_error(*line, format!("{key} must be a number, got `{v}`"))),
        }
    };
    let norb = int("NORB")?;
    let nelec = int("NELEC")?;
    let (mesh_line, mesh_text) = get("MESH")?;
    let dims: Vec<usize> = mesh_text
        .split(',')
        .map(|s| s.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            parse_error(
                mesh_line,
                format!("MESH must be N1,N2,N3, got `{mesh_text}`"),
            )
        })?;
    let dims: [usize; 3] = dims
        .try_into()
        .map_err(|_| parse_error(mesh_line, "MESH needs exactly three dimensions"))?;
    let mesh = KMesh::new(dims).map_err(|e| parse_error(mesh_line, e.to_string()))?;
    if norb == 0 {
        return Err(parse_error(end_line, "NORB must be positive"));
    }
    Ok(Header {
        norb,
        nelec,
        mesh,
        ehf: real("EHF")?,
        econst: real("ECONST")?,
    })
}

enum Entry {
    Constant(f64),
    One([Orbital; 2], Complex64),
    Two([Orbital; 4], Complex64),
}

fn parse_entry(line_no: usize, line: &str, header: &Header) -> Result<Entry> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 10 {
        return Err(parse_error(
            line_no,
            format!("expected 10 fields, found {}", fields.len()),
        ));
    }
    let re: f64 = fields[0]
        .parse()
        .map_err(|_| parse_error(line_no, format!("bad real part `{}`", fields[0])))?;
    let im: f64 = fields[1]
        .parse()
        .map_err(|_| parse_error(line_no, format!("bad imaginary part `{}`", fields[1])))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(parse_error(line_no, "non-finite value"));
    }
    let idx: Vec<usize> = fields[2..]
        .iter()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_error(line_no, "indices must be non-negative integers"))?;
    let nk = header.mesh.num_kpoints();
    let orbital = |o: usize, k: usize| -> Result<Orbital> {
        if o == 0 || o > header.norb {
            return Err(parse_error(
                line_no,
                format!("orbital index {o} outside 1..={}", header.norb),
            ));
        }
        if k >= nk {
            return Err(parse_error(line_no, format!("k index {k} outside 0..{nk}")));
        }
        Ok(Orbital::new(k, o - 1))
    };
    let value = Complex64::new(re, im);
    if idx.iter().all(|&i| i == 0) {
        if im.abs() > VALIDATION_TOL {
            return Err(parse_error(line_no, "constant must be real"));
        }
        return Ok(Entry::Constant(re));
    }
    if idx[4..].iter().all(|&i| i == 0) {
        return Ok(Entry::One(
            [orbital(idx[0], idx[1])?, orbital(idx[2], idx[3])?],
            value,
        ));
    }
    Ok(Entry::Two(
        [
            orbital(idx[0], idx[1])?,
            orbital(idx[2], idx[3])?,
            orbital(idx[4], idx[5])?,
            orbital(idx[6], idx[7])?,
        ],
        value,
    ))
}

pub fn parse_kfcidump_str(text: &str) -> Result<IntegralTable> {
    let mut header_tokens: Vec<(usize, String)> = Vec::new();
    let mut header: Option<Header> = None;
    let mut in_header = false;
    let mut constant: Option<(usize, f64)> = None;
    let mut one_lines: BTreeMap<[Orbital; 2], usize> = BTreeMap::new();
    let mut two_lines: BTreeMap<[Orbital; 4], usize> = BTreeMap::new();
    let mut one_body = BTreeMap::new();
    let mut two_body = BTreeMap::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            let mut rest = line;
            if !in_header {
                rest = rest.strip_prefix(HEADER_TAG).ok_or_else(|| {
                    parse_error(
                        line_no,
                        format!("expected header starting with {HEADER_TAG}"),
                    )
                })?;
                in_header = true;
            }
            let mut closed = false;
            for tok in rest.split_whitespace() {
                if tok == "/" || tok.eq_ignore_ascii_case("&END") {
                    closed = true;
                    break;
                }
                header_tokens.push((line_no, tok.to_string()));
            }
            if closed {
                header = Some(parse_header(&header_tokens, line_no)?);
            }
            continue;
        }
        let h = header.as_ref().expect("header parsed");
        match parse_entry(line_no, line, h)? {
            Entry::Constant(c) => {
                if let Some((prev, _)) = constant {
                    return Err(parse_error(
                        line_no,
                        format!("duplicate constant entry (first on line {prev})"),
                    ));
                }
                constant = Some((line_no, c));
            }
            Entry::One(key, v) => {
                if let Some(prev) = one_lines.insert(key, line_no) {
                    return Err(parse_error(
                        line_no,
                        format!("duplicate entry (first on line {prev})"),
                    ));
                }
                let [p, q] = key;
                if !h.mesh.momentum_allowed_linear(&[p.k], &[q.k]) {
                    return Err(Error::MomentumViolation {
                        line: line_no,
                        detail: format!("k_p = {} differs from k_q = {}", p.k, q.k),
                    });
                }
                one_body.insert(key, v);
            }
            Entry::Two(key, v) => {
                if let Some(prev) = two_lines.insert(key, line_no) {
                    return Err(parse_error(
                        line_no,
                        format!("duplicate entry (first on line {prev})"),
                    ));
                }
                let [p, q, r, s] = key;
                if !h.mesh.momentum_allowed_linear(&[p.k, q.k], &[r.k, s.k]) {
                    return Err(Error::MomentumViolation {
                        line: line_no,
                        detail: format!(
                            "k_p + k_q - k_r - k_s = {} + {} - {} - {} is not a mesh vector",
                            p.k, q.k, r.k, s.k
                        ),
                    });
                }
                two_body.insert(key, v);
            }
        }
    }

    let header = header.ok_or_else(|| {
        parse_error(
            last_line.max(1),
            format!("missing or unterminated {HEADER_TAG} header"),
        )
    })?;
    let constant = match (constant, header.econst) {
        (Some((line, c)), Some(e)) => {
            if (c - e).abs() > 1e-8 {
                return Err(parse_error(
                    line,
                    format!("constant {c} disagrees with ECONST {e}"),
                ));
            }
            c
        }
        (Some((_, c)), None) => c,
        (None, Some(e)) => e,
        (None, None) => 0.0,
    };

    for (key, &v) in &one_body {
        let [p, q] = *key;
        let partner = one_body.get(&[q, p]).copied().unwrap_or_default();
        let deviation = (v - partner.conj()).norm();
        if deviation > VALIDATION_TOL {
            return Err(Error::NonHermitian {
                line: one_lines[key],
                deviation,
            });
        }
    }
    for (key, &v) in &two_body {
        let [p, q, r, s] = *key;
        let partner = two_body.get(&[s, r, q, p]).copied().unwrap_or_default();
        let deviation = (v - partner.conj()).norm();
        if deviation > VALIDATION_TOL {
            return Err(Error::NonHermitian {
                line: two_lines[key],
                deviation,
            });
        }
    }

    let table = IntegralTable {
        mesh: header.mesh,
        n_orb: header.norb,
        n_electrons: header.nelec,
        constant,
        ehf: header.ehf,
        one_body,
        two_body,
    };
    if table.n_electrons > table.num_modes() {
        return Err(Error::InvalidTable(format!(
            "NELEC={} exceeds {} spin orbitals",
            table.n_electrons,
            table.num_modes()
        )));
    }
    Ok(table)
}

/// Renders a table. Values are printed with 17 significant digits, so a
/// parse of the output reproduces every number exactly.
pub fn to_kfcidump_string(table: &IntegralTable) -> String {
    let [n1, n2, n3] = table.mesh.dims();
    let mut out = String::new();
    let _ = write!(
        out,
        "{HEADER_TAG} NORB={} NELEC={} MESH={n1},{n2},{n3}",
        table.n_orb, table.n_electrons
    );
    if let Some(e) = table.ehf {
        let _ = write!(out, " EHF={e:e}");
    }
    let _ = writeln!(out, " ECONST={:e} /", table.constant);
    let value = |v: Complex64| format!("{:>24.16e} {:>24.16e}", v.re, v.im);
    for (&[p, q], &v) in &table.one_body {
        let _ = writeln!(
            out,
            "{} {} {} {} {} 0 0 0 0",
            value(v),
            p.orb + 1,
            p.k,
            q.orb + 1,
            q.k
        );
    }
    for (&[p, q, r, s], &v) in &table.two_body {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {} {}",
            value(v),
            p.orb + 1,
            p.k,
            q.orb + 1,
            q.k,
            r.orb + 1,
            r.k,
            s.orb + 1,
            s.k
        );
    }
    let _ = writeln!(
        out,
        "{} 0 0 0 0 0 0 0 0",
        value(Complex64::new(table.constant, 0.0))
    );
    out
}

pub fn write_kfcidump(table: &IntegralTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_kfcidump_string(table)).map_err(|e| Error::io(path, e))
}
